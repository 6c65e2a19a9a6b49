#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blocks.hpp"
#include "eigenvalues.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "subspace.hpp"

namespace grassdyn {

/**
 * A real Jordan decomposition: the block list, the ambient dimension, and
 * (when recovered from a general matrix) the similarity P with T = P J P^-1.
 */
struct JordanStructure {
    std::vector<BlockSpec> blocks;
    std::optional<Matrix> transform;
    std::size_t ambient_dim = 0;
    double residual = 0.0; // ||P J P^-1 - T||_max for recovered structures

    int rho() const {
        int r = 0;
        for (const auto& b : blocks) r += b.rho;
        return r;
    }

    std::size_t occupied_dim() const {
        std::size_t n = 0;
        for (const auto& b : blocks) n += b.dim();
        return n;
    }

    void validate() const {
        if (blocks.empty()) throw invalid_input("JordanStructure: no blocks");
        for (const auto& b : blocks) b.validate();
        if (occupied_dim() != ambient_dim)
            throw invalid_input("JordanStructure: block sizes do not sum to ambient dimension");
    }

    /// The block-diagonal Jordan matrix itself.
    Matrix jordan_matrix() const {
        validate();
        Matrix j(ambient_dim, ambient_dim);
        std::size_t off = 0;
        for (const auto& b : blocks) {
            j.set_block(off, off, jordan_block(b));
            off += b.dim();
        }
        return j;
    }
};

/// Block-diagonal operator from a block list, each block optionally scaled.
inline Matrix assemble(const std::vector<BlockSpec>& blocks,
                       const std::vector<double>& scalars = {}) {
    if (blocks.empty()) throw invalid_input("assemble: empty block list");
    if (!scalars.empty() && scalars.size() != blocks.size())
        throw invalid_input("assemble: scalar count does not match block count");
    std::size_t n = 0;
    for (const auto& b : blocks) {
        b.validate();
        n += b.dim();
    }
    Matrix t(n, n);
    std::size_t off = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Matrix blk = jordan_block(blocks[i]);
        if (!scalars.empty()) blk = scalars[i] * blk;
        t.set_block(off, off, blk);
        off += blocks[i].dim();
    }
    return t;
}

inline JordanStructure structure_of(std::vector<BlockSpec> blocks) {
    JordanStructure s;
    s.blocks = std::move(blocks);
    s.ambient_dim = s.occupied_dim();
    s.validate();
    return s;
}

/**
 * The supercyclicity floor computed from a structure: no n-supercyclic
 * subspace exists for n below the relative size rho, and independently none
 * below floor((N+1)/2) on R^N. Both are reported; the specific bound is the
 * smallest n that is not excluded. Optimality of rho is not claimed (for a
 * real Jordan block of relative size >= 2 the best constant is open).
 */
struct BoundReport {
    int relative_size = 0;        // rho
    int lower_bound_specific = 0; // rho: minimal n not excluded
    int lower_bound_universal = 0; // floor((N+1)/2)
    double normalization_scale = 1.0; // largest |modulus| in the structure
};

inline BoundReport bounds(const JordanStructure& s) {
    s.validate();
    BoundReport r;
    r.relative_size = s.rho();
    r.lower_bound_specific = r.relative_size;
    r.lower_bound_universal = static_cast<int>((s.ambient_dim + 1) / 2);
    r.normalization_scale = 0.0;
    for (const auto& b : s.blocks)
        r.normalization_scale = std::max(r.normalization_scale, std::fabs(b.modulus));
    return r;
}

/// diag(R_theta1, ..., R_thetaN) on R^(2N), plus a trailing 1x1 identity
/// block on R^(2N+1) when odd is set. Dense orbits require {pi, theta_i}
/// rationally independent; the constructor itself accepts any angles.
inline Matrix example_operator(const std::vector<double>& angles, bool odd) {
    if (angles.empty()) throw invalid_input("example_operator: no angles");
    const std::size_t n = 2 * angles.size() + (odd ? 1 : 0);
    Matrix t(n, n);
    for (std::size_t i = 0; i < angles.size(); ++i) t.set_block(2 * i, 2 * i, rotation(angles[i]));
    if (odd) t(n - 1, n - 1) = 1.0;
    return t;
}

/**
 * Heuristic rational-dependence hint: an angle is flagged when theta/pi is
 * within 1e-9 of a fraction with denominator <= 99 (continued-fraction
 * convergents). Flagged angles break the independence hypothesis of the
 * witness operators, so density runs should not be trusted with them.
 */
inline std::vector<bool> angle_independence_flags(const std::vector<double>& angles) {
    std::vector<bool> flags(angles.size(), false);
    const double pi = 3.14159265358979323846;
    for (std::size_t idx = 0; idx < angles.size(); ++idx) {
        double x = std::fabs(angles[idx] / pi);
        x -= std::floor(x);
        // continued fraction expansion of the fractional part
        double frac = x;
        long long pk = 1, pk1 = 0, qk = 0, qk1 = 1; // convergents p/q
        for (int step = 0; step < 24; ++step) {
            if (frac < 1e-12) { // x itself (or tail) is an integer: rational
                flags[idx] = true;
                break;
            }
            frac = 1.0 / frac;
            const double a = std::floor(frac);
            if (a > 1e15) {
                flags[idx] = true;
                break;
            }
            const long long ai = static_cast<long long>(a);
            const long long p = ai * pk + pk1, q = ai * qk + qk1;
            if (q > 99) break;
            pk1 = pk; pk = p;
            qk1 = qk; qk = q;
            if (std::fabs(x - static_cast<double>(p) / static_cast<double>(q)) < 1e-9) {
                flags[idx] = true;
                break;
            }
            frac -= a;
        }
        if (x < 1e-12) flags[idx] = true; // multiples of pi, including zero
    }
    return flags;
}

/**
 * Matrix of the operator induced on the orthogonal-complement coordinates of
 * an invariant subspace K: C^T T C with C an orthonormal complement frame.
 * Rejects K unless T K lies in K up to tol (max-norm residual reported in
 * the exception).
 */
inline Matrix quotient_operator(const Matrix& t, const Subspace& k, double tol = 1e-6) {
    if (!t.square() || t.rows() != k.ambient())
        throw invalid_input("quotient_operator: shape mismatch");
    if (k.dim() == k.ambient())
        throw invalid_input("quotient_operator: K is the whole space");
    const Matrix image = t * k.frame();
    double res = 0.0;
    for (std::size_t j = 0; j < image.cols(); ++j) {
        Vec r = project_out(k.frame(), image.col(j));
        for (double v : r) res = std::max(res, std::fabs(v));
    }
    if (res > tol)
        throw invariance_violation("quotient_operator: K is not invariant (residual " +
                                       std::to_string(res) + ")",
                                   res);
    const Matrix c = complement(k).frame();
    return c.transpose() * (t * c);
}

/**
 * Reads the block layout directly off a matrix that is already a Jordan form
 * in this library's convention (repeated cells on the diagonal and the first
 * super-diagonal, zero elsewhere). Blocks come back in layout order, which is
 * what the basis reduction needs; no eigenvalue computation is involved.
 * Throws invalid_input when the matrix is not in form.
 */
inline std::vector<BlockSpec> jordan_layout_of(const Matrix& t, double tol = 1e-9) {
    if (!t.square()) throw invalid_input("jordan_layout_of: matrix not square");
    const std::size_t n = t.rows();
    const double scale = std::max(t.norm_max(), 1e-300);
    const double eps = tol * scale;
    std::vector<BlockSpec> blocks;
    std::size_t off = 0;
    while (off < n) {
        BlockSpec spec;
        std::size_t width = 1;
        if (off + 1 < n && std::fabs(t(off + 1, off)) > eps) {
            // rotation-scaled 2x2 cell expected
            const double a = t(off, off), b = t(off + 1, off);
            if (std::fabs(t(off + 1, off + 1) - a) > eps || std::fabs(t(off, off + 1) + b) > eps)
                throw invalid_input("jordan_layout_of: 2x2 cell at offset " + std::to_string(off) +
                                    " is not a scaled rotation");
            spec.kind = BlockKind::real;
            spec.modulus = std::hypot(a, b);
            spec.angle = std::atan2(b, a);
            width = 2;
        } else {
            spec.kind = BlockKind::classical;
            spec.modulus = t(off, off);
            if (std::fabs(spec.modulus) <= eps)
                throw invalid_input("jordan_layout_of: zero modulus at offset " +
                                    std::to_string(off));
        }
        const Matrix cell = t.block(off, off, width, width);
        spec.rho = 1;
        while (off + (spec.rho + 1) * width <= n) {
            const std::size_t next = off + spec.rho * width;
            const Matrix super = t.block(next - width, next, width, width);
            if (super.norm_max() <= eps) break; // block ends here
            if ((super - cell).norm_max() > eps ||
                (t.block(next, next, width, width) - cell).norm_max() > eps)
                break;
            ++spec.rho;
        }
        blocks.push_back(spec);
        off += spec.dim();
    }
    // the parsed layout must reproduce the whole matrix (zeros included)
    if ((assemble(blocks) - t).norm_max() > eps)
        throw invalid_input(
            "jordan_layout_of: matrix is not a Jordan form in this convention; decompose first");
    return blocks;
}

// ---------------------------------------------------------------------------
// Structure recovery
// ---------------------------------------------------------------------------

namespace detail {

struct EigenCluster {
    std::complex<double> mean;
    int multiplicity = 0; // algebraic, counted over C for the upper half
    bool is_real = false;
};

inline std::string cluster_name(const std::complex<double>& z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::fabs(z.imag()) << "i";
    return os.str();
}

/// Realification of multiplication by (T - lambda I) for complex lambda:
/// acts on stacked (x; y) representing z = x + i y.
inline Matrix realified_shift(const Matrix& t, std::complex<double> lambda) {
    const std::size_t n = t.rows();
    Matrix m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = t(i, j);
            m(n + i, n + j) = t(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) -= lambda.real();
        m(n + i, n + i) -= lambda.real();
        m(i, n + i) += lambda.imag();
        m(n + i, i) -= lambda.imag();
    }
    return m;
}

/// Multiply-by-i on the realified space: (x; y) -> (-y; x).
inline Vec realified_i(const Vec& v) {
    const std::size_t n = v.size() / 2;
    Vec r(v.size());
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = -v[n + i];
        r[n + i] = v[i];
    }
    return r;
}

/// Null-space frame of m with singular values below thresh treated as zero.
inline Matrix null_space(const Matrix& m, double thresh) {
    const auto dec = svd(m);
    std::size_t rank = 0;
    while (rank < dec.s.size() && dec.s[rank] > thresh) ++rank;
    const std::size_t nullity = dec.s.size() - rank;
    return dec.v.block(0, rank, dec.v.rows(), nullity);
}

/// Kernel filtration K_1 subset K_2 subset ... of the operator given by
/// shifted: K_{k+1} is the preimage of K_k, computed as ker((I - Pi_k) A)
/// so no explicit matrix powers (and their underflow) ever appear.
inline std::vector<Matrix> kernel_staircase(const Matrix& shifted, int max_depth, double rank_rel,
                                            const std::string& where) {
    std::vector<Matrix> frames;
    const auto top = svd(shifted);
    const double thresh = std::max(top.s.front(), 1e-300) * rank_rel;
    Matrix work = shifted;
    for (int k = 0; k < max_depth; ++k) {
        const Matrix ker = null_space(work, thresh);
        if (ker.cols() == 0 && k == 0)
            throw unsupported_structure(where + ": no kernel at the reported eigenvalue");
        if (!frames.empty() && ker.cols() <= frames.back().cols()) break; // saturated
        frames.push_back(ker);
        // deflate: next staircase step works with (I - Pi) * shifted
        Matrix proj = shifted;
        for (std::size_t j = 0; j < proj.cols(); ++j) {
            Vec col = proj.col(j);
            proj.set_col(j, project_out(ker, col));
        }
        work = std::move(proj);
    }
    return frames;
}

struct Chain {
    std::vector<Vec> vectors; // vectors[j] is the level-(j+1) vector
};

/**
 * Extract Jordan chains from a kernel filtration. Standard downward pass:
 * chains started at the deepest level are pushed down with push_down; new
 * tops at level s are chosen from K_s, orthogonal to K_{s-1}, the pushed-down
 * vectors, and (for complex clusters) the i-multiples of everything chosen.
 */
template <typename PushDown>
inline std::vector<Chain> extract_chains(const std::vector<Matrix>& filtration, bool complex_mode,
                                         PushDown push_down, const std::string& where) {
    const int smax = static_cast<int>(filtration.size());
    std::vector<int> weyr(smax + 2, 0);
    for (int k = 1; k <= smax; ++k) {
        int d = static_cast<int>(filtration[k - 1].cols());
        int dprev = k >= 2 ? static_cast<int>(filtration[k - 2].cols()) : 0;
        weyr[k] = d - dprev;
        if (complex_mode && weyr[k] % 2 != 0)
            throw unsupported_structure(where + ": odd kernel growth in a complex cluster");
        if (complex_mode) weyr[k] /= 2;
        if (weyr[k] <= 0) throw unsupported_structure(where + ": kernel filtration not strict");
        if (k >= 2 && weyr[k] > weyr[k - 1])
            throw unsupported_structure(where + ": kernel growth is not monotone");
    }

    const std::size_t dim = filtration.front().rows();
    std::vector<Chain> chains;
    std::vector<Vec> used; // orthonormal set: K_{s-1} plus the level-s vectors taken so far
    auto take = [&](const Vec& v) {
        Vec r = v;
        for (const Vec& u : used) axpy(-dot(u, r), u, r);
        for (const Vec& u : used) axpy(-dot(u, r), u, r); // second pass for orthogonality
        const double nn = norm2(r);
        if (nn < 1e-10) return false;
        used.push_back(scaled(r, 1.0 / nn));
        return true;
    };

    for (int s = smax; s >= 1; --s) {
        used.clear();
        if (s >= 2) {
            const Matrix& below = filtration[s - 2];
            for (std::size_t j = 0; j < below.cols(); ++j) used.push_back(below.col(j));
        }
        // vectors already present at this level: chains longer than s
        for (const auto& c : chains) {
            if (static_cast<int>(c.vectors.size()) >= s) {
                take(c.vectors[s - 1]);
                if (complex_mode) take(realified_i(c.vectors[s - 1]));
            }
        }
        const int new_tops = weyr[s] - (s + 1 <= smax ? weyr[s + 1] : 0);
        for (int t = 0; t < new_tops; ++t) {
            // best K_s column after projecting out everything used
            const Matrix& ks = filtration[s - 1];
            Vec best;
            double best_norm = -1.0;
            for (std::size_t j = 0; j < ks.cols(); ++j) {
                Vec cand = ks.col(j);
                for (const Vec& u : used) axpy(-dot(u, cand), u, cand);
                const double nn = norm2(cand);
                if (nn > best_norm) {
                    best_norm = nn;
                    best = std::move(cand);
                }
            }
            if (best_norm < 1e-8)
                throw unsupported_structure(where + ": could not complete a Jordan chain");
            Chain chain;
            chain.vectors.assign(s, Vec(dim, 0.0));
            chain.vectors[s - 1] = scaled(best, 1.0 / best_norm);
            for (int j = s - 1; j >= 1; --j) chain.vectors[j - 1] = push_down(chain.vectors[j]);
            take(chain.vectors[s - 1]);
            if (complex_mode) take(realified_i(chain.vectors[s - 1]));
            // scale the whole chain to keep P columns of comparable size
            double mx = 0.0;
            for (const auto& v : chain.vectors) mx = std::max(mx, norm2(v));
            for (auto& v : chain.vectors)
                for (double& x : v) x /= mx;
            chains.push_back(std::move(chain));
        }
    }
    return chains;
}

struct RecoveredBlock {
    BlockSpec spec;
    std::vector<Vec> columns; // transform columns for this block
};

inline bool block_order(const RecoveredBlock& a, const RecoveredBlock& b) {
    const double ma = std::fabs(a.spec.modulus), mb = std::fabs(b.spec.modulus);
    if (std::fabs(ma - mb) > 1e-12 * std::max({ma, mb, 1.0})) return ma < mb;
    if (a.spec.kind != b.spec.kind) return a.spec.kind == BlockKind::classical;
    if (a.spec.rho != b.spec.rho) return a.spec.rho > b.spec.rho;
    if (a.spec.angle != b.spec.angle) return a.spec.angle < b.spec.angle;
    return a.spec.modulus < b.spec.modulus;
}

} // namespace detail

/**
 * Recover the real Jordan structure of an invertible matrix.
 *
 * Supported class: the true spectrum falls into clusters whose pairwise gap
 * exceeds 10*tol*scale; within a cluster the Jordan layout is read off the
 * kernel filtration of the shifted operator. Choose tol above the eigenvalue
 * splitting the computation itself introduces: a defective block of relative
 * size rho scatters computed eigenvalues over a ring of radius roughly
 * eps^(1/rho) (times the conditioning of any similarity applied to the
 * matrix). Matrices assembled by this library pass at the default; heavily
 * conjugated ones need a coarser tol.
 *
 * Blocks come back sorted by |modulus| ascending (classical before real on
 * ties, larger relative size first), with the transform P, T = P J P^-1,
 * and the achieved max-norm residual.
 */
inline JordanStructure recover_structure(const Matrix& t, double tol = 1e-8) {
    t.validate("recover_structure input");
    if (!t.square()) throw invalid_input("recover_structure: matrix not square");
    if (t.rows() > 64)
        throw invalid_input("recover_structure: dimensions beyond 64 are out of scope");
    if (tol <= 0.0) throw invalid_input("recover_structure: tolerance must be positive");
    const std::size_t n = t.rows();
    const double scale = std::max(t.norm_max(), 1e-300);
    const double rank_rel =
        std::min(std::max(0.5 * tol, 1e3 * std::numeric_limits<double>::epsilon()), 1e-6);

    const auto ev = eigenvalues(t);
    double spectral = 0.0;
    for (const auto& z : ev) spectral = std::max(spectral, std::abs(z));
    // Cluster gap lives on the eigenvalue scale, not the (possibly much
    // larger) matrix norm scale.
    const double gap = 10.0 * tol * std::max(spectral, 1e-300);

    // Greedy union-find clustering by distance <= gap.
    std::vector<int> parent(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j)
            if (std::abs(ev[i] - ev[j]) <= gap) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));

    std::vector<detail::EigenCluster> clusters;
    std::vector<int> roots;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const int r = find(static_cast<int>(i));
        auto it = std::find(roots.begin(), roots.end(), r);
        std::size_t idx;
        if (it == roots.end()) {
            roots.push_back(r);
            clusters.push_back({});
            idx = clusters.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - roots.begin());
        }
        clusters[idx].mean += ev[i];
        clusters[idx].multiplicity += 1;
    }
    for (auto& c : clusters) {
        c.mean /= static_cast<double>(c.multiplicity);
        c.is_real = std::fabs(c.mean.imag()) <= gap;
        if (c.is_real) c.mean = {c.mean.real(), 0.0};
        if (std::abs(c.mean) < tol)
            throw modulus_zero("recover_structure: eigenvalue cluster near " +
                               detail::cluster_name(c.mean) + " is below the modulus tolerance");
    }

    std::vector<detail::RecoveredBlock> recovered;
    std::size_t dim_accounted = 0;
    for (const auto& c : clusters) {
        if (!c.is_real && c.mean.imag() < 0.0) continue; // handled with the mirror cluster

        const std::string where = "recover_structure: cluster near " + detail::cluster_name(c.mean);
        if (c.is_real) {
            const double mu = c.mean.real();
            Matrix shifted = t;
            for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
            const auto filtration = detail::kernel_staircase(shifted, c.multiplicity, rank_rel, where);
            int total = static_cast<int>(filtration.back().cols());
            if (total != c.multiplicity)
                throw unsupported_structure(where + ": kernel filtration accounts for " +
                                            std::to_string(total) + " of " +
                                            std::to_string(c.multiplicity) + " eigenvalues");
            auto push = [&](const Vec& v) {
                Vec w = t * v;
                axpy(-mu, v, w);
                return scaled(w, 1.0 / mu);
            };
            auto chains = detail::extract_chains(filtration, false, push, where);
            for (auto& ch : chains) {
                detail::RecoveredBlock b;
                b.spec = {BlockKind::classical, mu, 0.0, static_cast<int>(ch.vectors.size())};
                b.columns = std::move(ch.vectors);
                dim_accounted += b.columns.size();
                recovered.push_back(std::move(b));
            }
        } else {
            const std::complex<double> lambda = c.mean;
            const Matrix shifted = detail::realified_shift(t, lambda);
            const auto filtration = detail::kernel_staircase(shifted, c.multiplicity, rank_rel, where);
            int total = static_cast<int>(filtration.back().cols());
            if (total != 2 * c.multiplicity)
                throw unsupported_structure(where + ": kernel filtration accounts for " +
                                            std::to_string(total / 2) + " of " +
                                            std::to_string(c.multiplicity) + " eigenvalues");
            const double r2 = std::norm(lambda);
            auto push = [&](const Vec& v) {
                // (1/lambda) (T - lambda) v in realified coordinates
                Vec w = shifted * v;
                Vec out(w.size());
                const std::size_t half = w.size() / 2;
                for (std::size_t i = 0; i < half; ++i) {
                    out[i] = (lambda.real() * w[i] + lambda.imag() * w[half + i]) / r2;
                    out[half + i] = (lambda.real() * w[half + i] - lambda.imag() * w[i]) / r2;
                }
                return out;
            };
            auto chains = detail::extract_chains(filtration, true, push, where);
            for (auto& ch : chains) {
                detail::RecoveredBlock b;
                const double modulus = std::abs(lambda);
                double angle = std::arg(lambda); // in (0, pi) for the upper cluster
                b.spec = {BlockKind::real, modulus, angle, static_cast<int>(ch.vectors.size())};
                for (const Vec& zv : ch.vectors) {
                    // z = x + i y stored stacked; real pair columns are (x, -y)
                    Vec u(n), w(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        u[i] = zv[i];
                        w[i] = -zv[n + i];
                    }
                    b.columns.push_back(std::move(u));
                    b.columns.push_back(std::move(w));
                }
                dim_accounted += b.columns.size();
                recovered.push_back(std::move(b));
            }
        }
    }

    if (dim_accounted != n)
        throw unsupported_structure("recover_structure: recovered blocks span " +
                                    std::to_string(dim_accounted) + " of " + std::to_string(n) +
                                    " dimensions");

    std::sort(recovered.begin(), recovered.end(), detail::block_order);

    JordanStructure s;
    s.ambient_dim = n;
    Matrix p(n, n);
    std::size_t col = 0;
    for (auto& b : recovered) {
        s.blocks.push_back(b.spec);
        for (auto& v : b.columns) {
            p.set_col(col, v);
            ++col;
        }
    }
    const Matrix j = s.jordan_matrix();
    Matrix pinv;
    try {
        pinv = inverse(p, "recover_structure transform");
    } catch (const singular_matrix&) {
        throw unsupported_structure("recover_structure: chain vectors do not form a basis");
    }
    s.residual = (p * j * pinv - t).norm_max();
    const double res_tol = std::max(tol, 1e-9) * std::max(1.0, scale) *
                           std::max(1.0, std::min(condition_2(p), 1e6));
    if (s.residual > res_tol)
        throw unsupported_structure("recover_structure: residual " + std::to_string(s.residual) +
                                    " exceeds structure tolerance " + std::to_string(res_tol));
    s.transform = std::move(p);
    return s;
}

} // namespace grassdyn
