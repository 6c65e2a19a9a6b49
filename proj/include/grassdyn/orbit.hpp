#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"
#include "subspace.hpp"

namespace grassdyn {

struct TargetOutcome {
    double min_distance = 0.0;
    long long argmin_iterate = 0;
};

/**
 * Outcome of a density scan: per-target minimum distance to the swept orbit
 * of subspaces, the iterate achieving it, and the hit count against the
 * threshold. Evidence, not proof: a full-hit report supports density, and
 * only the exact obstruction checks below certify its absence.
 */
struct DensityReport {
    std::size_t targets = 0;
    std::size_t hits = 0;
    std::vector<TargetOutcome> per_target;
    long long iterate_budget = 0;
    double epsilon = 0.0;
    double elapsed_seconds = 0.0;
};

namespace detail {

/// One orthonormalisation step of the orbit frame; throws when the raw image
/// loses rank (smallest singular value below 1e-12).
inline Matrix orbit_step(const Matrix& t, const Matrix& frame, long long k) {
    const Matrix image = t * frame;
    const auto f = qr_thin(image);
    const auto sig = svd(f.r).s;
    if (sig.back() < 1e-12)
        throw degenerate_orbit("orbit: frame image lost rank at iterate " + std::to_string(k + 1),
                               k + 1);
    return f.q;
}

inline int resolve_threads(int requested, std::size_t work_items) {
    int t = requested;
    if (t <= 0) t = 1;
    return static_cast<int>(std::min<std::size_t>(t, std::max<std::size_t>(work_items, 1)));
}

/// Runs fn(first, last) on contiguous slices of [0, n); slice boundaries and
/// results are index-deterministic regardless of the thread count.
template <typename Fn>
inline void partitioned(std::size_t n, int threads, Fn fn) {
    if (threads <= 1 || n <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t per = (n + threads - 1) / threads;
    for (int tid = 0; tid < threads; ++tid) {
        const std::size_t lo = std::min(n, tid * per), hi = std::min(n, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([=]() { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/**
 * Sweeps T^k(M) for k = 0..K and records, for every target point, the minimum
 * Euclidean distance to the swept subspace and the k achieving it. The orbit
 * frame is re-orthonormalised each step; the raw image is only used to detect
 * rank collapse. Per-target work may run on several threads; the partition is
 * by target index, so the report does not depend on the thread count.
 */
inline DensityReport orbit_point_density(const Matrix& t, const Subspace& m,
                                         const std::vector<Vec>& targets, long long K, double eps,
                                         int threads = 1) {
    if (!t.square() || t.rows() != m.ambient())
        throw invalid_input("orbit_point_density: shape mismatch");
    for (const auto& x : targets)
        if (x.size() != m.ambient()) throw invalid_input("orbit_point_density: bad target length");
    if (K < 0 || eps <= 0.0) throw invalid_input("orbit_point_density: bad budget or epsilon");

    const auto t0 = std::chrono::steady_clock::now();
    DensityReport rep;
    rep.targets = targets.size();
    rep.iterate_budget = K;
    rep.epsilon = eps;
    rep.per_target.assign(targets.size(), TargetOutcome{});

    detail::partitioned(targets.size(), detail::resolve_threads(threads, targets.size()),
                        [&](std::size_t lo, std::size_t hi) {
        if (lo >= hi) return;
        Matrix frame = m.frame();
        std::vector<TargetOutcome> local(hi - lo);
        for (std::size_t i = lo; i < hi; ++i)
            local[i - lo] = {norm2(project_out(frame, targets[i])), 0};
        for (long long k = 1; k <= K; ++k) {
            frame = detail::orbit_step(t, frame, k - 1);
            for (std::size_t i = lo; i < hi; ++i) {
                const double d = norm2(project_out(frame, targets[i]));
                if (d < local[i - lo].min_distance) local[i - lo] = {d, k};
            }
        }
        for (std::size_t i = lo; i < hi; ++i) rep.per_target[i] = local[i - lo];
    });

    for (const auto& o : rep.per_target)
        if (o.min_distance < eps) ++rep.hits;
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Same sweep measured in the Grassmannian: per target subspace, the minimum
/// chordal distance from T^k(M) over k = 0..K.
inline DensityReport orbit_grassmann_density(const Matrix& t, const Subspace& m,
                                             const std::vector<Subspace>& targets, long long K,
                                             double eps, int threads = 1) {
    if (!t.square() || t.rows() != m.ambient())
        throw invalid_input("orbit_grassmann_density: shape mismatch");
    for (const auto& s : targets)
        if (s.ambient() != m.ambient() || s.dim() != m.dim())
            throw invalid_input("orbit_grassmann_density: target dimensions must match M");
    if (K < 0 || eps <= 0.0) throw invalid_input("orbit_grassmann_density: bad budget or epsilon");

    const auto t0 = std::chrono::steady_clock::now();
    DensityReport rep;
    rep.targets = targets.size();
    rep.iterate_budget = K;
    rep.epsilon = eps;
    rep.per_target.assign(targets.size(), TargetOutcome{});

    detail::partitioned(targets.size(), detail::resolve_threads(threads, targets.size()),
                        [&](std::size_t lo, std::size_t hi) {
        if (lo >= hi) return;
        Matrix frame = m.frame();
        std::vector<TargetOutcome> local(hi - lo);
        auto sweep = [&](long long k) {
            const auto cur = Subspace::from_frame(frame);
            for (std::size_t i = lo; i < hi; ++i) {
                const double d = grassmann_distance(cur, targets[i]).chordal;
                if (k == 0 || d < local[i - lo].min_distance) local[i - lo] = {d, k};
            }
        };
        sweep(0);
        for (long long k = 1; k <= K; ++k) {
            frame = detail::orbit_step(t, frame, k - 1);
            sweep(k);
        }
        for (std::size_t i = lo; i < hi; ++i) rep.per_target[i] = local[i - lo];
    });

    for (const auto& o : rep.per_target)
        if (o.min_distance < eps) ++rep.hits;
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Distance between angles on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
    const double two_pi = 6.283185307179586476925286766559;
    double d = std::fmod(a - b, two_pi);
    if (d < 0.0) d += two_pi;
    return std::min(d, two_pi - d);
}

struct KroneckerResult {
    bool found = false;
    long long iterate = 0;
    std::vector<double> errors; // circular distances at the found iterate
};

/**
 * Smallest k <= K with circular_distance(k * theta_j, phi_j) < eps for all j.
 * A plain linear scan with incremental angle accumulation; the returned k is
 * re-verified with direct fmod reductions before being reported so the
 * accumulated state cannot vouch for itself. Not finding a k in budget is a
 * value, not an error.
 */
inline KroneckerResult kronecker_find(const std::vector<double>& angles,
                                      const std::vector<double>& phases, double eps, long long K) {
    if (angles.size() != phases.size() || angles.empty())
        throw invalid_input("kronecker_find: angle/phase lists must match and be non-empty");
    if (eps <= 0.0 || K < 0) throw invalid_input("kronecker_find: bad epsilon or budget");
    const double two_pi = 6.283185307179586476925286766559;
    const std::size_t m = angles.size();
    std::vector<double> state(m, 0.0);
    for (long long k = 0; k <= K; ++k) {
        bool all = true;
        for (std::size_t j = 0; j < m && all; ++j)
            all = circular_distance(state[j], phases[j]) < eps;
        if (all) {
            KroneckerResult res;
            res.iterate = k;
            res.found = true;
            res.errors.resize(m);
            for (std::size_t j = 0; j < m; ++j) {
                const double exact = std::fmod(static_cast<double>(k) * angles[j], two_pi);
                res.errors[j] = circular_distance(exact, phases[j]);
                if (res.errors[j] >= eps) res.found = false; // drift: keep scanning
            }
            if (res.found) return res;
        }
        for (std::size_t j = 0; j < m; ++j) {
            state[j] += angles[j];
            state[j] = std::fmod(state[j], two_pi);
        }
    }
    return {};
}

struct DualOperator {
    Matrix matrix;    // (T^-1)^T
    double condition; // sigma_max / sigma_min of T
};

/// Transpose of the inverse; the operator orbiting complements under the
/// duality M -> M-perp.
inline DualOperator dual_operator(const Matrix& t) {
    if (!t.square()) throw invalid_input("dual_operator: matrix not square");
    DualOperator d{inverse(t, "dual_operator").transpose(), condition_2(t)};
    return d;
}

/**
 * Measures the duality identity (T^i M)-perp = ((T^-1)^T)^i (M-perp): the
 * worst chordal distance between the two sides over i = 0..i_max, with both
 * orbits maintained incrementally on orthonormal frames.
 */
inline double duality_check(const Matrix& t, const Subspace& m, long long i_max) {
    if (!t.square() || t.rows() != m.ambient()) throw invalid_input("duality_check: shape mismatch");
    const Matrix d = dual_operator(t).matrix;
    Matrix forward = m.frame();
    Matrix dual_frame = complement(m).frame();
    double worst = 0.0;
    for (long long i = 0;; ++i) {
        const auto lhs = complement(Subspace::from_frame(forward));
        const auto rhs = Subspace::from_frame(dual_frame);
        worst = std::max(worst, grassmann_distance(lhs, rhs).chordal);
        if (i == i_max) break;
        forward = detail::orbit_step(t, forward, i);
        dual_frame = detail::orbit_step(d, dual_frame, i);
    }
    return worst;
}

struct MembershipReport {
    bool member = false;
    int dim_first = 0;  // dim(M meet R^2 x {0})
    int dim_second = 0; // dim(M meet {0} x R^2)
    Vec witness_first;  // unit intersection directions, when present
    Vec witness_second;
};

namespace detail {

/// Intersection of M with a coordinate plane via principal cosines: each
/// singular value of frame(M)^T frame(E) within tol of 1 contributes one
/// common direction.
inline void plane_intersection(const Subspace& m, std::size_t plane_offset, double tol, int& dim,
                               Vec& witness) {
    Matrix e(4, 2);
    e(plane_offset, 0) = 1.0;
    e(plane_offset + 1, 1) = 1.0;
    const Matrix cross = m.frame().transpose() * e;
    const auto dec = svd(cross);
    dim = 0;
    for (double s : dec.s)
        if (s >= 1.0 - tol) ++dim;
    if (dim >= 1) {
        // direction in M whose projection onto the plane has unit length
        Vec u = dec.u.col(0);
        witness = m.frame() * u;
    }
}

} // namespace detail

/**
 * Membership in the two-parameter family of 2-supercyclic subspaces of the
 * double rotation on R^4: M belongs exactly when it meets R^2 x {0} in one
 * line and {0} x R^2 in another. The two intersection directions are the
 * witnesses.
 */
inline MembershipReport esp2sup_membership(const Subspace& m, double tol = 1e-9) {
    if (m.ambient() != 4 || m.dim() != 2)
        throw invalid_input("esp2sup_membership: needs a 2-dimensional subspace of R^4");
    MembershipReport rep;
    detail::plane_intersection(m, 0, tol, rep.dim_first, rep.witness_first);
    detail::plane_intersection(m, 2, tol, rep.dim_second, rep.witness_second);
    rep.member = rep.dim_first == 1 && rep.dim_second == 1;
    return rep;
}

struct RankLockReport {
    bool holds = false;
    double worst_second_singular = 0.0; // of the first bi-component projection
    double worst_angle_deviation = 0.0; // | max principal angle - pi/2 |
    long long first_violation = -1;
    long long iterates = 0;
};

namespace detail {

inline bool is_double_rotation(const Matrix& t) {
    if (!t.square() || t.rows() != 4) return false;
    const double scale = std::max(t.norm_max(), 1e-300);
    if (t.block(0, 2, 2, 2).norm_max() > 1e-12 * scale) return false;
    if (t.block(2, 0, 2, 2).norm_max() > 1e-12 * scale) return false;
    for (std::size_t b : {std::size_t{0}, std::size_t{2}}) {
        const Matrix blk = t.block(b, b, 2, 2);
        const Matrix gram = blk.transpose() * blk;
        const double a2 = 0.5 * (gram(0, 0) + gram(1, 1));
        if (a2 <= 0.0) return false;
        if ((gram - a2 * Matrix::identity(2)).norm_max() > 1e-10 * a2) return false;
        if (determinant(blk) < 0.0) return false; // rotations only, no reflections
    }
    return true;
}

} // namespace detail

/**
 * The exact lock behind the strong-failure obstruction: for a member subspace
 * of the double-rotation family, every iterate's first bi-component
 * projection has rank one, and the maximal principal angle to R^2 x {0}
 * stays pinned at pi/2. Reported as worst deviations over k = 0..K.
 */
inline RankLockReport projection_rank_lock(const Matrix& t, const Subspace& m, long long K,
                                           double tol = 1e-10) {
    if (!detail::is_double_rotation(t))
        throw invalid_input("projection_rank_lock: operator is not a double rotation on R^4");
    if (!esp2sup_membership(m).member)
        throw invalid_input("projection_rank_lock: subspace is not in the membership family");
    const double half_pi = 1.5707963267948966192313216916398;
    RankLockReport rep;
    rep.iterates = K;
    rep.holds = true;
    const auto e12 = Subspace::span_of({unit_axis(4, 0), unit_axis(4, 1)});
    Matrix frame = m.frame();
    for (long long k = 0;; ++k) {
        const auto sig = svd(frame.block(0, 0, 2, 2)).s;
        const double second = sig.back();
        const double dev =
            std::fabs(grassmann_distance(Subspace::from_frame(frame), e12).max_angle - half_pi);
        rep.worst_second_singular = std::max(rep.worst_second_singular, second);
        rep.worst_angle_deviation = std::max(rep.worst_angle_deviation, dev);
        if ((second >= tol || dev >= tol) && rep.first_violation < 0) rep.first_violation = k;
        if (k == K) break;
        frame = detail::orbit_step(t, frame, k);
    }
    rep.holds = rep.first_violation < 0;
    return rep;
}

struct NormRatioReport {
    bool holds = false;
    double worst_log_mismatch = 0.0; // absolute error of the identity in log scale
    std::vector<double> scales;      // recovered |a_i| per block
    long long iterates = 0;
};

/**
 * The fixed norm-ratio invariant of block-diagonal scaled isometries: writing
 * b_i(v) for the norm of v's block-i slice,
 *
 *   b_i(T^k x) * |a_j|^k * b_j(x) = b_j(T^k x) * |a_i|^k * b_i(x)
 *
 * for every block pair and every k. Verified in log scale so large k and
 * spread-out scales cannot overflow; blocks where x vanishes stay exactly
 * invariant and are checked for that instead. This is the obstruction that
 * keeps one-dimensional orbits away from targets with a mismatched block
 * profile.
 */
inline NormRatioReport norm_ratio_invariant(const Matrix& t, const std::vector<std::size_t>& dims,
                                            const Vec& x, long long K, double tol = 1e-9) {
    if (!t.square()) throw invalid_input("norm_ratio_invariant: matrix not square");
    std::size_t total = 0;
    for (auto d : dims) total += d;
    if (total != t.rows() || dims.empty())
        throw invalid_input("norm_ratio_invariant: block dimensions do not sum to the ambient");
    if (x.size() != t.rows() || norm2(x) == 0.0)
        throw invalid_input("norm_ratio_invariant: x must be a non-zero vector of matching length");

    const double scale = std::max(t.norm_max(), 1e-300);
    NormRatioReport rep;
    rep.iterates = K;
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (auto d : dims) {
        offsets.push_back(off);
        off += d;
    }
    // validate the shape: zero off-diagonal blocks, each diagonal block a
    // scalar multiple of an isometry
    for (std::size_t i = 0; i < dims.size(); ++i) {
        for (std::size_t j = 0; j < dims.size(); ++j) {
            if (i == j) continue;
            if (t.block(offsets[i], offsets[j], dims[i], dims[j]).norm_max() > 1e-12 * scale)
                throw invalid_input("norm_ratio_invariant: operator is not block-diagonal");
        }
        const Matrix blk = t.block(offsets[i], offsets[i], dims[i], dims[i]);
        const Matrix gram = blk.transpose() * blk;
        double a2 = 0.0;
        for (std::size_t d = 0; d < dims[i]; ++d) a2 += gram(d, d);
        a2 /= static_cast<double>(dims[i]);
        if (a2 <= 0.0 || (gram - a2 * Matrix::identity(dims[i])).norm_max() > 1e-9 * a2)
            throw invalid_input("norm_ratio_invariant: block " + std::to_string(i) +
                                " is not a scaled isometry");
        rep.scales.push_back(std::sqrt(a2));
    }

    auto block_norm = [&](const Vec& v, std::size_t i) {
        double s = 0.0;
        for (std::size_t d = 0; d < dims[i]; ++d) s += v[offsets[i] + d] * v[offsets[i] + d];
        return std::sqrt(s);
    };

    std::vector<double> base(dims.size());
    std::vector<bool> zero_block(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        base[i] = block_norm(x, i);
        zero_block[i] = base[i] <= 1e-14 * norm2(x);
    }

    Vec w = scaled(x, 1.0 / norm2(x));
    rep.holds = true;
    for (long long k = 0;; ++k) {
        for (std::size_t i = 0; i < dims.size(); ++i) {
            const double bi = block_norm(w, i);
            if (zero_block[i]) {
                if (bi > 1e-9) rep.holds = false;
                continue;
            }
            if (bi < 1e-280) continue; // decayed below the verification floor
            for (std::size_t j = i + 1; j < dims.size(); ++j) {
                if (zero_block[j]) continue;
                const double bj = block_norm(w, j);
                if (bj < 1e-280) continue;
                const double lhs = std::log(bi) - std::log(bj);
                const double rhs = static_cast<double>(k) * (std::log(rep.scales[i]) -
                                                             std::log(rep.scales[j])) +
                                   std::log(base[i]) - std::log(base[j]);
                rep.worst_log_mismatch = std::max(rep.worst_log_mismatch, std::fabs(lhs - rhs));
            }
        }
        if (k == K) break;
        w = t * w;
        const double nn = norm2(w);
        if (nn == 0.0) throw degenerate_orbit("norm_ratio_invariant: orbit collapsed", k + 1);
        w = scaled(w, 1.0 / nn);
    }
    if (rep.worst_log_mismatch > tol) rep.holds = false;
    return rep;
}

} // namespace grassdyn
