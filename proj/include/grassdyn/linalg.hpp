#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "matrix.hpp"

namespace grassdyn {

struct QrResult {
    Matrix q; // orthonormal columns
    Matrix r; // upper triangular
};

namespace detail {

/// Householder QR. With full_q the Q factor is square (m x m), otherwise thin
/// (m x n). Plain textbook loop; m, n stay tiny here.
inline QrResult householder_qr(const Matrix& a, bool full_q) {
    const std::size_t m = a.rows(), n = a.cols();
    Matrix r = a;
    std::vector<Vec> hh; // Householder vectors, length m each (leading zeros)
    hh.reserve(std::min(m, n));
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        double nx = 0.0;
        for (std::size_t i = k; i < m; ++i) nx += r(i, k) * r(i, k);
        nx = std::sqrt(nx);
        Vec v(m, 0.0);
        if (nx > 0.0) {
            const double alpha = (r(k, k) >= 0.0) ? -nx : nx;
            v[k] = r(k, k) - alpha;
            for (std::size_t i = k + 1; i < m; ++i) v[i] = r(i, k);
            double vn2 = 0.0;
            for (std::size_t i = k; i < m; ++i) vn2 += v[i] * v[i];
            if (vn2 > 0.0) {
                for (std::size_t j = k; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t i = k; i < m; ++i) s += v[i] * r(i, j);
                    s *= 2.0 / vn2;
                    for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i];
                }
            }
        }
        hh.push_back(std::move(v));
    }
    const std::size_t qcols = full_q ? m : n;
    Matrix q(m, qcols);
    for (std::size_t j = 0; j < std::min(m, qcols); ++j) q(j, j) = 1.0;
    for (std::size_t k = hh.size(); k-- > 0;) {
        const Vec& v = hh[k];
        double vn2 = 0.0;
        for (std::size_t i = k; i < m; ++i) vn2 += v[i] * v[i];
        if (vn2 == 0.0) continue;
        for (std::size_t j = 0; j < qcols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += v[i] * q(i, j);
            s *= 2.0 / vn2;
            for (std::size_t i = k; i < m; ++i) q(i, j) -= s * v[i];
        }
    }
    // Keep the upper-triangular part only; below-diagonal entries of the
    // working copy are reduction residue.
    const std::size_t rrows = full_q ? m : std::min(m, n);
    Matrix rr(rrows, n);
    for (std::size_t i = 0; i < rrows; ++i)
        for (std::size_t j = i; j < n; ++j) rr(i, j) = r(i, j);
    return {std::move(q), std::move(rr)};
}

} // namespace detail

inline QrResult qr_thin(const Matrix& a) {
    if (a.rows() < a.cols()) throw invalid_input("qr_thin: more columns than rows");
    return detail::householder_qr(a, false);
}
inline QrResult qr_full(const Matrix& a) { return detail::householder_qr(a, true); }

struct SvdResult {
    Matrix u;               // m x n, orthonormal columns
    std::vector<double> s;  // singular values, descending
    Matrix v;               // n x n orthogonal
};

/**
 * One-sided Jacobi SVD.
 *
 * Orthogonalises column pairs of a working copy until every pair is
 * numerically orthogonal; the column norms are then the singular values.
 * Accurate to machine precision at these sizes and has no trouble with the
 * exactly-zero singular values that the rank probes below depend on.
 */
inline SvdResult svd(const Matrix& a) {
    const bool flip = a.rows() < a.cols();
    Matrix w = flip ? a.transpose() : a;
    const std::size_t m = w.rows(), n = w.cols();
    Matrix v = Matrix::identity(n);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += w(i, p) * w(i, p);
                    aqq += w(i, q) * w(i, q);
                    apq += w(i, p) * w(i, q);
                }
                if (std::fabs(apq) <= 1e2 * eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        sig[j] = std::sqrt(s);
    }
    // Sort descending, permuting U and V alike.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });
    Matrix u(m, n), vv(n, n);
    std::vector<double> ss(n);
    for (std::size_t j = 0; j < n; ++j) {
        ss[j] = sig[idx[j]];
        const double inv = ss[j] > 0.0 ? 1.0 / ss[j] : 0.0;
        for (std::size_t i = 0; i < m; ++i) u(i, j) = w(i, idx[j]) * inv;
        for (std::size_t i = 0; i < n; ++i) vv(i, j) = v(i, idx[j]);
    }
    if (flip) return {std::move(vv), std::move(ss), std::move(u)};
    return {std::move(u), std::move(ss), std::move(vv)};
}

/// Largest/smallest singular value ratio; infinity when rank-deficient.
inline double condition_2(const Matrix& a) {
    auto dec = svd(a);
    const double lo = dec.s.back();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return dec.s.front() / lo;
}

struct LuResult {
    Matrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

inline LuResult lu_factor(const Matrix& a, const char* what = "lu_factor") {
    if (!a.square()) throw invalid_input(std::string(what) + ": matrix not square");
    const std::size_t n = a.rows();
    LuResult f{a, std::vector<std::size_t>(n), 1};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    const double tiny = a.norm_max() * n * std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(f.lu(i, k)) > std::fabs(f.lu(piv, k))) piv = i;
        if (std::fabs(f.lu(piv, k)) <= tiny)
            throw singular_matrix(std::string(what) + ": numerically singular");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const double lik = f.lu(i, k);
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
        }
    }
    return f;
}

inline Vec lu_solve(const LuResult& f, const Vec& b) {
    const std::size_t n = f.lu.rows();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

inline Matrix inverse(const Matrix& a, const char* what = "inverse") {
    const auto f = lu_factor(a, what);
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) inv.set_col(j, lu_solve(f, unit_axis(n, j)));
    return inv;
}

inline double determinant(const Matrix& a) {
    LuResult f;
    try {
        f = lu_factor(a, "determinant");
    } catch (const singular_matrix&) {
        return 0.0;
    }
    double d = f.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

/// Orthonormal basis for the column span; input must have full column rank.
inline Matrix orthonormalize(const Matrix& a, const char* what = "orthonormalize") {
    auto f = qr_thin(a);
    const double scale = a.norm_max();
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (std::fabs(f.r(j, j)) <= 1e-13 * std::max(1.0, scale))
            throw rank_deficiency(std::string(what) + ": columns numerically dependent");
    return f.q;
}

/// x minus its orthogonal projection onto the columns of frame.
inline Vec project_out(const Matrix& frame, const Vec& x) {
    Vec r = x;
    for (std::size_t j = 0; j < frame.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < frame.rows(); ++i) s += frame(i, j) * r[i];
        for (std::size_t i = 0; i < frame.rows(); ++i) r[i] -= s * frame(i, j);
    }
    return r;
}

} // namespace grassdyn
