#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "matrix.hpp"

namespace grassdyn {

namespace detail {

/// Parlett-Reinsch balancing (radix-2): diagonal similarity that roughly
/// equalises row and column norms. Eigenvalues are unchanged.
inline void balance_in_place(Matrix& a) {
    const std::size_t n = a.rows();
    bool done = false;
    int guard = 0;
    while (!done && ++guard < 100) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::fabs(a(j, i));
                r += std::fabs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (similarity).
inline void hessenberg_in_place(Matrix& h) {
    const int n = static_cast<int>(h.rows());
    Vec ort(n, 0.0);
    for (int m = 1; m < n - 1; ++m) {
        double scale = 0.0;
        for (int i = m; i < n; ++i) scale += std::fabs(h(i, m - 1));
        if (scale == 0.0) continue;
        double hsum = 0.0;
        for (int i = n - 1; i >= m; --i) {
            ort[i] = h(i, m - 1) / scale;
            hsum += ort[i] * ort[i];
        }
        double g = std::sqrt(hsum);
        if (ort[m] > 0.0) g = -g;
        hsum -= ort[m] * g;
        ort[m] -= g;
        for (int j = m; j < n; ++j) {
            double f = 0.0;
            for (int i = n - 1; i >= m; --i) f += ort[i] * h(i, j);
            f /= hsum;
            for (int i = m; i < n; ++i) h(i, j) -= f * ort[i];
        }
        for (int i = 0; i < n; ++i) {
            double f = 0.0;
            for (int j = n - 1; j >= m; --j) f += ort[j] * h(i, j);
            f /= hsum;
            for (int j = m; j < n; ++j) h(i, j) -= f * ort[j];
        }
        h(m, m - 1) = scale * g;
        for (int i = m + 1; i < n; ++i) h(i, m - 1) = 0.0;
    }
}

/// Francis double-shift QR on a Hessenberg matrix; eigenvalues only.
/// Classic EISPACK hqr with exceptional shifts at iterations 10 and 20.
inline std::vector<std::complex<double>> hqr_values(Matrix h) {
    const int nn = static_cast<int>(h.rows());
    std::vector<std::complex<double>> w(nn);
    const double eps = std::numeric_limits<double>::epsilon();
    double exshift = 0.0;
    double p = 0, q = 0, r = 0, s = 0, z = 0, x = 0, y = 0, ww = 0;

    double norm = 0.0;
    for (int i = 0; i < nn; ++i)
        for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::fabs(h(i, j));
    if (norm == 0.0) return w; // zero matrix

    int n = nn - 1;
    int iter = 0;
    int budget = 40 * nn + 40;
    while (n >= 0) {
        if (--budget < 0) throw internal_error("eigenvalues: QR iteration did not converge");
        int l = n;
        while (l > 0) {
            s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
            if (s == 0.0) s = norm;
            if (std::fabs(h(l, l - 1)) < eps * s) break;
            --l;
        }
        if (l == n) {
            h(n, n) += exshift;
            w[n] = {h(n, n), 0.0};
            --n;
            iter = 0;
        } else if (l == n - 1) {
            ww = h(n, n - 1) * h(n - 1, n);
            p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
            q = p * p + ww;
            z = std::sqrt(std::fabs(q));
            h(n, n) += exshift;
            h(n - 1, n - 1) += exshift;
            x = h(n, n);
            if (q >= 0.0) {
                z = (p >= 0.0) ? p + z : p - z;
                w[n - 1] = {x + z, 0.0};
                w[n] = (z != 0.0) ? std::complex<double>(x - ww / z, 0.0) : w[n - 1];
            } else {
                w[n - 1] = {x + p, z};
                w[n] = {x + p, -z};
            }
            n -= 2;
            iter = 0;
        } else {
            x = h(n, n);
            y = h(n - 1, n - 1);
            ww = h(n, n - 1) * h(n - 1, n);
            if (iter == 10 || iter == 20) {
                exshift += x;
                for (int i = 0; i <= n; ++i) h(i, i) -= x;
                s = std::fabs(h(n, n - 1)) + std::fabs(h(n - 1, n - 2));
                x = y = 0.75 * s;
                ww = -0.4375 * s * s;
            }
            ++iter;
            int m = n - 2;
            while (m >= l) {
                z = h(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - ww) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - r - s;
                r = h(m + 2, m + 1);
                s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                if (std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r)) <
                    eps * std::fabs(p) *
                        (std::fabs(h(m - 1, m - 1)) + std::fabs(z) + std::fabs(h(m + 1, m + 1))))
                    break;
                --m;
            }
            for (int i = m + 2; i <= n; ++i) {
                h(i, i - 2) = 0.0;
                if (i > m + 2) h(i, i - 3) = 0.0;
            }
            for (int k = m; k <= n - 1; ++k) {
                const bool notlast = (k != n - 1);
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = notlast ? h(k + 2, k - 1) : 0.0;
                    x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (s == 0.0) continue;
                if (k != m)
                    h(k, k - 1) = -s * x;
                else if (l != m)
                    h(k, k - 1) = -h(k, k - 1);
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= n; ++j) {
                    p = h(k, j) + q * h(k + 1, j);
                    if (notlast) {
                        p += r * h(k + 2, j);
                        h(k + 2, j) -= p * z;
                    }
                    h(k, j) -= p * x;
                    h(k + 1, j) -= p * y;
                }
                for (int i = l; i <= std::min(n, k + 3); ++i) {
                    p = x * h(i, k) + y * h(i, k + 1);
                    if (notlast) {
                        p += z * h(i, k + 2);
                        h(i, k + 2) -= p * r;
                    }
                    h(i, k) -= p;
                    h(i, k + 1) -= p * q;
                }
            }
        }
    }
    return w;
}

} // namespace detail

/**
 * All eigenvalues of a real square matrix as complex numbers, conjugate
 * pairs included. Balancing, Householder-Hessenberg reduction, then Francis
 * double-shift QR. No particular ordering is promised.
 */
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    if (!a.square()) throw invalid_input("eigenvalues: matrix not square");
    if (a.rows() == 0) return {};
    if (!a.all_finite()) throw invalid_input("eigenvalues: non-finite entry");
    if (a.rows() == 1) return {std::complex<double>(a(0, 0), 0.0)};
    Matrix h = a;
    detail::balance_in_place(h);
    detail::hessenberg_in_place(h);
    return detail::hqr_values(std::move(h));
}

} // namespace grassdyn
