#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace grassdyn {

using Vec = std::vector<double>;

/**
 * Dense row-major matrix of doubles.
 *
 * Everything in this library lives in small dimensions (N <= 64), so storage
 * is a flat std::vector and all algorithms are straightforward O(n^3) dense
 * loops. Values are immutable by convention once built; operations return
 * fresh matrices.
 */
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    /// Build from nested brace lists; rows must have equal length.
    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw invalid_input("matrix rows have unequal lengths");
            for (double v : r) a_.push_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const Vec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    /// Copy of the sub-block [r0, r0+nr) x [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    double norm_max() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::fabs(v));
        return m;
    }

    double norm_fro() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    /// Enforce the public invariants (finite entries, at least 1x1).
    void validate(const char* what = "matrix") const {
        if (rows_ == 0 || cols_ == 0) throw invalid_input(std::string(what) + ": empty");
        if (!all_finite()) throw invalid_input(std::string(what) + ": non-finite entry");
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw invalid_input("matrix addition: shape mismatch");
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) + y(i, j);
    return r;
}

inline Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw invalid_input("matrix subtraction: shape mismatch");
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
    return r;
}

inline Matrix operator*(double s, const Matrix& x) {
    Matrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = s * x(i, j);
    return r;
}

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.rows()) throw invalid_input("matrix product: shape mismatch");
    Matrix r(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const double xik = x(i, k);
            if (xik == 0.0) continue;
            for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Vec operator*(const Matrix& x, const Vec& v) {
    if (x.cols() != v.size()) throw invalid_input("matrix-vector product: shape mismatch");
    Vec r(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) s += x(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// Small vector helpers used throughout.

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec scaled(const Vec& x, double s) {
    Vec r(x);
    for (double& v : r) v *= s;
    return r;
}

/// y <- y + s*x
inline void axpy(double s, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

inline Vec vsub(const Vec& x, const Vec& y) {
    Vec r(x);
    for (std::size_t i = 0; i < x.size(); ++i) r[i] -= y[i];
    return r;
}

inline Vec unit_axis(std::size_t n, std::size_t k) {
    Vec e(n, 0.0);
    e[k] = 1.0;
    return e;
}

inline Matrix columns_to_matrix(const std::vector<Vec>& cols) {
    if (cols.empty()) return Matrix();
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows()) throw invalid_input("columns have unequal lengths");
        m.set_col(j, cols[j]);
    }
    return m;
}

} // namespace grassdyn
