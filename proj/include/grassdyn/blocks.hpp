#pragma once

#include <cmath>
#include <string>

#include "bigint.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace grassdyn {

/// Plane rotation by theta: [[cos, -sin], [sin, cos]].
inline Matrix rotation(double theta) {
    if (!std::isfinite(theta)) throw invalid_input("rotation: non-finite angle");
    const double c = std::cos(theta), s = std::sin(theta);
    return Matrix{{c, -s}, {s, c}};
}

enum class BlockKind { classical, real };

/**
 * One Jordan block in the convention used throughout this library: the first
 * (block) super-diagonal carries the same entry as the main diagonal, i.e.
 * mu both on and above the diagonal for a classical block, lambda*R_theta both
 * on and above for a real block. The relative size rho counts diagonal cells,
 * so the block occupies rho coordinates when classical and 2*rho when real.
 */
struct BlockSpec {
    BlockKind kind = BlockKind::classical;
    double modulus = 1.0; // eigenvalue for classical blocks, |eigenvalue| for real
    double angle = 0.0;   // used only by real blocks
    int rho = 1;          // relative size

    int tau() const { return kind == BlockKind::real ? 2 : 1; }
    std::size_t dim() const { return static_cast<std::size_t>(tau() * rho); }

    void validate() const {
        if (!std::isfinite(modulus) || modulus == 0.0)
            throw invalid_input("BlockSpec: modulus must be finite and non-zero");
        if (kind == BlockKind::real && !std::isfinite(angle))
            throw invalid_input("BlockSpec: non-finite angle");
        if (kind == BlockKind::real && modulus < 0.0)
            throw invalid_input("BlockSpec: real block modulus must be positive");
        if (rho < 1) throw invalid_input("BlockSpec: relative size must be >= 1");
    }

    /// The 1x1 or 2x2 cell repeated along the diagonals.
    Matrix cell() const {
        if (kind == BlockKind::classical) return Matrix{{modulus}};
        return modulus * rotation(angle);
    }
};

inline const char* to_string(BlockKind k) {
    return k == BlockKind::real ? "real" : "classical";
}

inline Matrix jordan_block(const BlockSpec& spec) {
    spec.validate();
    const Matrix cell = spec.cell();
    const std::size_t t = cell.rows();
    Matrix b(spec.dim(), spec.dim());
    for (int i = 0; i < spec.rho; ++i) {
        b.set_block(i * t, i * t, cell);
        if (i + 1 < spec.rho) b.set_block(i * t, (i + 1) * t, cell);
    }
    return b;
}

namespace detail {

/// binom(n, k) by the multiplicative rule, product of (n-k+j)/j terms.
inline double binomial_double(long long n, long long k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (long long j = 1; j <= k; ++j) b *= static_cast<double>(n - k + j) / static_cast<double>(j);
    return b;
}

inline double binomial_exact_double(long long n, long long k) {
    if (k < 0 || k > n) return 0.0;
    return binomial_bigint(n, k).to_double();
}

} // namespace detail

/**
 * Closed-form n-th power of a Jordan block: the (block row j, block column
 * j+k) cell equals binom(n,k) * cell^n, everything else zero. cell^n is
 * mu^n for classical blocks and lambda^n * R_{n*theta} for real ones.
 *
 * Binomials are evaluated in floating point by default; set exact_binomials
 * to route them through big integers (used by the verification suites).
 */
inline Matrix jordan_block_power(const BlockSpec& spec, long long n, bool exact_binomials = false) {
    spec.validate();
    if (n < 0) throw invalid_input("jordan_block_power: negative exponent");
    const std::size_t t = static_cast<std::size_t>(spec.tau());
    if (n == 0) return Matrix::identity(spec.dim());
    Matrix cell_n(t, t);
    if (spec.kind == BlockKind::classical) {
        cell_n(0, 0) = std::pow(spec.modulus, static_cast<double>(n));
    } else {
        cell_n = std::pow(spec.modulus, static_cast<double>(n)) *
                 rotation(spec.angle * static_cast<double>(n));
    }
    Matrix p(spec.dim(), spec.dim());
    for (int k = 0; k < spec.rho; ++k) {
        const double b = exact_binomials ? detail::binomial_exact_double(n, k)
                                         : detail::binomial_double(n, k);
        if (b == 0.0) continue;
        const Matrix cb = b * cell_n;
        for (int j = 0; j + k < spec.rho; ++j) p.set_block(j * t, (j + k) * t, cb);
    }
    return p;
}

/// T^n by repeated squaring; T^0 is the identity.
inline Matrix matrix_power(const Matrix& t, long long n) {
    if (!t.square()) throw invalid_input("matrix_power: matrix not square");
    if (n < 0) throw invalid_input("matrix_power: negative exponent");
    Matrix acc = Matrix::identity(t.rows());
    Matrix base = t;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        if (n >>= 1) base = base * base;
    }
    return acc;
}

/// The same block in the textbook convention: ones (identity cells) on the
/// first super-diagonal instead of repeated diagonal cells.
inline Matrix standard_jordan_block(const BlockSpec& spec) {
    spec.validate();
    const std::size_t t = static_cast<std::size_t>(spec.tau());
    Matrix b(spec.dim(), spec.dim());
    const Matrix cell = spec.cell();
    const Matrix eye = Matrix::identity(t);
    for (int i = 0; i < spec.rho; ++i) {
        b.set_block(i * t, i * t, cell);
        if (i + 1 < spec.rho) b.set_block(i * t, (i + 1) * t, eye);
    }
    return b;
}

/**
 * Diagonal (block-diagonal for real kind) similarity taking the standard
 * unit-super-diagonal block to this library's convention:
 *
 *   jordan_block(spec) = D * standard_jordan_block(spec) * D^-1,
 *   D = blkdiag(cell^0, cell^-1, ..., cell^(1-rho)).
 *
 * Valid because the modulus is non-zero. The construction is ours; the
 * convention itself only fixes the similarity class.
 */
inline Matrix convention_scaling(const BlockSpec& spec) {
    spec.validate();
    const std::size_t t = static_cast<std::size_t>(spec.tau());
    const Matrix cell_inv = inverse(spec.cell(), "convention_scaling");
    Matrix d(spec.dim(), spec.dim());
    Matrix acc = Matrix::identity(t);
    for (int i = 0; i < spec.rho; ++i) {
        d.set_block(i * t, i * t, acc);
        if (i + 1 < spec.rho) acc = acc * cell_inv;
    }
    return d;
}

} // namespace grassdyn
