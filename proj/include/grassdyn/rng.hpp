#pragma once

#include <cmath>
#include <cstdint>

#include "linalg.hpp"
#include "matrix.hpp"

namespace grassdyn {

/**
 * Seeded generator used everywhere randomness appears, so that a 64-bit seed
 * fully determines a run. splitmix64 core with Box-Muller normals; no
 * standard-library distributions, whose streams vary across implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// i in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    Vec normal_vector(std::size_t n) {
        Vec v(n);
        for (double& x : v) x = normal();
        return v;
    }

    Vec unit_vector(std::size_t n) {
        Vec v = normal_vector(n);
        double nn = norm2(v);
        while (nn < 1e-12) {
            v = normal_vector(n);
            nn = norm2(v);
        }
        return scaled(v, 1.0 / nn);
    }

    Matrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

    /// Orthonormal N x n frame drawn from the invariant measure.
    Matrix random_frame(std::size_t ambient, std::size_t dim) {
        return orthonormalize(gaussian_matrix(ambient, dim), "random_frame");
    }

    Matrix random_orthogonal(std::size_t n) { return random_frame(n, n); }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace grassdyn
