#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grassdyn/blocks.hpp"
#include "grassdyn/linalg.hpp"
#include "grassdyn/matrix.hpp"
#include "grassdyn/rng.hpp"

using namespace grassdyn;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).norm_max(); }

} // namespace

TEST_CASE("rotation basics") {
    CHECK(max_diff(rotation(0.0), Matrix::identity(2)) == doctest::Approx(0.0).epsilon(1e-15));

    const Matrix quarter = rotation(M_PI / 2.0);
    const Matrix expected{{0.0, -1.0}, {1.0, 0.0}};
    CHECK(max_diff(quarter, expected) < 1e-15);

    // angle addition against the direct product oracle
    const Matrix lhs = rotation(0.3) * rotation(0.7);
    CHECK(max_diff(lhs, rotation(1.0)) < 1e-14);

    CHECK_THROWS_AS(rotation(std::nan("")), invalid_input);
}

TEST_CASE("rotation is orthogonal for 1000 random angles") {
    Rng rng(1234);
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.uniform(-50.0, 50.0);
        const Matrix r = rotation(theta);
        CHECK(max_diff(r.transpose() * r, Matrix::identity(2)) < 1e-12);
        CHECK(determinant(r) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jordan_block follows the repeated-diagonal convention") {
    const Matrix j = jordan_block({BlockKind::classical, 2.0, 0.0, 2});
    CHECK(max_diff(j, Matrix{{2, 2}, {0, 2}}) == 0.0);

    const double theta = 0.9;
    const Matrix single = jordan_block({BlockKind::real, 1.0, theta, 1});
    CHECK(max_diff(single, rotation(theta)) == 0.0);

    const Matrix d = jordan_block({BlockKind::real, 1.0, theta, 2});
    REQUIRE(d.rows() == 4);
    const Matrix r = rotation(theta);
    CHECK(max_diff(d.block(0, 0, 2, 2), r) == 0.0);
    CHECK(max_diff(d.block(0, 2, 2, 2), r) == 0.0);
    CHECK(max_diff(d.block(2, 2, 2, 2), r) == 0.0);
    CHECK(d.block(2, 0, 2, 2).norm_max() == 0.0);
}

TEST_CASE("block determinant magnitude is modulus^(tau*rho)") {
    Rng rng(99);
    for (int it = 0; it < 50; ++it) {
        BlockSpec spec;
        spec.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
        spec.modulus = rng.uniform(0.3, 2.0) * (spec.kind == BlockKind::classical && rng.below(2) ? -1.0 : 1.0);
        spec.angle = rng.uniform(0.1, 3.0);
        spec.rho = 1 + static_cast<int>(rng.below(4));
        const double det = determinant(jordan_block(spec));
        const double expect = std::pow(std::fabs(spec.modulus), static_cast<double>(spec.dim()));
        CHECK(std::fabs(std::fabs(det) - expect) <= 1e-9 * expect);
    }
}

TEST_CASE("jordan_block_power closed form") {
    SUBCASE("classical mu=1 rho=3 n=4") {
        const Matrix p = jordan_block_power({BlockKind::classical, 1.0, 0.0, 3}, 4);
        CHECK(max_diff(p, Matrix{{1, 4, 6}, {0, 1, 4}, {0, 0, 1}}) == 0.0);
        const Matrix oracle = matrix_power(jordan_block({BlockKind::classical, 1.0, 0.0, 3}), 4);
        CHECK(max_diff(p, oracle) < 1e-12);
    }
    SUBCASE("n=0 is the identity") {
        const Matrix p = jordan_block_power({BlockKind::real, 0.7, 1.1, 3}, 0);
        CHECK(max_diff(p, Matrix::identity(6)) == 0.0);
    }
    SUBCASE("real lambda=1 theta=0.5 rho=2 n=7") {
        const Matrix p = jordan_block_power({BlockKind::real, 1.0, 0.5, 2}, 7);
        const Matrix r35 = rotation(3.5);
        CHECK(max_diff(p.block(0, 0, 2, 2), r35) < 1e-12);
        CHECK(max_diff(p.block(0, 2, 2, 2), 7.0 * r35) < 1e-12);
        CHECK(max_diff(p.block(2, 2, 2, 2), r35) < 1e-12);
        const Matrix oracle = matrix_power(jordan_block({BlockKind::real, 1.0, 0.5, 2}), 7);
        CHECK(max_diff(p, oracle) <= 1e-9 * p.norm_max());
    }
}

TEST_CASE("closed form matches repeated squaring for random specs up to n=64") {
    Rng rng(2024);
    for (int it = 0; it < 60; ++it) {
        BlockSpec spec;
        spec.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
        spec.modulus = rng.uniform(0.5, 1.5);
        spec.angle = rng.uniform(-3.0, 3.0);
        spec.rho = 1 + static_cast<int>(rng.below(8));
        const Matrix base = jordan_block(spec);
        for (long long n : {0LL, 1LL, 2LL, 7LL, 31LL, 64LL}) {
            const Matrix closed = jordan_block_power(spec, n);
            const Matrix exact = jordan_block_power(spec, n, /*exact_binomials=*/true);
            const Matrix oracle = matrix_power(base, n);
            const double scale = std::max(closed.norm_max(), 1e-300);
            CHECK(max_diff(closed, oracle) <= 1e-9 * scale);
            CHECK(max_diff(exact, oracle) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("matrix_power basics") {
    CHECK(max_diff(matrix_power(Matrix::identity(2), 1000), Matrix::identity(2)) == 0.0);
    CHECK(max_diff(matrix_power(rotation(0.1), 10), rotation(1.0)) < 1e-13);
    const Matrix j = jordan_block({BlockKind::classical, 2.0, 0.0, 2});
    CHECK(max_diff(matrix_power(j, 3), Matrix{{8, 24}, {0, 8}}) < 1e-12);
    CHECK_THROWS_AS(matrix_power(Matrix(2, 3), 2), invalid_input);
}

TEST_CASE("convention scaling connects both block conventions") {
    Rng rng(7);
    for (int it = 0; it < 20; ++it) {
        BlockSpec spec;
        spec.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
        spec.modulus = rng.uniform(0.4, 2.2);
        spec.angle = rng.uniform(0.2, 2.8);
        spec.rho = 1 + static_cast<int>(rng.below(4));
        const Matrix d = convention_scaling(spec);
        const Matrix lhs = d * standard_jordan_block(spec) * inverse(d);
        CHECK(max_diff(lhs, jordan_block(spec)) < 1e-9 * jordan_block(spec).norm_max());
    }
}

TEST_CASE("qr and svd sanity") {
    Rng rng(5);
    for (int it = 0; it < 25; ++it) {
        const std::size_t m = 2 + rng.below(7), n = 1 + rng.below(m);
        const Matrix a = rng.gaussian_matrix(m, n);
        const auto f = qr_thin(a);
        CHECK(max_diff(f.q.transpose() * f.q, Matrix::identity(n)) < 1e-12);
        CHECK(max_diff(f.q * f.r, a) < 1e-12);

        const auto d = svd(a);
        Matrix sig(n, n);
        for (std::size_t i = 0; i < n; ++i) sig(i, i) = d.s[i];
        CHECK(max_diff(d.u * sig * d.v.transpose(), a) < 1e-12);
        CHECK(max_diff(d.u.transpose() * d.u, Matrix::identity(n)) < 1e-12);
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(d.s[i] >= d.s[i + 1]);
    }
}

TEST_CASE("lu inverse and determinant") {
    Rng rng(88);
    for (int it = 0; it < 20; ++it) {
        const std::size_t n = 1 + rng.below(8);
        Matrix a = rng.gaussian_matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) += 3.0; // keep well away from singular
        CHECK(max_diff(a * inverse(a), Matrix::identity(n)) < 1e-10);
    }
    CHECK_THROWS_AS(inverse(Matrix(3, 3)), singular_matrix);
}

TEST_CASE("matrix invariants are enforced at the boundary") {
    Matrix bad{{1.0, 2.0}, {3.0, std::nan("")}};
    CHECK_THROWS_AS(bad.validate(), invalid_input);
    CHECK_THROWS_AS(Matrix(0, 0).validate(), invalid_input);
    CHECK_THROWS_AS(jordan_block({BlockKind::classical, 0.0, 0.0, 1}), invalid_input);
}
