#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grassdyn/reduction.hpp"
#include "grassdyn/rng.hpp"
#include "grassdyn/structure.hpp"

using namespace grassdyn;

namespace {

// a mixed structure on R^7: classical rho=1, real rho=2,
// classical rho=2
ChiView seven_view() {
    return ChiView::of({{BlockKind::classical, 2.0, 0.0, 1},
                        {BlockKind::real, 1.0, 0.7, 2},
                        {BlockKind::classical, 0.5, 0.0, 2}});
}

ChiView double_rotation_view() {
    return ChiView::of({{BlockKind::real, 1.0, 1.0, 1}, {BlockKind::real, 1.0, std::sqrt(2.0), 1}});
}

std::vector<BlockSpec> random_blocks(Rng& rng, std::size_t max_dim) {
    std::vector<BlockSpec> blocks;
    std::size_t n = 0;
    while (true) {
        BlockSpec s;
        s.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
        s.modulus = rng.uniform(0.3, 2.0);
        s.angle = rng.uniform(0.2, 2.9);
        s.rho = 1 + static_cast<int>(rng.below(3));
        if (n + s.dim() > max_dim) break;
        blocks.push_back(s);
        n += s.dim();
        if (rng.below(3) == 0 && !blocks.empty()) break;
    }
    if (blocks.empty()) blocks.push_back({BlockKind::classical, 1.0, 0.0, 1});
    return blocks;
}

} // namespace

TEST_CASE("chi slices follow the block-offset index arithmetic on R^7") {
    const auto view = seven_view();
    REQUIRE(view.rho() == 5);
    REQUIRE(view.ambient() == 7);
    Vec x = {1, 2, 3, 4, 5, 6, 7};
    CHECK(chi(x, 1, view).width == 1);
    CHECK(chi(x, 1, view).a == 1);
    CHECK(chi(x, 2, view).width == 2);
    CHECK(chi(x, 2, view).a == 2);
    CHECK(chi(x, 2, view).b == 3);
    CHECK(chi(x, 3, view).a == 4);
    CHECK(chi(x, 3, view).b == 5);
    CHECK(chi(x, 4, view).width == 1);
    CHECK(chi(x, 4, view).a == 6);
    CHECK(chi(x, 5, view).a == 7);
    CHECK_THROWS_AS(chi(x, 0, view), invalid_input);
    CHECK_THROWS_AS(chi(x, 6, view), invalid_input);
}

TEST_CASE("chi trivial structures") {
    const auto single = ChiView::of({{BlockKind::real, 1.0, 0.4, 1}});
    Vec x2 = {3.0, 4.0};
    CHECK(chi(x2, 1, single).a == 3.0);
    CHECK(chi(x2, 1, single).b == 4.0);

    const auto diag3 = ChiView::of({{BlockKind::classical, 1.0, 0.0, 1},
                                    {BlockKind::classical, 1.0, 0.0, 1},
                                    {BlockKind::classical, 1.0, 0.0, 1}});
    Vec x3 = {5.0, 6.0, 7.0};
    CHECK(chi(x3, 2, diag3).a == 6.0);
}

TEST_CASE("reduce: double rotation with basis {e1, e3}") {
    const auto view = double_rotation_view();
    const auto rb = reduce(view, {unit_axis(4, 0), unit_axis(4, 2)});
    CHECK(rb.kappa == std::vector<int>{1, 2, 3});
    CHECK(rb.lambda_dims == std::vector<int>{1, 1});
    // the e3 vector owns the last bi-component, so it is moved first
    CHECK(rb.vectors[0][2] == 1.0);
    CHECK(rb.vectors[1][0] == 1.0);
    const auto rep = verify_reduction(rb, view, {unit_axis(4, 0), unit_axis(4, 2)});
    CHECK(rep.pass);
}

TEST_CASE("reduce: all chi_rho components zero gives an empty first step") {
    const auto view = double_rotation_view();
    const auto rb = reduce(view, {unit_axis(4, 0), unit_axis(4, 1)});
    CHECK(rb.kappa[0] == 1);
    CHECK(rb.kappa[1] == 1); // Lambda_0 empty
    CHECK(rb.lambda_dims[0] == 0);
    CHECK(rb.lambda_dims[1] == 2);
    CHECK(rb.kappa[2] == 3);
}

TEST_CASE("reduce: dim-2 pivots are normalised to (0,1) and (1,0)") {
    const auto view = double_rotation_view();
    const Vec v1 = {1, 0, 0, 1};
    const Vec v2 = {0, 1, 1, 0};
    const auto rb = reduce(view, {v1, v2});
    CHECK(rb.lambda_dims[0] == 2);
    const auto c1 = chi(rb.vectors[0], 2, view);
    const auto c2 = chi(rb.vectors[1], 2, view);
    CHECK(std::fabs(c1.a - 0.0) < 1e-12);
    CHECK(std::fabs(c1.b - 1.0) < 1e-12);
    CHECK(std::fabs(c2.a - 1.0) < 1e-12);
    CHECK(std::fabs(c2.b - 0.0) < 1e-12);
    CHECK(verify_reduction(rb, view, {v1, v2}).pass);
}

TEST_CASE("reduce input validation") {
    const auto view = double_rotation_view();
    CHECK_THROWS_AS(reduce(view, {unit_axis(4, 0), unit_axis(4, 0)}), rank_deficiency);
    CHECK_THROWS_AS(
        reduce(view, {unit_axis(4, 0), unit_axis(4, 1), unit_axis(4, 2), unit_axis(4, 3),
                      Vec{1, 1, 1, 1}}),
        invalid_input);
    const auto empty = reduce(view, {});
    CHECK(empty.kappa == std::vector<int>{1, 1, 1});
}

TEST_CASE("verify_reduction notices a corrupted kappa") {
    const auto view = double_rotation_view();
    auto rb = reduce(view, {unit_axis(4, 0), unit_axis(4, 2)});
    rb.kappa[1] -= 1; // plant the fault
    const auto rep = verify_reduction(rb, view, {unit_axis(4, 0), unit_axis(4, 2)});
    CHECK_FALSE(rep.kappa_steps_ok);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("verify_reduction accepts any same-span original basis") {
    const auto view = double_rotation_view();
    const Vec v1 = unit_axis(4, 0), v2 = unit_axis(4, 2);
    const auto rb = reduce(view, {v1, v2});
    // rotate the original basis inside its own span
    Vec w1 = v1, w2 = v2;
    w1 = scaled(v1, 0.6);
    axpy(0.8, v2, w1);
    w2 = scaled(v1, -0.8);
    axpy(0.6, v2, w2);
    const auto rep = verify_reduction(rb, view, {w1, w2});
    CHECK(rep.span_ok);
    CHECK(rep.pass);
}

TEST_CASE("reduction is deterministic and shape-idempotent") {
    Rng rng(3141);
    const auto blocks = random_blocks(rng, 10);
    const auto view = ChiView::of(blocks);
    const std::size_t n = view.ambient();
    const std::size_t m = 1 + rng.below(n - 1);
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < m; ++j) basis.push_back(rng.normal_vector(n));

    const auto rb1 = reduce(view, basis);
    const auto rb2 = reduce(view, basis);
    REQUIRE(rb1.vectors.size() == rb2.vectors.size());
    for (std::size_t j = 0; j < rb1.vectors.size(); ++j)
        for (std::size_t k = 0; k < n; ++k) CHECK(rb1.vectors[j][k] == rb2.vectors[j][k]);
    CHECK(rb1.kappa == rb2.kappa);

    const auto again = reduce(view, rb1.vectors);
    CHECK(again.kappa == rb1.kappa);
    CHECK(again.lambda_dims == rb1.lambda_dims);
}

TEST_CASE("staircase properties hold on 200 random instances") {
    Rng rng(271828);
    int done = 0;
    while (done < 200) {
        const auto blocks = random_blocks(rng, 12);
        const auto view = ChiView::of(blocks);
        const std::size_t n = view.ambient();
        if (n < 2) continue;
        const std::size_t m = 1 + rng.below(n - 1);
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < m; ++j) basis.push_back(rng.normal_vector(n));
        const auto dec = svd(columns_to_matrix(basis));
        if (dec.s.back() < 1e-3) continue; // keep clearly independent inputs
        const auto rb = reduce(view, basis);
        const auto rep = verify_reduction(rb, view, basis);
        CHECK(rep.kappa_boundary_ok);
        CHECK(rep.kappa_steps_ok);
        CHECK(rep.pivot_independence_ok);
        CHECK(rep.staircase_ok);
        CHECK(rep.span_ok);
        // monotone staircase with increments at most 2
        for (std::size_t i = 0; i + 1 < rb.kappa.size(); ++i) {
            CHECK(rb.kappa[i + 1] >= rb.kappa[i]);
            CHECK(rb.kappa[i + 1] - rb.kappa[i] <= 2);
        }
        ++done;
    }
}
