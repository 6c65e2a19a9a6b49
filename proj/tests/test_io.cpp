#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grassdyn/io.hpp"
#include "grassdyn/recipes.hpp"
#include "grassdyn/rng.hpp"

using namespace grassdyn;

TEST_CASE("matrix json round trip") {
    Rng rng(3);
    const Matrix m = rng.gaussian_matrix(4, 3);
    const Matrix back = matrix_from_json(matrix_to_json(m), "round-trip");
    CHECK((m - back).norm_max() == 0.0);
}

TEST_CASE("matrix json errors carry a location") {
    CHECK_THROWS_AS(matrix_from_json(json::array(), "empty"), parse_error);
    CHECK_THROWS_WITH_AS(matrix_from_json(json::parse("[[1,2],[3]]"), "jagged"),
                         doctest::Contains("row 2"), parse_error);
    CHECK_THROWS_WITH_AS(matrix_from_json(json::parse("[[1,\"x\"]]"), "types"),
                         doctest::Contains("column 2"), parse_error);
    CHECK_THROWS_AS(parse_json("[1, 2,", "broken"), parse_error);
}

TEST_CASE("matrix csv round trip and errors") {
    Rng rng(4);
    const Matrix m = rng.gaussian_matrix(3, 5);
    const Matrix back = matrix_from_csv(matrix_to_csv(m), "round-trip");
    CHECK((m - back).norm_max() == 0.0);

    CHECK_THROWS_WITH_AS(matrix_from_csv("1,2\n3,oops\n", "bad"), doctest::Contains("line 2"),
                         parse_error);
    CHECK_THROWS_WITH_AS(matrix_from_csv("1,2\n3\n", "jagged"), doctest::Contains("line 2"),
                         parse_error);
    CHECK_THROWS_AS(matrix_from_csv("", "empty"), parse_error);
}

TEST_CASE("blockspec json round trip") {
    const BlockSpec real{BlockKind::real, 1.5, 0.7, 3};
    const BlockSpec back = blockspec_from_json(blockspec_to_json(real), "spec");
    CHECK(back.kind == BlockKind::real);
    CHECK(back.modulus == 1.5);
    CHECK(back.angle == 0.7);
    CHECK(back.rho == 3);

    const json classical = {{"kind", "classical"}, {"modulus", -2.0}, {"rho", 2}};
    CHECK(blockspec_from_json(classical, "spec").modulus == -2.0);

    CHECK_THROWS_AS(blockspec_from_json({{"kind", "weird"}, {"modulus", 1.0}, {"rho", 1}}, "spec"),
                    parse_error);
    CHECK_THROWS_AS(blockspec_from_json({{"kind", "real"}, {"modulus", 1.0}, {"rho", 1}}, "spec"),
                    parse_error); // missing angle
    CHECK_THROWS_AS(
        blockspec_from_json({{"kind", "classical"}, {"modulus", 0.0}, {"rho", 1}}, "spec"),
        parse_error); // zero modulus
}

TEST_CASE("structure json round trip keeps blocks, N, rho and transform") {
    const Matrix t = assemble({{BlockKind::real, 1.0, 1.0, 1}, {BlockKind::classical, 0.5, 0.0, 2}});
    const auto s = recover_structure(t, 1e-6);
    const json j = structure_to_json(s);
    CHECK(j["N"] == 4);
    CHECK(j["rho"] == 3);
    const auto back = structure_from_json(j, "structure");
    CHECK(back.ambient_dim == 4);
    CHECK(back.rho() == 3);
    REQUIRE(back.transform.has_value());
    CHECK((*back.transform - *s.transform).norm_max() == 0.0);
}

TEST_CASE("jordan_layout_of reads repeated-cell forms in layout order") {
    const std::vector<BlockSpec> blocks = {{BlockKind::classical, 2.0, 0.0, 1},
                                           {BlockKind::real, 1.0, 0.7, 2},
                                           {BlockKind::classical, 0.5, 0.0, 2}};
    const auto layout = jordan_layout_of(assemble(blocks));
    REQUIRE(layout.size() == 3);
    CHECK(layout[0].kind == BlockKind::classical);
    CHECK(layout[0].modulus == doctest::Approx(2.0));
    CHECK(layout[1].kind == BlockKind::real);
    CHECK(layout[1].rho == 2);
    CHECK(layout[1].angle == doctest::Approx(0.7));
    CHECK(layout[2].rho == 2);
    CHECK(layout[2].modulus == doctest::Approx(0.5));

    // repeated equal blocks stay separate when the super-diagonal is zero
    const auto sep = jordan_layout_of(Matrix::identity(3));
    CHECK(sep.size() == 3);

    // a generic dense matrix is not in form
    Rng rng(5);
    Matrix dense = rng.gaussian_matrix(4, 4);
    for (int i = 0; i < 4; ++i) dense(i, i) += 3.0;
    CHECK_THROWS_AS(jordan_layout_of(dense), invalid_input);
}

TEST_CASE("jordan_layout_of inverts assemble on random layouts") {
    Rng rng(606);
    for (int it = 0; it < 100; ++it) {
        std::vector<BlockSpec> blocks;
        std::size_t n = 0;
        const int nb = 1 + static_cast<int>(rng.below(4));
        for (int b = 0; b < nb && n < 12; ++b) {
            BlockSpec s;
            s.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
            s.modulus = rng.uniform(0.3, 2.0);
            s.angle = rng.uniform(0.2, 2.9); // away from 0 so real cells are recognisable
            s.rho = 1 + static_cast<int>(rng.below(3));
            blocks.push_back(s);
            n += s.dim();
        }
        const auto layout = jordan_layout_of(assemble(blocks));
        REQUIRE(layout.size() == blocks.size());
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            CHECK(layout[i].kind == blocks[i].kind);
            CHECK(layout[i].rho == blocks[i].rho);
            CHECK(layout[i].modulus == doctest::Approx(blocks[i].modulus).epsilon(1e-12));
            if (blocks[i].kind == BlockKind::real)
                CHECK(layout[i].angle == doctest::Approx(blocks[i].angle).epsilon(1e-12));
        }
    }
}

TEST_CASE("density report json excludes timing and carries the empirical marker") {
    DensityReport rep;
    rep.targets = 2;
    rep.hits = 1;
    rep.iterate_budget = 10;
    rep.epsilon = 0.5;
    rep.per_target = {{0.1, 3}, {0.9, 7}};
    rep.elapsed_seconds = 123.0;
    const json j = density_report_to_json(rep);
    CHECK(j["empirical"] == true);
    CHECK(j["hits"] == 1);
    CHECK(j["per_target"][1]["argmin_iterate"] == 7);
    CHECK_FALSE(j.contains("elapsed_seconds"));
    CHECK_FALSE(j.dump().find("123") != std::string::npos);
}

TEST_CASE("subspace loading orthonormalises spanning columns") {
    const json j = json::parse("[[2,0],[0,3],[0,0]]");
    const auto tmp = "/tmp/grassdyn_io_test_span.json";
    {
        std::ofstream out(tmp);
        out << j.dump();
    }
    const auto s = load_subspace(tmp);
    CHECK(s.ambient() == 3);
    CHECK(s.dim() == 2);
    CHECK((s.frame().transpose() * s.frame() - Matrix::identity(2)).norm_max() < 1e-12);
}

TEST_CASE("recipe registry: every name runs and unknown names are refused") {
    const auto& reg = recipe_registry();
    CHECK(reg.size() >= 13);
    CHECK_THROWS_AS(run_recipe("no-such-recipe"), invalid_input);
    // the cheap ones get exercised here; the heavyweights run in acceptance
    CHECK(run_recipe("delta-leading-coefficients").pass);
    CHECK(run_recipe("bound-table").pass);
    CHECK(run_recipe("quotient-construction").pass);
}
