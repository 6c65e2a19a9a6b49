#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "grassdyn/rng.hpp"
#include "grassdyn/structure.hpp"

using namespace grassdyn;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).norm_max(); }

// (kind, |modulus|, rho) triple used for multiset comparison after recovery
struct Signature {
    int kind;
    double modulus;
    double angle;
    int rho;
};

std::vector<Signature> signatures(const std::vector<BlockSpec>& blocks) {
    std::vector<Signature> sig;
    for (const auto& b : blocks)
        sig.push_back({b.kind == BlockKind::real ? 1 : 0, std::fabs(b.modulus),
                       b.kind == BlockKind::real ? std::fabs(b.angle) : 0.0, b.rho});
    std::sort(sig.begin(), sig.end(), [](const Signature& a, const Signature& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.angle < b.angle;
    });
    return sig;
}

} // namespace

TEST_CASE("assemble block-diagonal operators") {
    SUBCASE("two rotations") {
        const Matrix t = assemble({{BlockKind::real, 1.0, 0.8, 1}, {BlockKind::real, 1.0, 1.7, 1}});
        REQUIRE(t.rows() == 4);
        CHECK(max_diff(t.block(0, 0, 2, 2), rotation(0.8)) == 0.0);
        CHECK(max_diff(t.block(2, 2, 2, 2), rotation(1.7)) == 0.0);
        CHECK(t.block(0, 2, 2, 2).norm_max() == 0.0);
    }
    SUBCASE("single scalar block") {
        const Matrix t = assemble({{BlockKind::classical, 1.0, 0.0, 1}});
        CHECK(t.rows() == 1);
        CHECK(t(0, 0) == 1.0);
    }
    SUBCASE("scalar multiplier") {
        const Matrix t = assemble({{BlockKind::classical, 1.0, 0.0, 1}}, {0.5});
        CHECK(t(0, 0) == 0.5);
    }
    CHECK_THROWS_AS(assemble({}), invalid_input);
}

TEST_CASE("bounds reports rho and the universal floor") {
    SUBCASE("three rotations on R^6") {
        const auto s = structure_of({{BlockKind::real, 1.0, 1.0, 1},
                                     {BlockKind::real, 1.0, std::sqrt(2.0), 1},
                                     {BlockKind::real, 1.0, std::sqrt(3.0), 1}});
        const auto r = bounds(s);
        CHECK(r.relative_size == 3);
        CHECK(r.lower_bound_specific == 3);
        CHECK(r.lower_bound_universal == 3); // floor(7/2)
    }
    SUBCASE("single real block of relative size 2 on R^4") {
        const auto r = bounds(structure_of({{BlockKind::real, 1.0, 0.7, 2}}));
        CHECK(r.relative_size == 2);
        CHECK(r.lower_bound_specific == 2);
        CHECK(r.lower_bound_universal == 2);
    }
    SUBCASE("R^3 universal floor is 2") {
        const auto r = bounds(structure_of(
            {{BlockKind::real, 1.0, 1.0, 1}, {BlockKind::classical, 1.0, 0.0, 1}}));
        CHECK(r.lower_bound_universal == 2);
    }
}

TEST_CASE("bounds is invariant under block permutation") {
    Rng rng(11);
    for (int it = 0; it < 40; ++it) {
        std::vector<BlockSpec> blocks;
        const int nb = 1 + static_cast<int>(rng.below(4));
        for (int b = 0; b < nb; ++b) {
            BlockSpec s;
            s.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
            s.modulus = rng.uniform(0.3, 2.0);
            s.angle = rng.uniform(0.2, 2.9);
            s.rho = 1 + static_cast<int>(rng.below(3));
            blocks.push_back(s);
        }
        const auto before = bounds(structure_of(blocks));
        for (int shuffle = 0; shuffle < 5; ++shuffle) {
            std::swap(blocks[rng.below(blocks.size())], blocks[rng.below(blocks.size())]);
            const auto after = bounds(structure_of(blocks));
            CHECK(after.relative_size == before.relative_size);
            CHECK(after.lower_bound_universal == before.lower_bound_universal);
        }
    }
}

TEST_CASE("universal floor never exceeds the specific bound") {
    Rng rng(12);
    for (int it = 0; it < 100; ++it) {
        std::vector<BlockSpec> blocks;
        const int nb = 1 + static_cast<int>(rng.below(4));
        for (int b = 0; b < nb; ++b)
            blocks.push_back({rng.below(2) ? BlockKind::real : BlockKind::classical,
                              rng.uniform(0.3, 2.0), rng.uniform(0.2, 2.9),
                              1 + static_cast<int>(rng.below(3))});
        const auto r = bounds(structure_of(blocks));
        CHECK(r.lower_bound_specific >= r.lower_bound_universal);
    }
}

TEST_CASE("example_operator") {
    const Matrix even = example_operator({1.0, std::sqrt(2.0)}, false);
    REQUIRE(even.rows() == 4);
    CHECK(max_diff(even.block(0, 0, 2, 2), rotation(1.0)) == 0.0);
    CHECK(max_diff(even.block(2, 2, 2, 2), rotation(std::sqrt(2.0))) == 0.0);

    const Matrix odd = example_operator({1.0}, true);
    REQUIRE(odd.rows() == 3);
    CHECK(odd(2, 2) == 1.0);
    CHECK(odd(2, 0) == 0.0);

    const Matrix degenerate = example_operator({0.0}, false);
    CHECK(max_diff(degenerate, Matrix::identity(2)) == 0.0);
    CHECK_THROWS_AS(example_operator({}, false), invalid_input);
}

TEST_CASE("angle independence heuristic flags rational multiples of pi") {
    const double pi = 3.14159265358979323846;
    const auto flags = angle_independence_flags({0.0, 1.0, pi / 3.0, std::sqrt(2.0), 0.75 * pi});
    CHECK(flags[0]);       // zero
    CHECK_FALSE(flags[1]); // 1/pi is irrational
    CHECK(flags[2]);       // pi/3
    CHECK_FALSE(flags[3]);
    CHECK(flags[4]); // 3pi/4
}

TEST_CASE("quotient_operator") {
    SUBCASE("invariant coordinate axis of a block-diagonal operator") {
        const Matrix t = assemble({{BlockKind::classical, 2.0, 0.0, 1},
                                   {BlockKind::real, 1.0, 0.9, 1},
                                   {BlockKind::classical, -1.5, 0.0, 2}});
        const auto k = Subspace::span_of({unit_axis(5, 0)});
        const Matrix q = quotient_operator(t, k);
        CHECK(max_diff(q, t.block(1, 1, 4, 4)) == 0.0);
    }
    SUBCASE("leading 2-dimensional invariant slice") {
        const Matrix t = assemble({{BlockKind::real, 1.0, 0.9, 2}});
        const auto k = Subspace::span_of({unit_axis(4, 0), unit_axis(4, 1)});
        const Matrix q = quotient_operator(t, k);
        CHECK(max_diff(q, rotation(0.9)) < 1e-14);
    }
    SUBCASE("non-invariant subspace is rejected with residual") {
        const Matrix t = assemble({{BlockKind::real, 1.0, 0.9, 2}});
        const auto k = Subspace::span_of({unit_axis(4, 2)}); // R_theta pushes e3 around
        CHECK_THROWS_AS(quotient_operator(t, k), invariance_violation);
        try {
            quotient_operator(t, k);
        } catch (const invariance_violation& e) {
            CHECK(e.residual > 1e-6);
        }
    }
}

TEST_CASE("nested quotients agree with quotienting by the sum") {
    // Standard coordinate spans: complements are exact coordinate frames, so
    // the two routes agree entry by entry.
    const Matrix t = assemble({{BlockKind::classical, 2.0, 0.0, 1},
                               {BlockKind::classical, 0.5, 0.0, 1},
                               {BlockKind::real, 1.0, 1.3, 2}});
    const auto k1 = Subspace::span_of({unit_axis(6, 0)});
    const Matrix q1 = quotient_operator(t, k1);
    const auto k2_in_q1 = Subspace::span_of({unit_axis(5, 0)});
    const Matrix q12 = quotient_operator(q1, k2_in_q1);
    const auto ksum = Subspace::span_of({unit_axis(6, 0), unit_axis(6, 1)});
    const Matrix qsum = quotient_operator(t, ksum);
    CHECK(max_diff(q12, qsum) < 1e-9);

    // General invariant subspaces: complements are basis choices, so compare
    // as operators through the orthogonal change of frame W = (C1 C2')^T CL.
    Rng rng(5150);
    for (int it = 0; it < 20; ++it) {
        std::vector<BlockSpec> blocks;
        for (int b = 0; b < 3; ++b)
            blocks.push_back({BlockKind::classical, rng.uniform(0.5, 2.0), 0.0, 1});
        blocks.push_back({BlockKind::real, 1.0, rng.uniform(0.3, 2.8), 1});
        const Matrix td = assemble(blocks); // on R^5
        const auto ka = Subspace::span_of({unit_axis(5, 0)});
        const auto kb = Subspace::span_of({unit_axis(5, 0), unit_axis(5, 1)});
        const Matrix qa = quotient_operator(td, ka);
        const Matrix c1 = complement(ka).frame();
        // kb expressed in the quotient coordinates
        const Matrix kb_in_q = c1.transpose() * kb.frame();
        const auto kb_q = Subspace::span_of(kb_in_q.block(0, 1, 4, 1));
        const Matrix qab = quotient_operator(qa, kb_q);
        const Matrix qb = quotient_operator(td, kb);
        const Matrix c2 = complement(kb_q).frame();
        const Matrix cl = complement(kb).frame();
        const Matrix w = (c1 * c2).transpose() * cl;
        CHECK(max_diff(w * w.transpose(), Matrix::identity(3)) < 1e-10);
        CHECK(max_diff(qab * w, w * qb) < 1e-9);
    }
}

TEST_CASE("recover_structure on the named examples") {
    SUBCASE("two independent rotations") {
        const Matrix t = assemble({{BlockKind::real, 1.0, 1.0, 1},
                                   {BlockKind::real, 1.0, std::sqrt(2.0), 1}});
        const auto s = recover_structure(t);
        REQUIRE(s.blocks.size() == 2);
        CHECK(s.rho() == 2);
        for (const auto& b : s.blocks) {
            CHECK(b.kind == BlockKind::real);
            CHECK(b.rho == 1);
            CHECK(b.modulus == doctest::Approx(1.0).epsilon(1e-9));
        }
        CHECK(s.residual < 1e-9);
        REQUIRE(s.transform.has_value());
    }
    SUBCASE("identity 3x3 splits into three trivial blocks") {
        const auto s = recover_structure(Matrix::identity(3));
        REQUIRE(s.blocks.size() == 3);
        for (const auto& b : s.blocks) {
            CHECK(b.kind == BlockKind::classical);
            CHECK(b.rho == 1);
            CHECK(b.modulus == doctest::Approx(1.0));
        }
    }
    SUBCASE("single real Jordan block of relative size 2") {
        const Matrix t = assemble({{BlockKind::real, 1.0, 0.9, 2}});
        const auto s = recover_structure(t, 1e-6);
        REQUIRE(s.blocks.size() == 1);
        CHECK(s.blocks[0].kind == BlockKind::real);
        CHECK(s.blocks[0].rho == 2);
        CHECK(s.blocks[0].modulus == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::fabs(s.blocks[0].angle) == doctest::Approx(0.9).epsilon(1e-8));
    }
    SUBCASE("near-zero modulus is refused") {
        Matrix t = Matrix::identity(3);
        t(1, 1) = 1e-12;
        CHECK_THROWS_AS(recover_structure(t, 1e-8), modulus_zero);
    }
    SUBCASE("dimensions beyond 64 are out of scope") {
        CHECK_THROWS_AS(recover_structure(Matrix::identity(65)), invalid_input);
    }
    SUBCASE("a conjugate pair hiding inside the cluster gap is unsupported") {
        // angle so small the pair merges with its mirror and looks real,
        // where no kernel exists
        const Matrix t = rotation(1e-12);
        CHECK_THROWS_WITH_AS(recover_structure(t, 1e-8), doctest::Contains("cluster"),
                             unsupported_structure);
    }
}

TEST_CASE("recover_structure round-trips random conjugated structures") {
    Rng rng(777);
    int done = 0;
    double worst_mod = 0.0, worst_res = 0.0;
    while (done < 200) {
        // random block list on N <= 12 with well-separated eigenvalue sites
        std::vector<BlockSpec> blocks;
        std::vector<std::complex<double>> sites;
        std::size_t n = 0;
        const int nb = 1 + static_cast<int>(rng.below(3));
        for (int b = 0; b < nb; ++b) {
            BlockSpec s;
            s.kind = rng.below(2) ? BlockKind::real : BlockKind::classical;
            s.modulus = rng.uniform(0.4, 2.0);
            s.angle = rng.uniform(0.35, 2.75);
            s.rho = 1 + static_cast<int>(rng.below(3));
            if (n + s.dim() > 12) break;
            const std::complex<double> site =
                s.kind == BlockKind::real
                    ? std::polar(s.modulus, s.angle)
                    : std::complex<double>(s.modulus, 0.0);
            bool clash = false;
            for (const auto& other : sites)
                if (std::abs(other - site) < 0.3 || std::abs(std::conj(other) - site) < 0.3)
                    clash = true;
            if (clash) continue;
            sites.push_back(site);
            blocks.push_back(s);
            n += s.dim();
        }
        if (blocks.empty()) continue;
        const Matrix j = assemble(blocks);
        // conjugate by a random matrix with condition <= 100
        const Matrix q1 = rng.random_orthogonal(n), q2 = rng.random_orthogonal(n);
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = rng.uniform(0.1, 10.0);
        const Matrix p = q1 * d * q2;
        const Matrix t = p * j * inverse(p);

        const auto s = recover_structure(t, 2e-3);
        const auto got = signatures(s.blocks);
        const auto want = signatures(blocks);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].kind == want[i].kind);
            CHECK(got[i].rho == want[i].rho);
            CHECK(std::fabs(got[i].modulus - want[i].modulus) < 1e-6);
            if (got[i].kind == 1) CHECK(std::fabs(got[i].angle - want[i].angle) < 1e-6);
            worst_mod = std::max(worst_mod, std::fabs(got[i].modulus - want[i].modulus));
        }
        worst_res = std::max(worst_res, s.residual);
        ++done;
    }
    MESSAGE("worst modulus error ", worst_mod, ", worst residual ", worst_res);
}

TEST_CASE("recover_structure on the mixed seven-dimensional shape") {
    // scalar block, real block of relative size 2, and a repeated scalar
    // eigenvalue occupying two trivial blocks
    const std::vector<BlockSpec> blocks = {{BlockKind::classical, 0.8, 0.0, 1},
                                           {BlockKind::real, 1.1, 0.7, 2},
                                           {BlockKind::classical, 1.4, 0.0, 1},
                                           {BlockKind::classical, 1.4, 0.0, 1}};
    Rng rng(8383);
    const Matrix j = assemble(blocks);
    const Matrix p = rng.random_orthogonal(7);
    const auto s = recover_structure(p * j * p.transpose(), 1e-6);
    REQUIRE(s.blocks.size() == 4);
    CHECK(s.rho() == 5);
    CHECK(s.blocks[0].modulus == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(s.blocks[1].kind == BlockKind::real);
    CHECK(s.blocks[1].rho == 2);
    CHECK(s.blocks[1].angle == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(s.blocks[2].modulus == doctest::Approx(1.4).epsilon(1e-8));
    CHECK(s.blocks[3].modulus == doctest::Approx(1.4).epsilon(1e-8));
    const auto b = bounds(s);
    CHECK(b.lower_bound_specific == 5);
    CHECK(b.lower_bound_universal == 4); // floor(8/2)
}

TEST_CASE("recover_structure splits same-eigenvalue clusters into their blocks") {
    Rng rng(2222);
    SUBCASE("classical blocks of sizes 3 and 1 at the same eigenvalue") {
        const std::vector<BlockSpec> blocks = {{BlockKind::classical, 1.3, 0.0, 3},
                                               {BlockKind::classical, 1.3, 0.0, 1}};
        const Matrix j = assemble(blocks);
        const Matrix p = rng.random_orthogonal(4);
        const auto s = recover_structure(p * j * p.transpose(), 1e-5);
        REQUIRE(s.blocks.size() == 2);
        CHECK(s.blocks[0].rho == 3); // larger relative size first on ties
        CHECK(s.blocks[1].rho == 1);
        for (const auto& b : s.blocks) {
            CHECK(b.kind == BlockKind::classical);
            CHECK(b.modulus == doctest::Approx(1.3).epsilon(1e-7));
        }
    }
    SUBCASE("real blocks of relative sizes 2 and 1 at the same rotation") {
        const std::vector<BlockSpec> blocks = {{BlockKind::real, 1.0, 0.9, 2},
                                               {BlockKind::real, 1.0, 0.9, 1}};
        const Matrix j = assemble(blocks);
        const Matrix p = rng.random_orthogonal(6);
        const auto s = recover_structure(p * j * p.transpose(), 1e-5);
        REQUIRE(s.blocks.size() == 2);
        CHECK(s.blocks[0].rho == 2);
        CHECK(s.blocks[1].rho == 1);
        for (const auto& b : s.blocks) {
            CHECK(b.kind == BlockKind::real);
            CHECK(b.modulus == doctest::Approx(1.0).epsilon(1e-7));
            CHECK(b.angle == doctest::Approx(0.9).epsilon(1e-7));
        }
        CHECK(s.residual < 1e-6);
    }
    SUBCASE("mixed sizes {2, 1, 1} at one eigenvalue") {
        const std::vector<BlockSpec> blocks = {{BlockKind::classical, -0.8, 0.0, 2},
                                               {BlockKind::classical, -0.8, 0.0, 1},
                                               {BlockKind::classical, -0.8, 0.0, 1}};
        const Matrix j = assemble(blocks);
        const Matrix p = rng.random_orthogonal(4);
        const auto s = recover_structure(p * j * p.transpose(), 1e-5);
        REQUIRE(s.blocks.size() == 3);
        CHECK(s.blocks[0].rho == 2);
        CHECK(s.blocks[1].rho == 1);
        CHECK(s.blocks[2].rho == 1);
    }
}

TEST_CASE("recovered block ordering is deterministic: |modulus| ascending") {
    const Matrix t = assemble({{BlockKind::real, 1.5, 0.8, 1},
                               {BlockKind::classical, 0.5, 0.0, 1},
                               {BlockKind::classical, -1.0, 0.0, 1}});
    const auto s = recover_structure(t, 1e-6);
    REQUIRE(s.blocks.size() == 3);
    CHECK(std::fabs(s.blocks[0].modulus) == doctest::Approx(0.5));
    CHECK(std::fabs(s.blocks[1].modulus) == doctest::Approx(1.0));
    CHECK(std::fabs(s.blocks[2].modulus) == doctest::Approx(1.5));
    CHECK(s.blocks[2].kind == BlockKind::real);
}
