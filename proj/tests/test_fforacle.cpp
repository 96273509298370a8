#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orthinv/fforacle.hpp"
#include "orthinv/quadform.hpp"

using namespace orthinv;

TEST_CASE("congruence census over small finite fields") {
    for (auto [q, n] : std::vector<std::pair<int64_t, int>>{{3, 2}, {5, 2}, {3, 3}, {5, 3}}) {
        FFContext ctx(q, n);
        auto cen = ff_congruence_census(ctx);
        CHECK(cen.num_classes == 2);
        CHECK(cen.class_sizes[0] + cen.class_sizes[1] == cen.total_invertible);
        CHECK(cen.class_sizes[0] > 0);
        CHECK(cen.class_sizes[1] > 0);
    }
    // q = 9 = 3^2 also works as a prime power
    FFContext ctx9(9, 2);
    auto cen9 = ff_congruence_census(ctx9);
    CHECK(cen9.num_classes == 2);
}

TEST_CASE("involution orbit counts over finite fields") {
    CHECK(ff_involution_orbits(FFContext(3, 3)) == 1);
    CHECK(ff_involution_orbits(FFContext(5, 3)) == 1);
    CHECK(ff_involution_orbits(FFContext(3, 2)) == 2);
    CHECK(ff_involution_orbits(FFContext(5, 2)) == 2);
}

TEST_CASE("finite-field J-symmetric embedding") {
    for (auto [q, n] : std::vector<std::pair<int64_t, int>>{{3, 2}, {5, 2}, {3, 3}, {5, 3}, {9, 2}}) {
        FFContext ctx(q, n);
        auto emb = ff_jsym_embedding(ctx);
        const ResidueField& Rn = *ctx.Fqn;
        // multiplicativity and J-symmetry on every torus element
        FFMat J(n, std::vector<int64_t>(n, 0));
        for (int i = 0; i < n; ++i) J[i][n - 1 - i] = 1;
        for (int64_t lg = 0; lg < std::min<int64_t>(Rn.q() - 1, 60); ++lg) {
            int64_t x = Rn.from_dlog(lg * 7 + 1);
            int64_t y = Rn.from_dlog(lg * 3 + 2);
            auto Mx = emb.matrix_of(ctx, x);
            auto My = emb.matrix_of(ctx, y);
            auto Mxy = emb.matrix_of(ctx, Rn.mul(x, y));
            CHECK(ff_mul(*ctx.Fq, Mx, My) == Mxy);
            auto lhs = ff_mul(*ctx.Fq, J, ff_mul(*ctx.Fq, ff_transpose(Mx), J));
            CHECK(lhs == Mx);
            // determinant equals the norm
            CHECK(ff_det(*ctx.Fq, Mx) == ctx.norm_to_base(x));
        }
    }
}

TEST_CASE("split torus orbits over finite fields") {
    for (auto [q, n] : std::vector<std::pair<int64_t, int>>{{3, 2}, {5, 2}, {3, 3}, {5, 3}}) {
        FFContext ctx(q, n);
        auto emb = ff_jsym_embedding(ctx);
        auto so = ff_split_t_orbits(ctx, emb);
        CHECK(so.y == (n % 2 == 1 ? 1 : 2));
        CHECK(so.one_per_class);
        CHECK(so.norms_surjective);
    }
}

TEST_CASE("similitude factorization over finite fields") {
    for (auto [q, n] : std::vector<std::pair<int64_t, int>>{{3, 2}, {5, 2}, {3, 3}, {5, 3}}) {
        FFContext ctx(q, n);
        auto emb = ff_jsym_embedding(ctx);
        FFMat J(n, std::vector<int64_t>(n, 0));
        for (int i = 0; i < n; ++i) J[i][n - 1 - i] = 1;
        auto sim = ff_similitude_check(ctx, emb, J);
        CHECK(sim.mT == 1);
        CHECK(sim.mZ == (n % 2 == 1 ? 1 : 2));
        CHECK(sim.factorization_ok);
        CHECK(sim.torus_ratios_expected);
        if (n % 2 == 0) CHECK(sim.mu_image.size() == (size_t)(ctx.q - 1));
    }
}

TEST_CASE("budget limits are enforced") {
    CHECK_THROWS_AS((void)ff_congruence_census(FFContext(9, 3, 1000)), BudgetExceeded);
    FFContext tiny(3, 4, 50000);
    CHECK_NOTHROW((void)ff_congruence_census(tiny));  // 3^10 points fit
    CHECK_THROWS_AS((void)ff_similitude_check(tiny, ff_jsym_embedding(tiny),
                                              ff_identity(4)),
                    BudgetExceeded);
    CHECK_THROWS_AS((void)FFContext(4, 2), BadPrime);
    CHECK_THROWS_AS((void)FFContext(15, 2), BadPrime);
}

TEST_CASE("residue reductions of integral census representatives land in the predicted class") {
    // cross-check between the exact fields and the finite-field classes
    Tower t(TowerSpec{5, {}, 32});
    FFContext ctx(5, 3);
    auto cen = similarity_class_census(t, 0, 3);
    for (const auto& e : cen) {
        // only unit-determinant diagonal representatives reduce well
        bool unitdet = true;
        FFMat red(3, std::vector<int64_t>(3, 0));
        for (int i = 0; i < 3; ++i) {
            auto d = e.rep.at(i, i);
            if (t.pival(d) != 0) { unitdet = false; break; }
            red[i][i] = t.residue(d);
        }
        if (!unitdet) continue;
        int chi_padic = (e.inv.disc_class == 0 || e.inv.disc_class == 2) ? 1 : -1;
        // for unit diagonals the discriminant class is a unit class
        CHECK(ctx.Fq->chi(ff_det(*ctx.Fq, red)) == chi_padic);
    }
}
