#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orthinv/multiplicity.hpp"

using namespace orthinv;

namespace {
const CharacterFlag kPlus{+1};
const CharacterFlag kMinus{-1};
}

TEST_CASE("dimension table") {
    // (y, orbit) -> dim
    {
        Tower t(TowerSpec{5, {UnramStep{3}}, 32});
        auto ctx = make_context(t);
        CHECK(dim_hom(ctx, {GOrbitLabel::SplitJ, 0}, kPlus) == 1);
        CHECK(dim_hom(ctx, {GOrbitLabel::NonQuasiSplit, 0}, kPlus) == 0);
    }
    {
        Tower t(TowerSpec{5, {UnramStep{2}}, 32});
        auto ctx = make_context(t);
        CHECK(dim_hom(ctx, {GOrbitLabel::SplitJ, 0}, kPlus) == 2);
        // the distinguished quasi-split orbit has dimension one
        int qsd = 0;
        for (const auto& rep : ctx.census)
            if (rep.label.tag == GOrbitLabel::QuasiSplitDisc) {
                CHECK(dim_hom(ctx, rep.label, kPlus) == 1);
                ++qsd;
            }
        CHECK(qsd == 1);
    }
    {
        Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
        auto ctx = make_context(t);
        CHECK(dim_hom(ctx, {GOrbitLabel::SplitJ, 0}, kPlus) == 3);
        CHECK(dim_hom(ctx, {GOrbitLabel::NonQuasiSplit, 0}, kPlus) == 1);
        for (int c = 0; c < 4; ++c)
            if (c != ctx.invJ.disc_class)
                CHECK(dim_hom(ctx, {GOrbitLabel::QuasiSplitDisc, c}, kPlus) == 0);
    }
    // nontrivial character at -1 kills everything
    {
        Tower t(TowerSpec{5, {UnramStep{2}}, 32});
        auto ctx = make_context(t);
        CHECK(dim_hom(ctx, {GOrbitLabel::SplitJ, 0}, kMinus) == 0);
        CHECK_FALSE(distinguished(ctx, {GOrbitLabel::SplitJ, 0}, kMinus));
    }
}

TEST_CASE("distinguished orbits reproduce the norm-coset criterion") {
    // y = 2: the distinguished non-split orbit is the one whose adjusted
    // determinant is a norm from the quadratic subextension without being a
    // square; verified through an independently realized quadratic field
    std::vector<TowerSpec> specs = {
        {5, {UnramStep{2}}, 32},        {3, {RamStep{2, 0}}, 32},
        {5, {RamStep{2, 1}}, 32},       {5, {RamStep{4, 0}}, 32},
        {3, {UnramStep{3}, RamStep{2, 0}}, 32},
    };
    for (const auto& s : specs) {
        Tower t(s);
        auto ctx = make_context(t);
        REQUIRE(ctx.y == 2);
        // identify the quadratic subextension by its class
        int cstar = -1;
        for (int c = 1; c < 4; ++c)
            if (std::find(ctx.killed_classes.begin(), ctx.killed_classes.end(), c) !=
                ctx.killed_classes.end())
                cstar = c;
        REQUIRE(cstar > 0);
        TowerSpec quad{s.p, {}, 32};
        if (cstar == 1) quad.steps = {UnramStep{2}};
        if (cstar == 2) quad.steps = {RamStep{2, 0}};
        if (cstar == 3) quad.steps = {RamStep{2, 1}};
        Tower L(quad);
        CHECK(L.y_invariant(1, 0) == 2);
        auto norm_classes = L.norm_image_classes(1, 0);
        // the census rep of the non-split orbit
        for (const auto& rep : ctx.census) {
            if (rep.label.tag != GOrbitLabel::QuasiSplitDisc) continue;
            int d0 = rep.inv.disc0_class;
            CHECK(d0 != 0);
            CHECK(std::find(norm_classes.begin(), norm_classes.end(), d0) != norm_classes.end());
            CHECK(distinguished(ctx, rep.label, kPlus));
        }
    }
    // y = 4: no quasi-split non-split orbit is distinguished, the
    // non-quasi-split one is
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    auto ctx = make_context(t);
    for (int c = 0; c < 4; ++c)
        if (c != ctx.invJ.disc_class)
            CHECK_FALSE(distinguished(ctx, {GOrbitLabel::QuasiSplitDisc, c}, kPlus));
    CHECK(distinguished(ctx, {GOrbitLabel::NonQuasiSplit, 0}, kPlus));
}

TEST_CASE("inventory weights") {
    {
        Tower t(TowerSpec{5, {UnramStep{3}}, 32});
        auto inv = g_orbit_inventory(make_context(t));
        REQUIRE(inv.size() == 2);
        CHECK(inv[0].weight + inv[1].weight == 8);
        CHECK(inv[0].weight == 4);
    }
    {
        Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
        auto inv = g_orbit_inventory(make_context(t));
        REQUIRE(inv.size() == 5);
        int total = 0;
        for (auto& e : inv) total += e.weight;
        CHECK(total == 8);
    }
    {
        Tower t(TowerSpec{5, {UnramStep{2}}, 32});
        auto inv = g_orbit_inventory(make_context(t));
        REQUIRE(inv.size() == 4);
        int total = 0;
        for (auto& e : inv) total += e.weight;
        CHECK(total == 7);
    }
}

TEST_CASE("pure inner and special orthogonal sums") {
    std::vector<TowerSpec> specs = {
        {3, {UnramStep{2}}, 32},
        {3, {UnramStep{3}}, 32},
        {3, {UnramStep{2}, RamStep{2, 0}}, 32},
        {5, {RamStep{2, 1}}, 32},
        {5, {RamStep{3, 0}}, 32},
        {5, {UnramStep{2}, RamStep{2, 0}}, 32},
        {7, {UnramStep{2}}, 32},
    };
    for (const auto& s : specs) {
        Tower t(s);
        auto ctx = make_context(t);
        CHECK(pure_inner_sum(ctx, kPlus) == 4);
        CHECK(pure_inner_sum(ctx, kMinus) == 0);
        CHECK(special_orthogonal_sum(ctx, kPlus) == ctx.y);
        CHECK(special_orthogonal_sum(ctx, kPlus) == (int)ctx.census.size());
        CHECK(special_orthogonal_sum(ctx, kMinus) == 0);
    }
}

TEST_CASE("distinction report") {
    Tower t(TowerSpec{5, {UnramStep{2}, RamStep{2, 0}}, 32});
    auto ctx = make_context(t);
    auto r = build_distinction_report(ctx, kPlus);
    CHECK(r.sum_full == 4);
    CHECK(r.sum_special == 4);
    CHECK(r.y == 4);
    CHECK(r.consistent);
    auto r2 = build_distinction_report(ctx, kMinus);
    CHECK(r2.sum_full == 0);
    CHECK(r2.sum_special == 0);
    CHECK(r2.consistent);
}
