#include "orthinv/multiplicity.hpp"

namespace orthinv {

int dim_hom(const EContext& ctx, const GOrbitLabel& label, CharacterFlag flag) {
    if (flag.phi_minus_one != 1) return 0;
    int d = 0;
    for (const auto& rep : ctx.census)
        if (rep.label == label) d += rep.mT;
    return d;
}

bool distinguished(const EContext& ctx, const GOrbitLabel& label, CharacterFlag flag) {
    return dim_hom(ctx, label, flag) > 0;
}

std::vector<OrbitInventoryEntry> g_orbit_inventory(const EContext& ctx) {
    std::vector<OrbitInventoryEntry> out;
    if (ctx.n % 2 == 1) {
        out.push_back({{GOrbitLabel::SplitJ, 0}, 4});
        out.push_back({{GOrbitLabel::NonQuasiSplit, 0}, 4});
        return out;
    }
    out.push_back({{GOrbitLabel::SplitJ, 0}, 1});
    if (ctx.n > 2) out.push_back({{GOrbitLabel::NonQuasiSplit, 0}, 1});
    for (int c = 0; c < 4; ++c) {
        if (c == ctx.invJ.disc_class) continue;
        out.push_back({{GOrbitLabel::QuasiSplitDisc, c}, 2});
    }
    return out;
}

int pure_inner_sum(const EContext& ctx, CharacterFlag flag) {
    int total = 0;
    for (const auto& entry : g_orbit_inventory(ctx))
        total += entry.weight * dim_hom(ctx, entry.label, flag);
    return total;
}

int special_orthogonal_sum(const EContext& ctx, CharacterFlag flag) {
    if (flag.phi_minus_one != 1) return 0;
    int total = dim_hom(ctx, {GOrbitLabel::SplitJ, 0}, flag);
    if (ctx.n != 2) total += dim_hom(ctx, {GOrbitLabel::NonQuasiSplit, 0}, flag);
    return total;
}

DistinctionReport build_distinction_report(const EContext& ctx, CharacterFlag flag) {
    DistinctionReport r;
    r.p = ctx.tw->p();
    r.n = ctx.n;
    r.e = (int)(ctx.tw->e(ctx.e_level) / ctx.tw->e(ctx.f_level));
    r.f = (int)(ctx.tw->f(ctx.e_level) / ctx.tw->f(ctx.f_level));
    r.y = ctx.y;
    r.phi_minus_one = flag.phi_minus_one;
    for (const auto& entry : g_orbit_inventory(ctx)) {
        OrbitReportEntry oe;
        oe.label = entry.label;
        oe.weight = entry.weight;
        oe.dim = dim_hom(ctx, entry.label, flag);
        for (size_t i = 0; i < ctx.census.size(); ++i)
            if (ctx.census[i].label == entry.label) oe.census_indices.push_back((int)i);
        r.orbits.push_back(std::move(oe));
    }
    r.sum_full = pure_inner_sum(ctx, flag);
    r.sum_special = special_orthogonal_sum(ctx, flag);
    int expect_full = (flag.phi_minus_one == 1) ? 4 : 0;
    int expect_special = (flag.phi_minus_one == 1) ? ctx.y : 0;
    bool mz_ok = true, census_ok = (int)ctx.census.size() == ctx.y;
    for (const auto& rep : ctx.census) mz_ok = mz_ok && rep.mZ == ctx.y * rep.mT;
    r.consistent = (r.sum_full == expect_full) && (r.sum_special == expect_special) && mz_ok &&
                   census_ok;
    return r;
}

} // namespace orthinv
