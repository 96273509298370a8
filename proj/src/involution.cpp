#include "orthinv/involution.hpp"

#include <algorithm>

namespace orthinv {

Involution make_involution(const Mat& nu) {
    const Tower& tw = *nu.tower();
    for (int i = 0; i < nu.rows(); ++i)
        for (int j = 0; j < nu.cols(); ++j)
            if (!nu.at(i, j).is_zero()) {
                FieldElt s = tw.inv(nu.at(i, j));
                return Involution{s * nu};
            }
    throw ZeroInput("involution needs a nonzero symmetric matrix");
}

bool involution_equal(const Involution& a, const Involution& b) {
    return mat_equal(a.nu, b.nu);
}

std::string label_name(const GOrbitLabel& l) {
    switch (l.tag) {
        case GOrbitLabel::SplitJ: return "split";
        case GOrbitLabel::NonQuasiSplit: return "non-quasi-split";
        default: return "quasi-split-disc-" + std::to_string(l.disc_class);
    }
}

// ---------------------------------------------------------------------------

EContext make_context(const Tower& tw, int e_level, int f_level) {
    EContext ctx;
    ctx.tw = &tw;
    ctx.e_level = (e_level < 0) ? tw.top() : e_level;
    ctx.f_level = f_level;
    ctx.n = (int)tw.rel_degree(ctx.e_level, ctx.f_level);
    ctx.y = tw.y_invariant(ctx.e_level, ctx.f_level);
    ctx.emb = integral_jsym_embedding(tw, ctx.e_level, ctx.f_level);
    ctx.killed_classes = tw.square_classes_killed(ctx.e_level, ctx.f_level);
    Mat J = Mat::antidiag(&tw, ctx.f_level, ctx.n);
    ctx.invJ = form_invariants(J);

    // split torus orbit census: candidates 1, u, pi, u*pi in E, filtered to
    // distinct cosets of (E^x)^2 F^x
    std::vector<FieldElt> cand = {tw.one(ctx.e_level), tw.zeta(ctx.e_level), tw.pi(ctx.e_level),
                                  tw.mul(tw.zeta(ctx.e_level), tw.pi(ctx.e_level))};
    auto same_coset = [&](const FieldElt& a, const FieldElt& b) {
        FieldElt r = tw.div(a, b);
        for (int c = 0; c < 4; ++c) {
            FieldElt scaled = tw.mul(r, tw.embed(tw.square_class_rep(ctx.f_level, c), ctx.e_level));
            if (tw.is_square(scaled)) return true;
        }
        return false;
    };
    std::vector<FieldElt> reps;
    for (const auto& x : cand) {
        bool dup = false;
        for (const auto& r : reps)
            if (same_coset(x, r)) { dup = true; break; }
        if (!dup) reps.push_back(x);
    }
    if ((int)reps.size() != ctx.y)
        throw Error("internal: census size disagrees with the y invariant");
    for (const auto& x : reps) {
        TOrbitRep rep;
        rep.x = x;
        rep.nu = Mat::antidiag(&tw, ctx.f_level, ctx.n) * ctx.emb.matrix_of(x);
        if (!mat_is_symmetric(rep.nu)) throw Error("internal: J * m(x) is not symmetric");
        rep.theta = make_involution(rep.nu);
        rep.inv = form_invariants(rep.nu);
        rep.label = g_orbit_label(ctx, rep.nu);
        ctx.census.push_back(std::move(rep));
    }
    for (auto& rep : ctx.census) {
        auto mi = m_indices(ctx, rep);
        rep.mT = mi.mT;
        rep.mZ = mi.mZ;
    }
    return ctx;
}

GOrbitLabel g_orbit_label(const EContext& ctx, const Mat& nu) {
    const Tower& tw = *ctx.tw;
    auto inv = form_invariants(nu);
    if (inv.n % 2 == 1) {
        // classify modulo the center: normalize the discriminant onto the
        // anti-diagonal form, then compare Hasse invariants
        int zc = SquareClassGroup::mul(ctx.invJ.disc_class, inv.disc_class);
        FieldElt z = tw.square_class_rep(ctx.f_level, zc);
        auto inv2 = form_invariants(z * nu);
        if (inv2.disc_class != ctx.invJ.disc_class)
            throw Error("internal: center normalization failed");
        if (inv2.hasse == ctx.invJ.hasse) return {GOrbitLabel::SplitJ, 0};
        return {GOrbitLabel::NonQuasiSplit, 0};
    }
    if (inv.disc_class != ctx.invJ.disc_class)
        return {GOrbitLabel::QuasiSplitDisc, inv.disc_class};
    if (inv.hasse == ctx.invJ.hasse) return {GOrbitLabel::SplitJ, 0};
    if (inv.n == 2) throw Error("internal: no non-quasi-split class in dimension two");
    return {GOrbitLabel::NonQuasiSplit, 0};
}

std::vector<int> similitude_image(const EContext& ctx, const GOrbitLabel& label, const Mat& nu) {
    const Tower& tw = *ctx.tw;
    if (ctx.n % 2 == 1) return {0};
    if (label.tag == GOrbitLabel::SplitJ) return {0, 1, 2, 3};
    bool in_census = false;
    for (const auto& rep : ctx.census)
        if (rep.label == label) { in_census = true; break; }
    if (!in_census)
        throw UnsupportedOrbit("similitude ratios are only computed for census orbits");
    if (label.tag == GOrbitLabel::NonQuasiSplit) {
        // the ratios contain the classes trivialized in E, which here is the
        // whole group
        return ctx.killed_classes;
    }
    // quasi-split, non-split orbit satisfying the norm-coset criterion:
    // ratios pair trivially with (-1)^(n/2) det nu
    auto inv = form_invariants(nu);
    int64_t sgn = (ctx.n / 2) % 2;
    FieldElt d0 = det(nu);
    if (sgn) d0 = -d0;
    std::vector<int> out;
    for (int c = 0; c < 4; ++c)
        if (hilbert_symbol(tw.square_class_rep(ctx.f_level, c), d0) == 1) out.push_back(c);
    (void)inv;
    return out;
}

MIndices m_indices(const EContext& ctx, const TOrbitRep& rep) {
    auto mu = similitude_image(ctx, rep.label, rep.nu);
    std::vector<int> inter;
    for (int c : ctx.killed_classes)
        if (std::find(mu.begin(), mu.end(), c) != mu.end()) inter.push_back(c);
    MIndices out;
    out.mT = (int)mu.size() / (int)inter.size();
    out.mZ = (int)mu.size();
    return out;
}

int mk0_index(const EContext& ctx, int e0_level) {
    const Tower& tw = *ctx.tw;
    if (ctx.y != 2) throw HypothesisFailed("index formula requires a unique quadratic subextension");
    if (tw.e(ctx.e_level) != tw.e(e0_level))
        throw HypothesisFailed("E must be unramified over the intermediate field");
    if (e0_level < ctx.f_level || e0_level > ctx.e_level)
        throw NotSubfield("intermediate marker out of range");
    int64_t n0 = tw.rel_degree(ctx.e_level, e0_level);
    if (n0 % 2 == 1) {
        int y0 = tw.y_invariant(e0_level, ctx.f_level);
        return 4 / y0;
    }
    // even case: ratios coming from units at the intermediate level are the
    // base classes of even valuation there
    int64_t e0 = tw.e(e0_level) / tw.e(ctx.f_level);
    int sub = 0;
    for (int c = 0; c < 4; ++c) {
        int64_t valf = (c >= 2) ? 1 : 0;  // reps 1, u are units; pi, u*pi have valuation one
        if ((e0 * valf) % 2 == 0) ++sub;
    }
    return 4 / sub;
}

bool theta_split_certificate(const EContext& ctx, const TOrbitRep& rep, int samples,
                             uint64_t seed) {
    const Tower& tw = *ctx.tw;
    Mat nuinv = inverse(rep.nu);
    uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
        FieldElt t = tw.random_elt(ctx.e_level, st);
        Mat M = ctx.emb.matrix_of(t);
        Mat theta = nuinv * transpose(inverse(M)) * rep.nu;
        if (!mat_equal(theta, inverse(M))) return false;
    }
    return true;
}

} // namespace orthinv
