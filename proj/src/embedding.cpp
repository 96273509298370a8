#include "orthinv/embedding.hpp"

#include <algorithm>
#include <numeric>

namespace orthinv {

// ---------------------------------------------------------------------------
// basis plumbing

Embedding make_embedding(const Tower& tw, int e_level, int f_level,
                         std::vector<FieldElt> basis, bool j_symmetric_hint) {
    Embedding emb;
    emb.tw = &tw;
    emb.e_level = e_level;
    emb.f_level = f_level;
    emb.n = (int)tw.rel_degree(e_level, f_level);
    if ((int)basis.size() != emb.n) throw DimensionMismatch("basis size must match the relative degree");
    emb.basis = std::move(basis);
    emb.j_symmetric = j_symmetric_hint;
    emb.coord_mat = Mat(&tw, f_level, emb.n, emb.n);
    for (int j = 0; j < emb.n; ++j) {
        auto col = tw.relative_coords(emb.basis[(size_t)j], f_level);
        for (int i = 0; i < emb.n; ++i) emb.coord_mat.at(i, j) = col[(size_t)i];
    }
    emb.coord_inv = inverse(emb.coord_mat);  // throws when not a basis
    return emb;
}

std::vector<FieldElt> Embedding::coords(const FieldElt& x) const {
    auto canon = tw->relative_coords(x, f_level);
    std::vector<FieldElt> out((size_t)n, tw->zero(f_level));
    for (int i = 0; i < n; ++i) {
        FieldElt acc = tw->zero(f_level);
        for (int j = 0; j < n; ++j)
            if (!coord_inv.at(i, j).is_zero() && !canon[(size_t)j].is_zero())
                acc = acc + coord_inv.at(i, j) * canon[(size_t)j];
        out[(size_t)i] = acc;
    }
    return out;
}

FieldElt Embedding::from_coords(const std::vector<FieldElt>& c) const {
    FieldElt acc = tw->zero(e_level);
    for (int i = 0; i < n; ++i)
        if (!c[(size_t)i].is_zero()) acc = acc + tw->embed(c[(size_t)i], e_level) * basis[(size_t)i];
    return acc;
}

Mat Embedding::matrix_of(const FieldElt& x) const {
    Mat M(tw, f_level, n, n);
    for (int j = 0; j < n; ++j) {
        auto col = coords(tw->mul(x, basis[(size_t)j]));
        for (int i = 0; i < n; ++i) M.at(i, j) = col[(size_t)i];
    }
    return M;
}

// ---------------------------------------------------------------------------
// companion construction

namespace {

// x in (F^x)^l, l prime to the residue characteristic
bool is_lth_power(const Tower& tw, const FieldElt& x, int64_t l) {
    int64_t v = tw.pival(x);
    if (v % l != 0) return false;
    const ResidueField& R = tw.residue_field(x.level);
    int64_t g = std::gcd(l, R.q() - 1);
    return R.dlog(tw.residue(x)) % g == 0;
}

bool power_poly_irreducible(const Tower& tw, const FieldElt& tau, int64_t n) {
    for (int64_t l : prime_factors(n))
        if (is_lth_power(tw, tau, l)) return false;
    if (n % 4 == 0) {
        FieldElt m4 = tw.div(tau, tw.from_int(tau.level, -4));
        if (is_lth_power(tw, m4, 4)) return false;
    }
    return true;
}

} // namespace

Embedding companion_embedding(const Tower& tw, int e_level, int f_level,
                              const FieldElt& omega, const FieldElt& tau) {
    int64_t n = tw.rel_degree(e_level, f_level);
    if (tau.level != f_level) throw FieldMismatch("tau must live in the base field");
    if (omega.level != e_level) throw FieldMismatch("omega must live in the extension");
    if (n % tw.p() == 0) throw NonTame("companion degree divisible by p");
    if (n > 1 && !power_poly_irreducible(tw, tau, n)) throw Reducible("x^n - tau is reducible");
    if (tw.pow(omega, n) != tw.embed(tau, e_level)) throw Error("omega is not an n-th root of tau");
    std::vector<FieldElt> basis;
    FieldElt cur = tw.one(e_level);
    for (int64_t i = 0; i < n; ++i) {
        basis.push_back(cur);
        if (i + 1 < n) cur = tw.mul(cur, omega);
    }
    return make_embedding(tw, e_level, f_level, std::move(basis), true);
}

// ---------------------------------------------------------------------------
// trace-form construction for the unramified part

namespace {

// basis b_0..b_{frel-1} of the maximal unramified part of E over F whose
// scaled trace form is exactly the anti-diagonal form
std::vector<FieldElt> traceform_basis(const Tower& tw, int e_level, int f_level) {
    int64_t frel = tw.f(e_level) / tw.f(f_level);
    if (frel == 1) return {tw.one(e_level)};
    int64_t erel = tw.e(e_level) / tw.e(f_level);
    FieldElt beta = tw.zeta(e_level);
    int64_t qsub = 1;
    for (int64_t i = 0; i < tw.f(f_level); ++i) qsub *= tw.p();
    // conjugates over F are Teichmueller powers by q_F^s
    std::vector<FieldElt> conj;
    int64_t qe = tw.residue_field(e_level).q();
    int64_t expn = 1;
    for (int64_t s = 0; s < frel; ++s) {
        conj.push_back(tw.zeta_pow(e_level, expn));
        expn = (expn * qsub) % (qe - 1);
    }
    // derivative of the minimal polynomial at beta
    FieldElt fprime = tw.one(e_level);
    for (int64_t s = 1; s < frel; ++s) fprime = fprime * (beta - conj[(size_t)s]);
    FieldElt a = tw.inv(fprime);
    // Gram of the scaled trace form on the power basis, an frel x frel
    // matrix over F; traces through E are divided by the (unit) degree of
    // the totally ramified part
    FieldElt erel_inv = tw.inv(tw.from_int(f_level, erel));
    Mat G(&tw, f_level, (int)frel, (int)frel);
    for (int64_t i = 0; i < frel; ++i)
        for (int64_t j = i; j < frel; ++j) {
            FieldElt tr = tw.trace(a * tw.pow(beta, i + j), f_level);
            FieldElt v = tr * erel_inv;
            G.at((int)i, (int)j) = v;
            G.at((int)j, (int)i) = v;
        }
    Mat J = Mat::antidiag(&tw, f_level, (int)frel);
    Mat g = congruence_transform(G, J);  // integral since both sides are unimodular
    std::vector<FieldElt> out;
    for (int64_t k = 0; k < frel; ++k) {
        FieldElt acc = tw.zero(e_level);
        for (int64_t i = 0; i < frel; ++i)
            if (!g.at((int)i, (int)k).is_zero())
                acc = acc + tw.embed(g.at((int)i, (int)k), e_level) * tw.pow(beta, i);
        out.push_back(acc);
    }
    return out;
}

} // namespace

Embedding unramified_jsym_embedding(const Tower& tw, int e_level, int f_level) {
    if (tw.e(e_level) != tw.e(f_level)) throw NotSubfield("relative extension must be unramified");
    auto basis = traceform_basis(tw, e_level, f_level);
    return make_embedding(tw, e_level, f_level, std::move(basis), true);
}

Embedding composite_embedding(const Embedding& outer, const Embedding& inner) {
    if (outer.tw != inner.tw || outer.f_level != inner.e_level)
        throw FieldMismatch("composite needs outer base equal to inner extension");
    const Tower& tw = *outer.tw;
    std::vector<FieldElt> basis;
    for (int j = 0; j < outer.n; ++j)
        for (int k = 0; k < inner.n; ++k)
            basis.push_back(tw.mul(outer.basis[(size_t)j],
                                   tw.embed(inner.basis[(size_t)k], outer.e_level)));
    return make_embedding(tw, outer.e_level, inner.f_level, std::move(basis),
                          outer.j_symmetric && inner.j_symmetric);
}

Embedding integral_jsym_embedding(const Tower& tw, int e_level, int f_level) {
    if (f_level > e_level) throw NotSubfield("base must be a prefix of the extension");
    Embedding emb = make_embedding(tw, f_level, f_level, {tw.one(f_level)}, true);
    for (int lvl = f_level + 1; lvl <= e_level; ++lvl) {
        Embedding step;
        if (!tw.step_is_unram(lvl) && tw.step_ram_degree(lvl) > 1) {
            // pi^estep = zeta^twist * previous uniformizer
            FieldElt tau = tw.mul(tw.zeta_pow(lvl - 1, tw.step_ram_twist(lvl)), tw.pi(lvl - 1));
            step = companion_embedding(tw, lvl, lvl - 1, tw.pi(lvl), tau);
        } else {
            step = unramified_jsym_embedding(tw, lvl, lvl - 1);
        }
        emb = composite_embedding(step, emb);
    }
    return emb;
}

Embedding standard_block_embedding(const Tower& tw, int e_level, int f_level) {
    int64_t erel = tw.e(e_level) / tw.e(f_level);
    int64_t frel = tw.f(e_level) / tw.f(f_level);
    auto bk = traceform_basis(tw, e_level, f_level);
    std::vector<FieldElt> basis;
    FieldElt pj = tw.one(e_level);
    for (int64_t j = 0; j < erel; ++j) {
        for (int64_t k = 0; k < frel; ++k) basis.push_back(tw.mul(pj, bk[(size_t)k]));
        if (j + 1 < erel) pj = tw.mul(pj, tw.pi(e_level));
    }
    return make_embedding(tw, e_level, f_level, std::move(basis), true);
}

// ---------------------------------------------------------------------------
// nu-symmetry

NuSymmetry nu_symmetric_test(const Embedding& emb, const Mat& nu) {
    const Tower& tw = *emb.tw;
    int n = emb.n;
    if (nu.rows() != n || nu.level() != emb.f_level) throw DimensionMismatch("nu has the wrong shape");
    Mat J = Mat::antidiag(&tw, emb.f_level, n);
    Mat C = J * nu;
    // if C is the matrix of some x, then x = C applied to the coordinates of 1
    auto one_coords = emb.coords(tw.one(emb.e_level));
    std::vector<FieldElt> xc((size_t)n, tw.zero(emb.f_level));
    for (int i = 0; i < n; ++i) {
        FieldElt acc = tw.zero(emb.f_level);
        for (int j = 0; j < n; ++j)
            if (!C.at(i, j).is_zero() && !one_coords[(size_t)j].is_zero())
                acc = acc + C.at(i, j) * one_coords[(size_t)j];
        xc[(size_t)i] = acc;
    }
    NuSymmetry out;
    out.witness = emb.from_coords(xc);
    if (out.witness.is_zero()) {
        out.symmetric = false;
        return out;
    }
    out.symmetric = mat_equal(emb.matrix_of(out.witness), C);
    if (!out.symmetric) out.witness = tw.zero(emb.e_level);
    return out;
}

// ---------------------------------------------------------------------------
// certificates

bool verify_j_symmetry(const Embedding& emb, int samples, uint64_t seed) {
    const Tower& tw = *emb.tw;
    Mat J = Mat::antidiag(&tw, emb.f_level, emb.n);
    auto check = [&](const FieldElt& x) {
        Mat M = emb.matrix_of(x);
        return mat_equal(J * transpose(M) * J, M);
    };
    for (const auto& b : emb.basis)
        if (!check(b)) return false;
    uint64_t st = seed;
    for (int i = 0; i < samples; ++i)
        if (!check(tw.random_elt(emb.e_level, st))) return false;
    return true;
}

bool verify_multiplicative(const Embedding& emb, int samples, uint64_t seed) {
    const Tower& tw = *emb.tw;
    uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
        auto x = tw.random_elt(emb.e_level, st);
        auto y = tw.random_elt(emb.e_level, st);
        if (!mat_equal(emb.matrix_of(x) * emb.matrix_of(y), emb.matrix_of(x * y))) return false;
        if (!mat_equal(emb.matrix_of(x) + emb.matrix_of(y), emb.matrix_of(x + y))) return false;
    }
    return true;
}

bool verify_integral_on_units(const Embedding& emb, int samples, uint64_t seed) {
    const Tower& tw = *emb.tw;
    for (const auto& b : emb.basis)
        if (!tw.is_integral(b)) return false;
    uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
        auto x = tw.random_unit(emb.e_level, st);
        if (!mat_is_integral(emb.matrix_of(x))) return false;
    }
    return true;
}

bool verify_det_is_norm(const Embedding& emb, int samples, uint64_t seed) {
    const Tower& tw = *emb.tw;
    uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
        auto x = tw.random_elt(emb.e_level, st);
        if (det(emb.matrix_of(x)) != tw.norm(x, emb.f_level)) return false;
        if (trace(emb.matrix_of(x)) != tw.trace(x, emb.f_level)) return false;
    }
    return true;
}

} // namespace orthinv
