#include "orthinv/tower.hpp"

#include <algorithm>
#include <cassert>

#include "orthinv/matrix.hpp"

namespace orthinv {

// ---------------------------------------------------------------------------
// FieldElt operators

Rat FieldElt::val() const { return tw->val(*this); }
FieldElt FieldElt::operator-() const { return tw->neg(*this); }

FieldElt operator+(const FieldElt& a, const FieldElt& b) { return a.tw->add(a, b); }
FieldElt operator-(const FieldElt& a, const FieldElt& b) { return a.tw->add(a, a.tw->neg(b)); }
FieldElt operator*(const FieldElt& a, const FieldElt& b) { return a.tw->mul(a, b); }
FieldElt operator/(const FieldElt& a, const FieldElt& b) { return a.tw->div(a, b); }
bool operator==(const FieldElt& a, const FieldElt& b) { return a.tw->equal(a, b); }
bool operator!=(const FieldElt& a, const FieldElt& b) { return !a.tw->equal(a, b); }

// ---------------------------------------------------------------------------
// standalone arithmetic on "L-elements": length-f coefficient vectors over
// Z/p^k, polynomials in beta reduced modulo the monic lift H

namespace {

void lreduce(std::vector<BigInt>& v, const BigInt& mod) {
    for (auto& c : v) {
        c %= mod;
        if (c < 0) c += mod;
    }
}

std::vector<BigInt> lmul(const std::vector<BigInt>& A, const std::vector<BigInt>& B,
                         const std::vector<BigInt>& H, int64_t f, const BigInt& mod) {
    std::vector<BigInt> prod(2 * f - 1, 0);
    for (int64_t i = 0; i < f; ++i) {
        if (A[i] == 0) continue;
        for (int64_t j = 0; j < f; ++j) {
            if (B[j] == 0) continue;
            prod[i + j] += A[i] * B[j];
        }
    }
    for (int64_t d = 2 * f - 2; d >= f; --d) {
        BigInt c = prod[d] % mod;
        if (c == 0) { prod[d] = 0; continue; }
        prod[d] = 0;
        for (int64_t i = 0; i < f; ++i)
            prod[d - f + i] -= c * H[i];
    }
    prod.resize(f);
    lreduce(prod, mod);
    return prod;
}

std::vector<BigInt> lpow(std::vector<BigInt> base, int64_t k,
                         const std::vector<BigInt>& H, int64_t f, const BigInt& mod) {
    std::vector<BigInt> r(f, 0);
    r[0] = 1;
    while (k > 0) {
        if (k & 1) r = lmul(r, base, H, f, mod);
        base = lmul(base, base, H, f, mod);
        k >>= 1;
    }
    return r;
}

std::vector<BigInt> leval(const std::vector<BigInt>& poly, const std::vector<BigInt>& at,
                          const std::vector<BigInt>& H, int64_t f, const BigInt& mod) {
    std::vector<BigInt> acc(f, 0);
    for (int d = (int)poly.size() - 1; d >= 0; --d) {
        acc = lmul(acc, at, H, f, mod);
        acc[0] += poly[d];
    }
    lreduce(acc, mod);
    return acc;
}

bool lis_zero(const std::vector<BigInt>& v) {
    return std::all_of(v.begin(), v.end(), [](const BigInt& c) { return c == 0; });
}

// inverse of a unit L-element via Newton from the residue inverse
std::vector<BigInt> lunit_inv(const std::vector<BigInt>& x, const ResidueField& R,
                              const std::vector<BigInt>& H, int64_t f, const BigInt& mod,
                              int iters) {
    int64_t p = R.p();
    std::vector<int> rd(f);
    for (int64_t b = 0; b < f; ++b) rd[b] = (int)(int64_t)(x[b] % p);
    int64_t code = R.from_digits(rd);
    if (code == 0) throw DivisionByZero("inverse of a non-unit");
    auto digs = R.digits(R.inv(code));
    std::vector<BigInt> z(f, 0);
    for (int64_t b = 0; b < f; ++b) z[b] = digs[b];
    for (int i = 0; i < iters; ++i) {
        // z <- z (2 - x z)
        std::vector<BigInt> t = lmul(x, z, H, f, mod);
        for (auto& c : t) c = -c;
        t[0] += 2;
        lreduce(t, mod);
        z = lmul(z, t, H, f, mod);
    }
    return z;
}

int newton_iters(int64_t target_digits) {
    int it = 1;
    int64_t acc = 1;
    while (acc < target_digits) { acc *= 2; ++it; }
    return it + 1;
}

} // namespace

// ---------------------------------------------------------------------------
// Tower construction

Tower::Tower(TowerSpec spec) : spec_(std::move(spec)) {
    int64_t p = spec_.p;
    if (!is_prime_small(p) || p == 2) throw BadPrime("p must be an odd prime");
    if (spec_.precision < 8) throw Error("precision floor is 8 digits");
    const int N = spec_.precision;
    ppow_.resize(N + 1);
    ppow_[0] = 1;
    for (int i = 1; i <= N; ++i) ppow_[i] = ppow_[i - 1] * p;

    // level 0 = Q_p
    levels_.resize(spec_.steps.size() + 1);
    {
        Level& L0 = levels_[0];
        L0.e = 1; L0.f = 1; L0.m = 0;
        L0.hbar = {0, 1};
        L0.res = std::make_unique<ResidueField>(p, 1);
        L0.H = {BigInt(0), BigInt(1)};
        L0.zeta = teichmueller(0, L0.res->canonical_generator());
        L0.zeta_m = one(0);
        L0.zeta_m_inv = one(0);
        L0.nonsq = teichmueller(0, L0.res->canonical_nonsquare());
    }

    for (size_t s = 0; s < spec_.steps.size(); ++s) {
        const Level& prev = levels_[s];
        Level& cur = levels_[s + 1];
        int lvl = (int)s + 1;
        if (std::holds_alternative<UnramStep>(spec_.steps[s])) {
            int64_t fstep = std::get<UnramStep>(spec_.steps[s]).f;
            if (fstep < 1) throw Error("unramified step degree must be positive");
            cur.step_unram = true;
            cur.e = prev.e;
            cur.f = prev.f * fstep;
            cur.res = std::make_unique<ResidueField>(p, (int)cur.f);
            // canonical lift of the residue polynomial
            cur.hbar.resize(cur.f + 1);
            for (int64_t i = 0; i <= cur.f; ++i) cur.hbar[i] = cur.res->defining_poly()[i];
            cur.H.resize(cur.f + 1);
            for (int64_t i = 0; i <= cur.f; ++i) cur.H[i] = cur.hbar[i];
            // image of the previous beta: Hensel-lift the smallest residue root
            if (prev.f == 1) {
                cur.beta_prev_img = zero(lvl);
            } else {
                int64_t rbar = cur.res->smallest_root(prev.hbar);
                // Newton on the lifted polynomial of the previous level
                std::vector<BigInt> Hold = prev.H;
                std::vector<BigInt> Hd(prev.f);
                for (int64_t i = 1; i <= prev.f; ++i) Hd[i - 1] = Hold[i] * i;
                auto digs = cur.res->digits(rbar);
                std::vector<BigInt> r(cur.f, 0);
                for (int64_t b = 0; b < cur.f; ++b) r[b] = digs[b];
                const BigInt& mod = pp(N);
                int iters = newton_iters(N);
                for (int it = 0; it < iters; ++it) {
                    auto val = leval(Hold, r, cur.H, cur.f, mod);
                    auto der = leval(Hd, r, cur.H, cur.f, mod);
                    auto dinv = lunit_inv(der, *cur.res, cur.H, cur.f, mod, newton_iters(N));
                    auto corr = lmul(val, dinv, cur.H, cur.f, mod);
                    for (int64_t b = 0; b < cur.f; ++b) r[b] -= corr[b];
                    lreduce(r, mod);
                }
                auto chk = leval(Hold, r, cur.H, cur.f, mod);
                if (!lis_zero(chk)) throw Error("root lifting failed");
                cur.beta_prev_img = make(lvl, 0, [&] {
                    std::vector<BigInt> g(cur.e * cur.f, 0);
                    for (int64_t b = 0; b < cur.f; ++b) g[b] = r[b];
                    return g;
                }(), N);
            }
            // express the previous Teichmueller generator as a power of the new one
            {
                auto old_digits = prev.res->digits(prev.res->canonical_generator());
                // evaluate the digit polynomial at the image of beta in the residue field
                int64_t img;
                if (prev.f == 1) {
                    img = old_digits[0] % p;
                } else {
                    std::vector<int> rd((size_t)cur.f);
                    for (int64_t b = 0; b < cur.f; ++b)
                        rd[b] = (int)(int64_t)(cur.beta_prev_img.c[b] % p);
                    int64_t beta_img_code = cur.res->from_digits(rd);
                    img = 0;
                    for (int d = (int)old_digits.size() - 1; d >= 0; --d)
                        img = cur.res->add(cur.res->mul(img, beta_img_code), old_digits[d]);
                }
                cur.zeta_prev_dlog = cur.res->dlog(img);
            }
            cur.step_e = 1;
            cur.step_twist = 0;
            int64_t qm1 = cur.res->q() - 1;
            cur.m = (BigInt(prev.m) * cur.zeta_prev_dlog % qm1).convert_to<int64_t>();
        } else {
            const RamStep& st = std::get<RamStep>(spec_.steps[s]);
            if (st.e < 1) throw Error("ramified step degree must be positive");
            if (st.e % p == 0) throw NonTame("ramification degree divisible by p");
            cur.step_unram = false;
            cur.step_e = st.e;
            int64_t qm1 = prev.res->q() - 1;
            cur.step_twist = ((st.twist % qm1) + qm1) % qm1;
            cur.e = prev.e * st.e;
            cur.f = prev.f;
            cur.res = std::make_unique<ResidueField>(p, (int)cur.f);
            cur.hbar = prev.hbar;
            cur.H = prev.H;
            cur.beta_prev_img = zero(lvl);  // beta is unchanged
            cur.zeta_prev_dlog = 1;
            cur.m = (cur.step_twist * prev.e + prev.m) % qm1;
        }
        cur.zeta = teichmueller(lvl, cur.res->canonical_generator());
        cur.zeta_m = zeta_pow(lvl, cur.m);
        cur.zeta_m_inv = zeta_pow(lvl, -cur.m);
        cur.nonsq = teichmueller(lvl, cur.res->canonical_nonsquare());
    }

    // eager coordinate caches so lookups are read-only afterwards
    coords_.resize(levels_.size());
    for (size_t i = 0; i < levels_.size(); ++i) {
        coords_[i].resize(i + 1);
        for (size_t j = 0; j <= i; ++j) build_coord_cache((int)i, (int)j);
    }
}

int64_t Tower::rel_degree(int level, int sub) const {
    if (sub > level) throw NotSubfield("sub-tower marker must be a prefix");
    return degree(level) / degree(sub);
}

// ---------------------------------------------------------------------------
// element construction and normal form

FieldElt Tower::zero(int level) const {
    FieldElt x;
    x.tw = this;
    x.level = level;
    x.zero = true;
    return x;
}

FieldElt Tower::make(int level, int64_t piv, std::vector<BigInt> grid, int cprec) const {
    FieldElt x;
    x.tw = this;
    x.level = level;
    x.zero = false;
    x.piv = piv;
    x.cprec = cprec;
    x.c = std::move(grid);
    return normalize(std::move(x));
}

int64_t Tower::valp_coeff(const BigInt& c, int cprec) const {
    if (c == 0) return cprec;
    BigInt v = c;
    int64_t k = 0;
    while (k < cprec && v % spec_.p == 0) { v /= spec_.p; ++k; }
    return k;
}

void Tower::grid_reduce(std::vector<BigInt>& A, int cprec) const {
    const BigInt& mod = pp(cprec);
    for (auto& c : A) {
        c %= mod;
        if (c < 0) c += mod;
    }
}

FieldElt Tower::normalize(FieldElt x) const {
    const Level& L = lv(x.level);
    int64_t e = L.e, f = L.f;
    for (int guard = 0; guard < 4; ++guard) {
        if (x.cprec <= 0) return zero(x.level);
        grid_reduce(x.c, x.cprec);
        int64_t s = e * x.cprec;  // +infinity sentinel
        for (int64_t a = 0; a < e; ++a) {
            for (int64_t b = 0; b < f; ++b) {
                const BigInt& cc = x.c[a * f + b];
                if (cc == 0) continue;
                s = std::min(s, a + e * valp_coeff(cc, x.cprec));
            }
        }
        if (s >= e * x.cprec) return zero(x.level);
        if (s == 0) break;
        // divide by pi^s
        int64_t k = s / e, r = s % e;
        int64_t drop = (r > 0) ? k + 1 : k;
        std::vector<BigInt> g = x.c;
        if (r > 0) {
            // multiply by pi^(e-r), folding rows past e with zeta^m * p
            std::vector<BigInt> shifted(e * f, 0);
            for (int64_t a = 0; a < e; ++a) {
                int64_t na = a + (e - r);
                bool fold = na >= e;
                if (fold) na -= e;
                for (int64_t b = 0; b < f; ++b) shifted[na * f + b] = x.c[a * f + b];
                if (fold) {
                    // row picks up zeta^m * p
                    std::vector<BigInt> row(f);
                    for (int64_t b = 0; b < f; ++b) row[b] = shifted[na * f + b];
                    row = lmul(row, std::vector<BigInt>(L.zeta_m.c.begin(), L.zeta_m.c.begin() + f),
                               L.H, f, pp(x.cprec));
                    for (int64_t b = 0; b < f; ++b) shifted[na * f + b] = row[b] * spec_.p;
                }
            }
            g = std::move(shifted);
        }
        if (drop > 0) {
            // multiply by zeta^(-m*drop), then exact division by p^drop
            std::vector<BigInt> tinv(L.zeta_m_inv.c.begin(), L.zeta_m_inv.c.begin() + f);
            std::vector<BigInt> tk = lpow(tinv, drop, L.H, f, pp(x.cprec));
            for (int64_t a = 0; a < e; ++a) {
                std::vector<BigInt> row(g.begin() + a * f, g.begin() + (a + 1) * f);
                row = lmul(row, tk, L.H, f, pp(x.cprec));
                const BigInt& dv = pp((int)drop);
                for (int64_t b = 0; b < f; ++b) {
                    if (row[b] % dv != 0) throw Error("internal: inexact division in normal form");
                    g[a * f + b] = row[b] / dv;
                }
            }
        }
        x.c = std::move(g);
        x.piv += s;
        x.cprec -= (int)drop;
    }
    // certify: absolute precision (valuation plus known digits) stays at or
    // above the floor; a window emptied of digits is zero at precision
    int64_t pdigits = x.piv >= 0 ? x.piv / e : -((-x.piv + e - 1) / e);
    if (x.cprec < 1) {
        if (pdigits + std::max(x.cprec, 0) >= prec_floor()) return zero(x.level);
        throw PrecisionExhausted("element precision fell below the certified floor");
    }
    if (x.cprec + pdigits < prec_floor())
        throw PrecisionExhausted("element precision fell below the certified floor");
    return x;
}

FieldElt Tower::from_int(int level, int64_t v) const { return from_bigint(level, BigInt(v)); }

FieldElt Tower::from_bigint(int level, const BigInt& v) const {
    if (v == 0) return zero(level);
    const Level& L = lv(level);
    BigInt m = v;
    int64_t k = 0;
    while (m % spec_.p == 0) { m /= spec_.p; ++k; }
    std::vector<BigInt> g(L.e * L.f, 0);
    g[0] = m;
    FieldElt x = make(level, k * L.e, std::move(g), spec_.precision);
    // p^k = zeta^(-m k) pi^(e k)
    if (k != 0 && L.m != 0) x = mul(x, zeta_pow(level, -L.m * k));
    return x;
}

FieldElt Tower::pi(int level) const {
    const Level& L = lv(level);
    std::vector<BigInt> g(L.e * L.f, 0);
    g[0] = 1;
    FieldElt x;
    x.tw = this;
    x.level = level;
    x.zero = false;
    x.piv = 1;
    x.cprec = spec_.precision;
    x.c = std::move(g);
    return x;
}

FieldElt Tower::teichmueller(int level, int64_t residue_code) const {
    const Level& L = lv(level);
    if (residue_code == 0) return zero(level);
    const int N = spec_.precision;
    const BigInt& mod = pp(N);
    auto digs = L.res->digits(residue_code);
    std::vector<BigInt> z(L.f, 0);
    for (int64_t b = 0; b < L.f; ++b) z[b] = digs[b];
    for (int it = 0; it < N + 2; ++it) {
        auto nz = lpow(z, L.res->q(), L.H, L.f, mod);
        if (nz == z) break;
        z = std::move(nz);
    }
    std::vector<BigInt> g(L.e * L.f, 0);
    for (int64_t b = 0; b < L.f; ++b) g[b] = z[b];
    FieldElt x;
    x.tw = this;
    x.level = level;
    x.zero = false;
    x.piv = 0;
    x.cprec = N;
    x.c = std::move(g);
    return x;
}

FieldElt Tower::zeta(int level) const { return lv(level).zeta; }

FieldElt Tower::zeta_pow(int level, int64_t k) const {
    const Level& L = lv(level);
    int64_t qm1 = L.res->q() - 1;
    k %= qm1;
    if (k < 0) k += qm1;
    if (level == 0 && L.zeta.zero) throw Error("internal: zeta not ready");
    return teichmueller(level, L.res->pow(L.res->canonical_generator(), k));
}

FieldElt Tower::nonresidue_unit(int level) const { return lv(level).nonsq; }

// ---------------------------------------------------------------------------
// ring operations

void Tower::grid_mul(int level, const std::vector<BigInt>& A, const std::vector<BigInt>& B,
                     std::vector<BigInt>& out, int cprec) const {
    const Level& L = lv(level);
    int64_t e = L.e, f = L.f;
    const BigInt& mod = pp(cprec);
    std::vector<std::vector<BigInt>> rows(2 * e - 1, std::vector<BigInt>(f, 0));
    std::vector<BigInt> ra(f), rb(f);
    for (int64_t a = 0; a < e; ++a) {
        bool az = true;
        for (int64_t b = 0; b < f; ++b) { ra[b] = A[a * f + b]; az = az && ra[b] == 0; }
        if (az) continue;
        for (int64_t a2 = 0; a2 < e; ++a2) {
            bool bz = true;
            for (int64_t b = 0; b < f; ++b) { rb[b] = B[a2 * f + b]; bz = bz && rb[b] == 0; }
            if (bz) continue;
            auto prod = lmul(ra, rb, L.H, f, mod);
            auto& dst = rows[a + a2];
            for (int64_t b = 0; b < f; ++b) dst[b] += prod[b];
        }
    }
    // fold rows >= e with zeta^m * p
    std::vector<BigInt> tc(L.zeta_m.c.begin(), L.zeta_m.c.begin() + f);
    for (int64_t k = 2 * e - 2; k >= e; --k) {
        lreduce(rows[k], mod);
        if (lis_zero(rows[k])) continue;
        auto folded = lmul(rows[k], tc, L.H, f, mod);
        auto& dst = rows[k - e];
        for (int64_t b = 0; b < f; ++b) dst[b] += folded[b] * spec_.p;
    }
    out.assign(e * f, 0);
    for (int64_t a = 0; a < e; ++a) {
        lreduce(rows[a], mod);
        for (int64_t b = 0; b < f; ++b) out[a * f + b] = rows[a][b];
    }
}

FieldElt Tower::add(const FieldElt& a, const FieldElt& b) const {
    if (a.level != b.level) throw FieldMismatch("operands live at different tower levels");
    if (a.zero) return b;
    if (b.zero) return a;
    const Level& L = lv(a.level);
    int64_t e = L.e, f = L.f;
    const FieldElt& lo = (a.piv <= b.piv) ? a : b;
    const FieldElt& hi = (a.piv <= b.piv) ? b : a;
    int64_t d = hi.piv - lo.piv;
    // absolute precision of the sum is the smaller of the two absolute
    // precisions; relative to lo's valuation that is
    int cprec = (int)std::min<int64_t>(lo.cprec, (d + e * (int64_t)hi.cprec) / e);
    std::vector<BigInt> g = lo.c;
    grid_reduce(g, cprec);
    if (d < e * (int64_t)cprec) {
        // shift hi's grid by pi^d and add
        int64_t k = d / e, r = d % e;
        std::vector<BigInt> sh(e * f, 0);
        const BigInt& mod = pp(cprec);
        std::vector<BigInt> tc(L.zeta_m.c.begin(), L.zeta_m.c.begin() + f);
        auto tk = lpow(tc, k, L.H, f, mod);
        BigInt pk = pp((int)std::min<int64_t>(k, cprec));
        for (int64_t ai = 0; ai < e; ++ai) {
            std::vector<BigInt> row(hi.c.begin() + ai * f, hi.c.begin() + (ai + 1) * f);
            int64_t na = ai + r;
            BigInt extra = pk;
            std::vector<BigInt> mult = tk;
            if (na >= e) {
                na -= e;
                mult = lmul(mult, tc, L.H, f, mod);
                extra *= spec_.p;
            }
            row = lmul(row, mult, L.H, f, mod);
            for (int64_t bi = 0; bi < f; ++bi) sh[na * f + bi] += row[bi] * extra;
        }
        for (int64_t i = 0; i < e * f; ++i) g[i] += sh[i];
    }
    return make(a.level, lo.piv, std::move(g), cprec);
}

FieldElt Tower::neg(const FieldElt& a) const {
    if (a.zero) return a;
    FieldElt x = a;
    const BigInt& mod = pp(x.cprec);
    for (auto& c : x.c) c = (c == 0) ? BigInt(0) : mod - c;
    return x;
}

FieldElt Tower::mul(const FieldElt& a, const FieldElt& b) const {
    if (a.level != b.level) throw FieldMismatch("operands live at different tower levels");
    if (a.zero || b.zero) return zero(a.level);
    int cprec = std::min(a.cprec, b.cprec);
    std::vector<BigInt> g;
    grid_mul(a.level, a.c, b.c, g, cprec);
    return make(a.level, a.piv + b.piv, std::move(g), cprec);
}

FieldElt Tower::unit_inv(const FieldElt& x) const {
    const Level& L = lv(x.level);
    int64_t e = L.e, f = L.f;
    const BigInt& mod = pp(x.cprec);
    // start from the residue inverse, Newton-iterate z <- z(2 - xz)
    int64_t rcode = residue(x);
    auto digs = L.res->digits(L.res->inv(rcode));
    std::vector<BigInt> z(e * f, 0);
    for (int64_t b = 0; b < f; ++b) z[b] = digs[b];
    int iters = newton_iters(e * (int64_t)x.cprec);
    for (int i = 0; i < iters; ++i) {
        std::vector<BigInt> t;
        grid_mul(x.level, x.c, z, t, x.cprec);
        for (auto& c : t) c = -c;
        t[0] += 2;
        for (auto& c : t) { c %= mod; if (c < 0) c += mod; }
        std::vector<BigInt> nz;
        grid_mul(x.level, z, t, nz, x.cprec);
        z = std::move(nz);
    }
    FieldElt out;
    out.tw = this;
    out.level = x.level;
    out.zero = false;
    out.piv = 0;
    out.cprec = x.cprec;
    out.c = std::move(z);
    return out;
}

FieldElt Tower::inv(const FieldElt& a) const {
    if (a.zero) throw DivisionByZero("inverse of zero");
    FieldElt u = unit_inv(a);
    u.piv = -a.piv;
    return u;
}

FieldElt Tower::pow(const FieldElt& a, int64_t k) const {
    if (k == 0) return one(a.level);
    if (k < 0) return pow(inv(a), -k);
    FieldElt r = one(a.level);
    FieldElt base = a;
    while (k > 0) {
        if (k & 1) r = mul(r, base);
        if (k >>= 1) base = mul(base, base);
    }
    return r;
}

bool Tower::equal(const FieldElt& a, const FieldElt& b) const {
    return add(a, neg(b)).zero;
}

Rat Tower::val(const FieldElt& x) const {
    if (x.zero) throw ZeroInput("valuation of zero");
    return Rat(x.piv, lv(x.level).e);
}

int64_t Tower::pival(const FieldElt& x) const {
    if (x.zero) throw ZeroInput("valuation of zero");
    return x.piv;
}

int64_t Tower::residue(const FieldElt& x) const {
    if (x.zero) return 0;
    const Level& L = lv(x.level);
    std::vector<int> d((size_t)L.f);
    for (int64_t b = 0; b < L.f; ++b) d[b] = (int)(int64_t)(x.c[b] % spec_.p);
    return L.res->from_digits(d);
}

// ---------------------------------------------------------------------------
// squares

bool Tower::is_square(const FieldElt& x) const {
    if (x.zero) throw ZeroInput("square test on zero");
    if (x.piv % 2 != 0) return false;
    return lv(x.level).res->chi(residue(x)) == 1;
}

FieldElt Tower::sqrt(const FieldElt& x) const {
    if (x.zero) return x;
    if (!is_square(x)) throw Error("sqrt of a nonsquare");
    const Level& L = lv(x.level);
    FieldElt u = x;
    u.piv = 0;
    int64_t rcode = residue(u);
    FieldElt z = teichmueller(x.level, L.res->sqrt(rcode));
    z.cprec = u.cprec;
    FieldElt half = inv(from_int(x.level, 2));
    int iters = newton_iters(L.e * (int64_t)u.cprec);
    for (int i = 0; i < iters; ++i)
        z = mul(half, add(z, mul(u, inv(z))));
    z.piv += x.piv / 2;
    return normalize(z);
}

int Tower::square_class(const FieldElt& x) const {
    if (x.zero) throw ZeroInput("square class of zero");
    int idx = (x.piv % 2 != 0) ? 2 : 0;
    if (lv(x.level).res->chi(residue(x)) == -1) idx |= 1;
    return idx;
}

FieldElt Tower::square_class_rep(int level, int idx) const {
    switch (idx) {
        case 0: return one(level);
        case 1: return nonresidue_unit(level);
        case 2: return pi(level);
        case 3: return mul(nonresidue_unit(level), pi(level));
        default: throw Error("square class index out of range");
    }
}

SquareClassGroup Tower::square_class_group(int level) const { return SquareClassGroup(this, level); }

SquareClassGroup::SquareClassGroup(const Tower* tw, int level) : tw_(tw), level_(level) {
    for (int i = 0; i < 4; ++i) reps_.push_back(tw->square_class_rep(level, i));
}

// ---------------------------------------------------------------------------
// embeddings up the tower

FieldElt Tower::apply_step(const FieldElt& x, int to_level) const {
    const Level& cur = lv(to_level);
    if (x.zero) return zero(to_level);
    int64_t e = cur.e, f = cur.f;
    const BigInt& mod = pp(x.cprec);
    if (cur.step_unram) {
        const Level& prev = lv(to_level - 1);
        std::vector<BigInt> g(e * f, 0);
        std::vector<BigInt> img(f, 0);
        if (prev.f == 1) {
            img[0] = 0;  // unused
        } else {
            for (int64_t b = 0; b < f; ++b) img[b] = cur.beta_prev_img.c[b];
        }
        for (int64_t a = 0; a < prev.e; ++a) {
            std::vector<BigInt> row(prev.f);
            for (int64_t b = 0; b < prev.f; ++b) row[b] = x.c[a * prev.f + b];
            std::vector<BigInt> out;
            if (prev.f == 1) {
                out.assign(f, 0);
                out[0] = row[0];
            } else {
                out = leval(row, img, cur.H, f, mod);
            }
            for (int64_t b = 0; b < f; ++b) g[a * f + b] = out[b];
        }
        FieldElt y;
        y.tw = this;
        y.level = to_level;
        y.zero = false;
        y.piv = x.piv;
        y.cprec = x.cprec;
        y.c = std::move(g);
        return normalize(std::move(y));
    }
    // ramified step: pi_old = zeta^(-k) pi_new^(e'), beta unchanged
    int64_t estep = cur.step_e, k = cur.step_twist;
    const Level& prev = lv(to_level - 1);
    std::vector<BigInt> g(e * f, 0);
    for (int64_t a = 0; a < prev.e; ++a) {
        std::vector<BigInt> row(prev.f);
        bool rz = true;
        for (int64_t b = 0; b < prev.f; ++b) { row[b] = x.c[a * prev.f + b]; rz = rz && row[b] == 0; }
        if (rz) continue;
        FieldElt zf = zeta_pow(to_level, -k * (a + x.piv));
        std::vector<BigInt> zc(zf.c.begin(), zf.c.begin() + f);
        auto out = lmul(row, zc, cur.H, f, mod);
        for (int64_t b = 0; b < f; ++b) g[a * estep * f + b] = out[b];
    }
    FieldElt y;
    y.tw = this;
    y.level = to_level;
    y.zero = false;
    y.piv = x.piv * estep;
    y.cprec = x.cprec;
    y.c = std::move(g);
    return normalize(std::move(y));
}

FieldElt Tower::embed(const FieldElt& x, int to_level) const {
    if (x.level > to_level) throw NotSubfield("can only embed into a later level");
    FieldElt y = x;
    for (int l = x.level + 1; l <= to_level; ++l) y = apply_step(y, l);
    return y;
}

// ---------------------------------------------------------------------------
// coordinates over a prefix field

std::vector<FieldElt> Tower::to_base_coords(const FieldElt& x) const {
    const Level& L = lv(x.level);
    int64_t e = L.e, f = L.f;
    std::vector<FieldElt> out(e * f, zero(0));
    if (x.zero) return out;
    int64_t k = x.piv >= 0 ? x.piv / e : -((-x.piv + e - 1) / e);
    int64_t r = x.piv - k * e;
    // x = p^k * (unit * pi^r * zeta^(m k))
    FieldElt u = x;
    u.piv = 0;
    FieldElt shift = mul(pow(pi(x.level), r), zeta_pow(x.level, L.m * k));
    FieldElt folded = mul(u, shift);
    // folded may have positive pi-valuation; push it back into the grid
    std::vector<BigInt> g(e * f, 0);
    {
        int64_t fp = folded.piv;
        if (fp < 0 || fp >= e) throw Error("internal: coordinate fold out of range");
        // multiply grid by pi^fp without normalizing away
        const BigInt& mod = pp(folded.cprec);
        std::vector<BigInt> tc(L.zeta_m.c.begin(), L.zeta_m.c.begin() + f);
        for (int64_t a = 0; a < e; ++a) {
            int64_t na = a + fp;
            bool fold_row = na >= e;
            if (fold_row) na -= e;
            std::vector<BigInt> row(folded.c.begin() + a * f, folded.c.begin() + (a + 1) * f);
            if (fold_row) {
                row = lmul(row, tc, L.H, f, mod);
                for (auto& cc : row) cc *= spec_.p;
            }
            for (int64_t b = 0; b < f; ++b) g[na * f + b] = row[b];
        }
        grid_reduce(g, folded.cprec);
    }
    for (int64_t a = 0; a < e; ++a)
        for (int64_t b = 0; b < f; ++b) {
            const BigInt& cc = g[a * f + b];
            if (cc == 0) continue;
            int64_t w = valp_coeff(cc, folded.cprec);
            FieldElt s;
            s.tw = this;
            s.level = 0;
            s.zero = false;
            s.piv = w + k;
            s.cprec = folded.cprec - (int)w;
            s.c = {cc / pp((int)w)};
            out[a * f + b] = normalize(std::move(s));
        }
    return out;
}

std::vector<FieldElt> Tower::relative_basis(int level, int sub) const {
    const Level& L = lv(level);
    const Level& S = lv(sub);
    int64_t erel = L.e / S.e, frel = L.f / S.f;
    std::vector<FieldElt> basis;
    FieldElt be = one(level);
    for (int64_t a = 0; a < erel; ++a) {
        FieldElt cur = be;
        for (int64_t b = 0; b < frel; ++b) {
            if (b == 0)
                basis.push_back(cur);
            else {
                // beta^b pi^a; beta is the residue-polynomial root at `level`
                FieldElt beta;
                beta = zero(level);
                std::vector<BigInt> g(L.e * L.f, 0);
                g[1] = 1;  // beta
                beta = make(level, 0, std::move(g), spec_.precision);
                cur = mul(cur, beta);
                basis.push_back(cur);
            }
        }
        be = mul(be, pi(level));
    }
    return basis;
}

void Tower::build_coord_cache(int level, int sub) const {
    CoordCache& cc = coords_[level][sub];
    const Level& L = lv(level);
    const Level& S = lv(sub);
    int64_t n_abs = L.e * L.f;
    int64_t n_sub = S.e * S.f;
    int64_t n_rel = n_abs / n_sub;
    cc.n = (int)n_abs;
    auto relb = relative_basis(level, sub);
    auto subb = relative_basis(sub, 0);
    Mat M(this, 0, (int)n_abs, (int)n_abs);
    for (int64_t s = 0; s < n_rel; ++s)
        for (int64_t w = 0; w < n_sub; ++w) {
            FieldElt col_elt = mul(embed(subb[w], level), relb[s]);
            auto colc = to_base_coords(col_elt);
            for (int64_t r = 0; r < n_abs; ++r) M.at((int)r, (int)(s * n_sub + w)) = colc[r];
        }
    Mat Minv = inverse(M);
    cc.inv.clear();
    cc.inv.reserve(n_abs * n_abs);
    for (int64_t i = 0; i < n_abs; ++i)
        for (int64_t j = 0; j < n_abs; ++j) cc.inv.push_back(Minv.at((int)i, (int)j));
    cc.ready = true;
}

std::vector<FieldElt> Tower::relative_coords(const FieldElt& x, int sub) const {
    int level = x.level;
    if (sub > level) throw NotSubfield("sub-tower marker must be a prefix");
    const CoordCache& cc = coords_[level][sub];
    if (!cc.ready) throw Error("internal: coordinate cache missing");
    const Level& S = lv(sub);
    int64_t n_abs = cc.n;
    int64_t n_sub = S.e * S.f;
    int64_t n_rel = n_abs / n_sub;
    auto y = to_base_coords(x);
    std::vector<FieldElt> X(n_abs, zero(0));
    for (int64_t i = 0; i < n_abs; ++i) {
        FieldElt acc = zero(0);
        for (int64_t j = 0; j < n_abs; ++j) {
            if (y[j].zero || cc.inv[i * n_abs + j].zero) continue;
            acc = add(acc, mul(cc.inv[i * n_abs + j], y[j]));
        }
        X[i] = acc;
    }
    auto subb = relative_basis(sub, 0);
    std::vector<FieldElt> out(n_rel, zero(sub));
    for (int64_t s = 0; s < n_rel; ++s) {
        FieldElt acc = zero(sub);
        for (int64_t w = 0; w < n_sub; ++w) {
            if (X[s * n_sub + w].zero) continue;
            acc = add(acc, mul(embed(X[s * n_sub + w], sub), subb[w]));
        }
        out[s] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// norms, traces, square-class bookkeeping over prefixes

std::pair<FieldElt, FieldElt> Tower::norm_trace(const FieldElt& x, int sub) const {
    int level = x.level;
    if (sub > level) throw NotSubfield("sub-tower marker must be a prefix");
    int64_t n_rel = rel_degree(level, sub);
    auto relb = relative_basis(level, sub);
    Mat M(this, sub, (int)n_rel, (int)n_rel);
    for (int64_t j = 0; j < n_rel; ++j) {
        auto col = relative_coords(mul(x, relb[j]), sub);
        for (int64_t i = 0; i < n_rel; ++i) M.at((int)i, (int)j) = col[i];
    }
    return {orthinv::det(M), orthinv::trace(M)};
}

int Tower::y_invariant(int level, int sub) const {
    return (int)square_classes_killed(level, sub).size();
}

std::vector<int> Tower::square_classes_killed(int level, int sub) const {
    std::vector<int> out;
    for (int idx = 0; idx < 4; ++idx) {
        FieldElt rep = square_class_rep(sub, idx);
        if (is_square(embed(rep, level))) out.push_back(idx);
    }
    return out;
}

std::vector<int> Tower::norm_image_classes(int level, int sub) const {
    // norms of the multiplicative generators; 1+P contributes only squares
    std::vector<int> gens;
    gens.push_back(square_class(norm(zeta(level), sub)));
    gens.push_back(square_class(norm(pi(level), sub)));
    gens.push_back(square_class(norm(add(one(level), pi(level)), sub)));
    bool in[4] = {true, false, false, false};
    bool grew = true;
    while (grew) {
        grew = false;
        for (int g : gens)
            for (int i = 0; i < 4; ++i)
                if (in[i] && !in[i ^ g]) { in[i ^ g] = true; grew = true; }
    }
    std::vector<int> out;
    for (int i = 0; i < 4; ++i)
        if (in[i]) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// deterministic pseudo-random elements for tests and searches

static uint64_t xs64(uint64_t& s) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 0x2545F4914F6CDD1DULL;
}

FieldElt Tower::random_unit(int level, uint64_t& state) const {
    const Level& L = lv(level);
    int digits = std::min(spec_.precision, 6);
    std::vector<BigInt> g(L.e * L.f, 0);
    for (int64_t i = 0; i < L.e * L.f; ++i) {
        BigInt v = 0;
        for (int d = 0; d < digits; ++d) v = v * spec_.p + (int64_t)(xs64(state) % (uint64_t)spec_.p);
        g[i] = v;
    }
    // force a unit leading coefficient
    if (g[0] % spec_.p == 0) g[0] += 1 + (int64_t)(xs64(state) % (uint64_t)(spec_.p - 1));
    return make(level, 0, std::move(g), spec_.precision);
}

FieldElt Tower::random_elt(int level, uint64_t& state, int val_lo, int val_hi) const {
    FieldElt u = random_unit(level, state);
    int64_t v = val_lo + (int64_t)(xs64(state) % (uint64_t)(val_hi - val_lo + 1));
    u.piv = v;
    return u;
}

} // namespace orthinv
