#include "orthinv/fforacle.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "orthinv/quadform.hpp"

namespace orthinv {

int64_t default_ff_budget() {
    if (const char* env = std::getenv("ORTHINV_BUDGET")) {
        int64_t v = std::atoll(env);
        if (v > 0) return v;
    }
    return 10000000;  // ten million enumeration points
}

FFContext::FFContext(int64_t q_, int n_, int64_t budget_) : q(q_), n(n_), budget(budget_) {
    if (budget <= 0) budget = default_ff_budget();
    if (n < 2) throw DimensionMismatch("oracle dimension must be at least 2");
    int64_t p = 0, m = q;
    for (int64_t d = 3; d * d <= m; d += 2)
        if (m % d == 0) { p = d; break; }
    if (p == 0) p = m;
    if (m % 2 == 0 || !is_prime_small(p)) throw BadPrime("q must be an odd prime power");
    int k = 0;
    while (m > 1) {
        if (m % p != 0) throw BadPrime("q must be an odd prime power");
        m /= p;
        ++k;
    }
    Fq = std::make_unique<ResidueField>(p, k);
    Fqn = std::make_unique<ResidueField>(p, k * n);
    // embed F_q by the smallest root of its defining polynomial
    if (k == 1) {
        root = 0;
        embed_table.resize((size_t)q);
        for (int64_t c = 0; c < q; ++c) embed_table[(size_t)c] = c;
    } else {
        root = Fqn->smallest_root(Fq->defining_poly());
        embed_table.resize((size_t)q);
        for (int64_t c = 0; c < q; ++c) {
            auto digs = Fq->digits(c);
            int64_t img = 0;
            for (int d = (int)digs.size() - 1; d >= 0; --d)
                img = Fqn->add(Fqn->mul(img, root), digs[d]);
            embed_table[(size_t)c] = img;
        }
    }
    project_table.assign((size_t)Fqn->q(), -1);
    for (int64_t c = 0; c < q; ++c) project_table[(size_t)embed_table[(size_t)c]] = c;
}

int64_t FFContext::project(int64_t c) const {
    int64_t v = project_table[(size_t)c];
    if (v < 0) throw Error("element does not lie in the base field");
    return v;
}

int64_t FFContext::trace_to_base(int64_t x) const {
    int64_t acc = 0, cur = x;
    for (int i = 0; i < n; ++i) {
        acc = Fqn->add(acc, cur);
        cur = Fqn->pow(cur, q);
    }
    return project(acc);
}

int64_t FFContext::norm_to_base(int64_t x) const {
    int64_t s = (Fqn->q() - 1) / (q - 1);
    return project(Fqn->pow(x, s));
}

// ---------------------------------------------------------------------------

FFCensus ff_congruence_census(const FFContext& ctx) {
    const ResidueField& R = *ctx.Fq;
    int n = ctx.n;
    int entries = n * (n + 1) / 2;
    int64_t points = 1;
    for (int i = 0; i < entries; ++i) {
        points *= ctx.q;
        if (points > ctx.budget) throw BudgetExceeded("symmetric-space enumeration too large");
    }
    FFCensus out;
    FFMat A(n, std::vector<int64_t>(n, 0));
    for (int64_t idx = 0; idx < points; ++idx) {
        int64_t v = idx;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                int64_t c = v % ctx.q;
                v /= ctx.q;
                A[i][j] = c;
                A[j][i] = c;
            }
        int64_t d = ff_det(R, A);
        if (d == 0) continue;
        ++out.total_invertible;
        int bucket = (R.chi(d) == 1) ? 0 : 1;
        if (out.class_sizes[bucket] == 0) out.reps[bucket] = A;
        ++out.class_sizes[bucket];
    }
    out.num_classes = (out.class_sizes[0] > 0) + (out.class_sizes[1] > 0);
    return out;
}

int ff_involution_orbits(const FFContext& ctx) {
    const ResidueField& R = *ctx.Fq;
    auto cen = ff_congruence_census(ctx);
    if (cen.num_classes != 2) throw Error("internal: expected two congruence classes");
    // classes merge when some scalar twist matches discriminants
    int64_t d0 = ff_det(R, cen.reps[0]);
    int64_t d1 = ff_det(R, cen.reps[1]);
    for (int64_t z = 1; z < ctx.q; ++z) {
        int64_t zn = R.pow(z, ctx.n);
        if (R.chi(R.mul(zn, d0)) == R.chi(d1)) return 1;
    }
    return 2;
}

// ---------------------------------------------------------------------------

FFEmbedding ff_jsym_embedding(const FFContext& ctx) {
    const ResidueField& Rq = *ctx.Fq;
    const ResidueField& Rn = *ctx.Fqn;
    int n = ctx.n;
    int64_t beta = Rn.canonical_generator();
    std::vector<int64_t> pow_basis(n);
    int64_t cur = 1;
    for (int i = 0; i < n; ++i) {
        pow_basis[i] = cur;
        cur = Rn.mul(cur, beta);
    }
    // scaled trace form on the power basis
    int64_t fprime = 1, conj = beta;
    for (int s = 1; s < n; ++s) {
        conj = Rn.pow(conj, ctx.q);
        fprime = Rn.mul(fprime, Rn.sub(beta, conj));
    }
    int64_t a = Rn.inv(fprime);
    FFMat G(n, std::vector<int64_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G[i][j] = ctx.trace_to_base(Rn.mul(a, Rn.mul(pow_basis[i], pow_basis[j])));
    FFMat J(n, std::vector<int64_t>(n, 0));
    for (int i = 0; i < n; ++i) J[i][n - 1 - i] = 1;
    FFMat g = ff_congruence(Rq, G, J);
    FFEmbedding emb;
    emb.n = n;
    emb.basis.resize(n);
    for (int k = 0; k < n; ++k) {
        int64_t acc = 0;
        for (int i = 0; i < n; ++i)
            acc = Rn.add(acc, Rn.mul(ctx.embed(g[i][k]), pow_basis[i]));
        emb.basis[k] = acc;
    }
    // coordinate solver over the prime field
    int64_t p = Rq.p();
    int kq = Rq.f();
    int dim = kq * n;  // = Rn.f()
    ResidueField Fp(p, 1);
    FFMat M(dim, std::vector<int64_t>(dim));
    std::vector<int> col(dim);
    int cidx = 0;
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < kq; ++d) {
            // basis_i scaled by the d-th digit vector of Fq
            std::vector<int> dig(kq, 0);
            dig[d] = 1;
            int64_t c = Rq.from_digits(dig);
            int64_t val = Rn.mul(ctx.embed(c), emb.basis[i]);
            auto digs = Rn.digits(val);
            for (int r = 0; r < dim; ++r) M[r][cidx] = digs[r];
            ++cidx;
        }
    (void)col;
    emb.coord_inv = ff_inverse(Fp, M);
    return emb;
}

FFMat FFEmbedding::matrix_of(const FFContext& ctx, int64_t x) const {
    const ResidueField& Rq = *ctx.Fq;
    const ResidueField& Rn = *ctx.Fqn;
    int64_t p = Rq.p();
    int kq = Rq.f();
    int dim = kq * n;
    ResidueField Fp(p, 1);
    FFMat M(n, std::vector<int64_t>(n));
    for (int j = 0; j < n; ++j) {
        int64_t y = Rn.mul(x, basis[j]);
        auto digs = Rn.digits(y);
        // coords over the prime field, then regroup into Fq digits
        std::vector<int64_t> co(dim, 0);
        for (int r = 0; r < dim; ++r) {
            int64_t acc = 0;
            for (int c = 0; c < dim; ++c)
                acc = Fp.add(acc, Fp.mul(coord_inv[r][c], digs[c]));
            co[r] = acc;
        }
        for (int i = 0; i < n; ++i) {
            std::vector<int> dig(kq);
            for (int d = 0; d < kq; ++d) dig[d] = (int)co[i * kq + d];
            M[i][j] = Rq.from_digits(dig);
        }
    }
    return M;
}

// ---------------------------------------------------------------------------

FFSplitOrbits ff_split_t_orbits(const FFContext& ctx, const FFEmbedding& emb) {
    const ResidueField& Rq = *ctx.Fq;
    const ResidueField& Rn = *ctx.Fqn;
    int64_t tn = Rn.q() - 1;
    if (tn > ctx.budget) throw BudgetExceeded("torus enumeration too large");
    // x ~ x' when x/x' lies in T^2 F_q^x; group all of T honestly
    auto in_t2f = [&](int64_t v) {
        for (int64_t c = 1; c < ctx.q; ++c) {
            int64_t w = Rn.mul(v, ctx.embed(c));
            if (Rn.dlog(w) % 2 == 0) return true;
        }
        return false;
    };
    FFSplitOrbits out;
    std::vector<int64_t> reps;
    for (int64_t lg = 0; lg < tn; ++lg) {
        int64_t x = Rn.from_dlog(lg);
        bool fresh = true;
        for (int64_t r : reps)
            if (in_t2f(Rn.mul(x, Rn.inv(r)))) { fresh = false; break; }
        if (fresh) reps.push_back(x);
    }
    out.y = (int)reps.size();
    out.coset_reps = reps;
    // place each orbit by the discriminant of J * m(x)
    std::set<int> seen;
    bool clean = true;
    for (int64_t x : reps) {
        FFMat m = emb.matrix_of(ctx, x);
        FFMat J(ctx.n, std::vector<int64_t>(ctx.n, 0));
        for (int i = 0; i < ctx.n; ++i) J[i][ctx.n - 1 - i] = 1;
        FFMat nu = ff_mul(Rq, J, m);
        // symmetry sanity
        for (int i = 0; i < ctx.n; ++i)
            for (int j = 0; j < ctx.n; ++j)
                if (nu[i][j] != nu[j][i]) clean = false;
        int chi = Rq.chi(ff_det(Rq, nu));
        out.orbit_disc_chi.push_back(chi);
        if (seen.count(chi)) clean = false;  // a class hit twice
        seen.insert(chi);
    }
    // involution orbits: 1 for odd n (classes merge), else 2; each must
    // receive exactly one split torus orbit
    int g_orbits = ff_involution_orbits(ctx);
    if (ctx.n % 2 == 1) {
        out.one_per_class = (g_orbits == 1) && (out.y == 1);
    } else {
        out.one_per_class = (g_orbits == 2) && (out.y == 2) && clean && (int)seen.size() == 2;
    }
    // norm surjectivity witness
    std::set<int64_t> norms;
    for (int64_t lg = 0; lg < tn; ++lg) norms.insert(ctx.norm_to_base(Rn.from_dlog(lg)));
    out.norms_surjective = ((int64_t)norms.size() == ctx.q - 1);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int64_t> subgroup_closure(const ResidueField& R, std::vector<int64_t> gens) {
    std::set<int64_t> s = {1};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int64_t> cur(s.begin(), s.end());
        for (int64_t a : cur)
            for (int64_t g : gens) {
                int64_t v = R.mul(a, g);
                if (!s.count(v)) { s.insert(v); grew = true; }
            }
    }
    return {s.begin(), s.end()};
}

} // namespace

FFSimilitude ff_similitude_check(const FFContext& ctx, const FFEmbedding& emb, const FFMat& nu) {
    const ResidueField& Rq = *ctx.Fq;
    const ResidueField& Rn = *ctx.Fqn;
    int n = ctx.n;
    int64_t points = 1;
    for (int i = 0; i < n * n; ++i) {
        points *= ctx.q;
        if (points > ctx.budget) throw BudgetExceeded("matrix-space enumeration too large");
    }
    // ratio of g when g is a similitude of nu, else -1
    auto ratio_of = [&](const FFMat& g) -> int64_t {
        FFMat w = ff_mul(Rq, ff_transpose(g), ff_mul(Rq, nu, g));
        int64_t z = -1;
        for (int i = 0; i < n && z < 0; ++i)
            for (int j = 0; j < n; ++j)
                if (nu[i][j] != 0) {
                    if (w[i][j] == 0) return -1;
                    z = Rq.mul(w[i][j], Rq.inv(nu[i][j]));
                    break;
                }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (w[i][j] != Rq.mul(z, nu[i][j])) return -1;
        return z;
    };

    std::set<int64_t> mu_torus;
    std::vector<int64_t> torus_cosets;  // dlog of torus similitude elements
    for (int64_t lg = 0; lg < Rn.q() - 1; ++lg) {
        FFMat m = emb.matrix_of(ctx, Rn.from_dlog(lg));
        int64_t z = ratio_of(m);
        if (z > 0) mu_torus.insert(z);
    }
    std::set<int64_t> squares;
    for (int64_t c = 1; c < ctx.q; ++c) squares.insert(Rq.mul(c, c));

    std::set<int64_t> mu_all;
    bool factor_ok = true;
    // torus ratios up to squares, for the factorization check
    std::set<int64_t> torus_sq;
    for (int64_t z : mu_torus)
        for (int64_t s : squares) torus_sq.insert(Rq.mul(z, s));
    FFMat g(n, std::vector<int64_t>(n));
    for (int64_t idx = 0; idx < points; ++idx) {
        int64_t v = idx;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                g[i][j] = v % ctx.q;
                v /= ctx.q;
            }
        int64_t z = ratio_of(g);
        if (z < 0) continue;
        mu_all.insert(z);
        if (!torus_sq.count(z)) factor_ok = false;
    }

    FFSimilitude out;
    out.mu_image = {mu_all.begin(), mu_all.end()};
    out.mu_torus = {mu_torus.begin(), mu_torus.end()};
    out.factorization_ok = factor_ok;
    // indices of class groups
    std::vector<int64_t> denomT;
    for (int64_t z : mu_torus) denomT.push_back(z);
    for (int64_t s : squares) denomT.push_back(s);
    auto subT = subgroup_closure(Rq, denomT);
    std::set<int64_t> subTs(subT.begin(), subT.end());
    int64_t interT = 0, interZ = 0;
    for (int64_t z : mu_all) {
        if (subTs.count(z)) ++interT;
        if (squares.count(z)) ++interZ;
    }
    out.mT = (int)(mu_all.size() / (size_t)interT);
    out.mZ = (int)(mu_all.size() / (size_t)interZ);
    // expected torus ratios: base elements that are squares upstairs
    std::set<int64_t> expect;
    for (int64_t c = 1; c < ctx.q; ++c)
        if (Rn.dlog(ctx.embed(c)) % 2 == 0) expect.insert(c);
    out.torus_ratios_expected = (mu_torus == expect);
    return out;
}

} // namespace orthinv
