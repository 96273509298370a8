#include "orthinv/quadform.hpp"

#include <algorithm>
#include <map>

#include "orthinv/ffmat.hpp"

namespace orthinv {

int hilbert_symbol(const FieldElt& a, const FieldElt& b) {
    if (a.is_zero() || b.is_zero()) throw ZeroInput("Hilbert symbol needs nonzero arguments");
    if (a.level != b.level || a.tw != b.tw) throw FieldMismatch("Hilbert symbol arguments must share a field");
    const Tower& tw = *a.tw;
    const ResidueField& R = tw.residue_field(a.level);
    int64_t A = tw.pival(a), B = tw.pival(b);
    int64_t u = tw.residue(a), v = tw.residue(b);
    int64_t c = 1;
    if ((A % 2 != 0) && (B % 2 != 0)) c = R.neg(1);
    if (B % 2 != 0) c = R.mul(c, u);
    if (A % 2 != 0) c = R.mul(c, v);
    return R.chi(c);
}

// ---------------------------------------------------------------------------
// diagonalization

Diagonalization diagonalize(const Mat& S) {
    if (S.rows() != S.cols()) throw DimensionMismatch("diagonalize needs a square matrix");
    if (!mat_is_symmetric(S)) throw DimensionMismatch("diagonalize needs a symmetric matrix");
    const Tower* tw = S.tower();
    int level = S.level();
    int n = S.rows();
    Mat A = S;
    Mat g = Mat::identity(tw, level, n);

    auto sym_swap = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < n; ++k) std::swap(A.at(i, k), A.at(j, k));
        for (int k = 0; k < n; ++k) std::swap(A.at(k, i), A.at(k, j));
        for (int k = 0; k < n; ++k) std::swap(g.at(k, i), g.at(k, j));
    };
    auto sym_coladd = [&](int i, int j, const FieldElt& c) {
        // column_i += c * column_j, then the same on rows
        for (int k = 0; k < n; ++k)
            if (!A.at(k, j).is_zero()) A.at(k, i) = A.at(k, i) + c * A.at(k, j);
        for (int k = 0; k < n; ++k)
            if (!A.at(j, k).is_zero()) A.at(i, k) = A.at(i, k) + c * A.at(j, k);
        for (int k = 0; k < n; ++k)
            if (!g.at(k, j).is_zero()) g.at(k, i) = g.at(k, i) + c * g.at(k, j);
    };

    for (int k = 0; k < n; ++k) {
        int bi = -1, bj = -1;
        Rat bv(0);
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                if (A.at(i, j).is_zero()) continue;
                Rat v = A.at(i, j).val();
                bool better = (bi < 0) || v < bv || (v == bv && bi != bj && i == j);
                if (better) { bi = i; bj = j; bv = v; }
            }
        if (bi < 0) throw Error("diagonalize: matrix is singular");
        if (bi != bj) {
            // every remaining diagonal entry is deeper than this off-diagonal one
            sym_coladd(bi, bj, tw->one(level));
            bj = bi;
        }
        sym_swap(k, bi);
        FieldElt pinv = tw->inv(A.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (A.at(i, k).is_zero()) continue;
            sym_coladd(i, k, -(A.at(i, k) * pinv));
        }
    }
    Diagonalization out;
    out.g = g;
    for (int i = 0; i < n; ++i) out.diag.push_back(A.at(i, i));
    return out;
}

FormInvariants invariants_of_diagonal(const Tower& tw, const std::vector<FieldElt>& d) {
    FormInvariants inv;
    inv.n = (int)d.size();
    int level = d.empty() ? 0 : d[0].level;
    FieldElt prod = tw.one(level);
    for (const auto& a : d) prod = prod * a;
    inv.disc_class = tw.square_class(prod);
    int64_t sgn = ((int64_t)inv.n * (inv.n - 1) / 2) % 2;
    FieldElt d0 = sgn ? -prod : prod;
    inv.disc0_class = tw.square_class(d0);
    inv.hasse = 1;
    inv.hasse0 = 1;
    for (size_t i = 0; i < d.size(); ++i)
        for (size_t j = i; j < d.size(); ++j) {
            int h = hilbert_symbol(d[i], d[j]);
            inv.hasse *= h;
            if (i != j) inv.hasse0 *= h;
        }
    // sanity: Hasse = Hasse_0 * Hilbert(-1, disc)
    if (inv.hasse != inv.hasse0 * hilbert_symbol(tw.from_int(level, -1), prod))
        throw Error("internal: Hasse invariant identity violated");
    return inv;
}

FormInvariants form_invariants(const Mat& S) {
    auto d = diagonalize(S);
    return invariants_of_diagonal(*S.tower(), d.diag);
}

bool is_similar(const Mat& S1, const Mat& S2) {
    if (S1.tower() != S2.tower() || S1.level() != S2.level())
        throw FieldMismatch("similarity test across different fields");
    if (S1.rows() != S2.rows()) throw DimensionMismatch("similarity test needs equal dimensions");
    auto a = form_invariants(S1), b = form_invariants(S2);
    return a.disc_class == b.disc_class && a.hasse == b.hasse;
}

std::vector<CensusEntry> similarity_class_census(const Tower& tw, int level, int n) {
    if (n < 2) throw DimensionMismatch("census needs n >= 2");
    std::map<std::pair<int, int>, CensusEntry> seen;
    std::vector<int> tup(n, 0);
    bool done = false;
    while (!done) {
        std::vector<FieldElt> d;
        for (int i = 0; i < n; ++i) d.push_back(tw.square_class_rep(level, tup[i]));
        auto inv = invariants_of_diagonal(tw, d);
        auto key = std::make_pair(inv.disc_class, inv.hasse);
        if (!seen.count(key)) {
            CensusEntry e;
            e.diag_classes = tup;
            e.rep = Mat::diag(&tw, level, d);
            e.inv = inv;
            seen.emplace(key, std::move(e));
        }
        int i = n - 1;
        while (i >= 0 && tup[i] == 3) { tup[i] = 0; --i; }
        if (i < 0) done = true;
        else ++tup[i];
    }
    std::vector<CensusEntry> out;
    for (auto& [k, v] : seen) out.push_back(std::move(v));
    return out;
}

// ---------------------------------------------------------------------------
// congruence over the residue field

std::pair<std::vector<int64_t>, std::vector<std::vector<int64_t>>>
ff_diagonalize(const ResidueField& R, FFMat A) {
    int n = (int)A.size();
    FFMat g = ff_identity(n);
    auto coladd = [&](int i, int j, int64_t c) {
        for (int k = 0; k < n; ++k) A[k][i] = R.add(A[k][i], R.mul(c, A[k][j]));
        for (int k = 0; k < n; ++k) A[i][k] = R.add(A[i][k], R.mul(c, A[j][k]));
        for (int k = 0; k < n; ++k) g[k][i] = R.add(g[k][i], R.mul(c, g[k][j]));
    };
    auto colswap = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < n; ++k) std::swap(A[i][k], A[j][k]);
        for (int k = 0; k < n; ++k) std::swap(A[k][i], A[k][j]);
        for (int k = 0; k < n; ++k) std::swap(g[k][i], g[k][j]);
    };
    for (int k = 0; k < n; ++k) {
        int pv = -1;
        for (int i = k; i < n; ++i)
            if (A[i][i] != 0) { pv = i; break; }
        if (pv < 0) {
            int bi = -1, bj = -1;
            for (int i = k; i < n && bi < 0; ++i)
                for (int j = k; j < n; ++j)
                    if (A[i][j] != 0) { bi = i; bj = j; break; }
            if (bi < 0) throw Error("ff_diagonalize: singular matrix");
            coladd(bi, bj, 1);
            pv = bi;
        }
        colswap(k, pv);
        int64_t pinv = R.inv(A[k][k]);
        for (int i = k + 1; i < n; ++i) {
            if (A[i][k] == 0) continue;
            coladd(i, k, R.neg(R.mul(A[i][k], pinv)));
        }
    }
    std::vector<int64_t> d(n);
    for (int i = 0; i < n; ++i) d[i] = A[i][i];
    return {d, g};
}

namespace {

// reduce a nondegenerate diagonal form over F_q to diag(1,..,1[,u]);
// returns (number of trailing u entries in {0,1}, accumulated transform)
std::pair<int, FFMat> ff_normalize_diag(const ResidueField& R, std::vector<int64_t> d) {
    int n = (int)d.size();
    FFMat g = ff_identity(n);
    int64_t u = R.canonical_nonsquare();
    for (int i = 0; i < n; ++i) {
        if (d[i] == 0) throw Error("degenerate diagonal");
        int64_t k = R.dlog(d[i]);
        int64_t s;
        if (k % 2 == 0) {
            s = R.from_dlog(-(k / 2));
            d[i] = 1;
        } else {
            int64_t t = k - R.dlog(u);  // even
            s = R.from_dlog(-(t / 2));
            d[i] = u;
        }
        for (int r = 0; r < n; ++r) g[r][i] = R.mul(g[r][i], s);
    }
    std::vector<int> upos;
    for (int i = 0; i < n; ++i)
        if (d[i] == u) upos.push_back(i);
    while (upos.size() >= 2) {
        int i = upos[upos.size() - 2], j = upos[upos.size() - 1];
        int64_t target = R.inv(u);
        int64_t a = 0, b = 0;
        bool found = false;
        for (int64_t ca = 0; ca < R.q() && !found; ++ca) {
            int64_t bb = R.sub(target, R.mul(ca, ca));
            if (R.is_square(bb)) { a = ca; b = R.sqrt(bb); found = true; }
        }
        if (!found) throw Error("internal: sum-of-two-squares search failed");
        FFMat blk = ff_identity(n);
        blk[i][i] = a; blk[j][i] = b;
        blk[i][j] = R.neg(b); blk[j][j] = a;
        g = ff_mul(R, g, blk);
        d[i] = 1;
        d[j] = 1;
        upos.pop_back();
        upos.pop_back();
    }
    int ucount = (int)upos.size();
    if (ucount == 1 && upos[0] != n - 1) {
        int i = upos[0];
        FFMat perm = ff_identity(n);
        perm[i][i] = 0; perm[n - 1][n - 1] = 0;
        perm[i][n - 1] = 1; perm[n - 1][i] = 1;
        g = ff_mul(R, g, perm);
    }
    return {ucount, g};
}

} // namespace

FFMat ff_congruence(const ResidueField& R, FFMat S, FFMat T) {
    auto [ds, gs0] = ff_diagonalize(R, S);
    auto [dt, gt0] = ff_diagonalize(R, T);
    auto [us, gs1] = ff_normalize_diag(R, ds);
    auto [ut, gt1] = ff_normalize_diag(R, dt);
    if (us != ut) throw NotSimilar("residue forms have different discriminants");
    FFMat gs = ff_mul(R, gs0, gs1);
    FFMat gt = ff_mul(R, gt0, gt1);
    return ff_mul(R, gs, ff_inverse(R, gt));
}

// ---------------------------------------------------------------------------
// congruence over the tower field

namespace {

int64_t elt_residue_code(const Tower& tw, const FieldElt& x) {
    if (x.is_zero()) return 0;
    if (tw.pival(x) < 0) throw Error("entry is not integral");
    if (tw.pival(x) > 0) return 0;
    return tw.residue(x);
}

FieldElt lift_code(const Tower& tw, int level, int64_t code) {
    const ResidueField& R = tw.residue_field(level);
    auto digs = R.digits(code);
    FieldElt acc = tw.zero(level);
    if (code == 0) return acc;
    auto rb = tw.relative_basis(level, 0);  // beta^b pi^a basis; row a=0 holds beta powers
    for (size_t b = 0; b < digs.size(); ++b)
        if (digs[b] != 0) acc = acc + tw.from_int(level, digs[b]) * rb[b];
    return acc;
}

Mat lift_ffmat(const Tower& tw, int level, const FFMat& A) {
    int n = (int)A.size();
    Mat M(&tw, level, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A[i][j] != 0) M.at(i, j) = lift_code(tw, level, A[i][j]);
    return M;
}

// Hensel refinement of a residue-field congruence; S, T integral symmetric
// with unit determinant and congruent reductions.  The transform stays in
// GL_n(O).
Mat integral_congruence(const Mat& S, const Mat& T) {
    const Tower& tw = *S.tower();
    int level = S.level();
    int n = S.rows();
    const ResidueField& R = tw.residue_field(level);
    FFMat Sbar(n, std::vector<int64_t>(n)), Tbar(n, std::vector<int64_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Sbar[i][j] = elt_residue_code(tw, S.at(i, j));
            Tbar[i][j] = elt_residue_code(tw, T.at(i, j));
        }
    FFMat gbar = ff_congruence(R, Sbar, Tbar);
    Mat g = lift_ffmat(tw, level, gbar);
    Mat Tinv = inverse(T);
    FieldElt half = tw.inv(tw.from_int(level, 2));
    for (int it = 0; it < tw.precision() + 4; ++it) {
        Mat D = T - transpose(g) * S * g;
        bool zero = true;
        for (int i = 0; i < n && zero; ++i)
            for (int j = 0; j < n; ++j)
                if (!D.at(i, j).is_zero()) { zero = false; break; }
        if (zero) return g;
        Mat X = half * (Tinv * D);
        g = g * (Mat::identity(&tw, level, n) + X);
    }
    throw Error("internal: congruence refinement did not converge");
}

struct CandidateGen {
    const Tower& tw;
    int level;
    int n;
    uint64_t state;
    int64_t produced = 0;

    CandidateGen(const Tower& t, int lvl, int n_, uint64_t seed)
        : tw(t), level(lvl), n(n_), state(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL) {}

    static uint64_t next(uint64_t& s) {
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        return s * 0x2545F4914F6CDD1DULL;
    }

    std::vector<FieldElt> make() {
        ++produced;
        int64_t p = tw.p();
        std::vector<FieldElt> v((size_t)n, tw.zero(level));
        FieldElt piu = tw.pi(level);
        for (int i = 0; i < n; ++i) {
            int64_t c0 = (int64_t)(next(state) % (uint64_t)p);
            int64_t c1 = (int64_t)(next(state) % (uint64_t)p);
            FieldElt e = tw.from_int(level, c0);
            if (c1 != 0) e = e + tw.from_int(level, c1) * piu;
            v[(size_t)i] = e;
        }
        return v;
    }
};

FieldElt eval_diag_form(const Tower& tw, const std::vector<FieldElt>& d,
                        const std::vector<FieldElt>& v) {
    FieldElt acc = tw.zero(d[0].level);
    for (size_t i = 0; i < d.size(); ++i)
        if (!v[i].is_zero()) acc = acc + d[i] * v[i] * v[i];
    return acc;
}

// coordinates v with the value of the diagonal form in the square class of t
std::vector<FieldElt> represent_class(const Tower& tw, const std::vector<FieldElt>& d,
                                      const FieldElt& t, uint64_t seed, int64_t budget) {
    int level = t.level;
    int n = (int)d.size();
    int want = tw.square_class(t);
    std::vector<std::vector<FieldElt>> structured;
    for (int i = 0; i < n; ++i) {
        std::vector<FieldElt> v((size_t)n, tw.zero(level));
        v[(size_t)i] = tw.one(level);
        structured.push_back(v);
    }
    std::vector<FieldElt> scalars = {tw.one(level), tw.nonresidue_unit(level), tw.pi(level),
                                     tw.from_int(level, 2), tw.from_int(level, 1) + tw.pi(level)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (const auto& s : scalars) {
                std::vector<FieldElt> v((size_t)n, tw.zero(level));
                v[(size_t)i] = tw.one(level);
                v[(size_t)j] = s;
                structured.push_back(v);
            }
        }
    for (auto& v : structured) {
        FieldElt q = eval_diag_form(tw, d, v);
        if (!q.is_zero() && tw.square_class(q) == want) return v;
    }
    CandidateGen gen(tw, level, n, seed);
    while (gen.produced < budget) {
        auto v = gen.make();
        bool allz = std::all_of(v.begin(), v.end(), [](const FieldElt& x) { return x.is_zero(); });
        if (allz) continue;
        FieldElt q = eval_diag_form(tw, d, v);
        if (!q.is_zero() && tw.square_class(q) == want) return v;
    }
    throw SearchBudgetExceeded("no representation vector found within budget");
}

// h with transpose(h) A h = diag(target)
Mat match_form(const Mat& A, const std::vector<FieldElt>& target, uint64_t seed, int64_t budget) {
    const Tower& tw = *A.tower();
    int level = A.level();
    int n = A.rows();
    if (n == 0) return Mat(&tw, level, 0, 0);
    auto dz = diagonalize(A);
    const FieldElt& t0 = target[0];
    auto vc = represent_class(tw, dz.diag, t0, seed, budget);
    std::vector<FieldElt> u((size_t)n, tw.zero(level));
    for (int i = 0; i < n; ++i) {
        FieldElt acc = tw.zero(level);
        for (int j = 0; j < n; ++j)
            if (!vc[(size_t)j].is_zero() && !dz.g.at(i, j).is_zero())
                acc = acc + dz.g.at(i, j) * vc[(size_t)j];
        u[(size_t)i] = acc;
    }
    FieldElt q = tw.zero(level);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!u[(size_t)i].is_zero() && !u[(size_t)j].is_zero())
                q = q + u[(size_t)i] * A.at(i, j) * u[(size_t)j];
    FieldElt s = tw.sqrt(q / t0);
    FieldElt sinv = tw.inv(s);
    for (auto& x : u)
        if (!x.is_zero()) x = x * sinv;
    int i0 = -1;
    Rat bv(0);
    for (int i = 0; i < n; ++i) {
        if (u[(size_t)i].is_zero()) continue;
        Rat v = u[(size_t)i].val();
        if (i0 < 0 || v < bv) { i0 = i; bv = v; }
    }
    Mat C(&tw, level, n, n);
    for (int i = 0; i < n; ++i) C.at(i, 0) = u[(size_t)i];
    int col = 1;
    FieldElt t0inv = tw.inv(t0);
    for (int i = 0; i < n; ++i) {
        if (i == i0) continue;
        FieldElt bi = tw.zero(level);
        for (int j = 0; j < n; ++j)
            if (!u[(size_t)j].is_zero()) bi = bi + A.at(i, j) * u[(size_t)j];
        FieldElt fac = bi * t0inv;
        for (int r = 0; r < n; ++r) {
            FieldElt v = (r == i) ? tw.one(level) : tw.zero(level);
            if (!fac.is_zero() && !u[(size_t)r].is_zero()) v = v - fac * u[(size_t)r];
            C.at(r, col) = v;
        }
        ++col;
    }
    if (n == 1) return C;
    Mat G = transpose(C) * A * C;
    Mat Asub(&tw, level, n - 1, n - 1);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) Asub.at(i - 1, j - 1) = G.at(i, j);
    std::vector<FieldElt> rest(target.begin() + 1, target.end());
    Mat hsub = match_form(Asub, rest, seed + 1, budget);
    Mat ext = Mat::identity(&tw, level, n);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) ext.at(i, j) = hsub.at(i - 1, j - 1);
    return C * ext;
}

} // namespace

Mat congruence_transform(const Mat& S, const Mat& T, uint64_t seed, int64_t budget) {
    const Tower& tw = *S.tower();
    int level = S.level();
    int n = S.rows();
    if (T.rows() != n || S.level() != T.level() || S.tower() != T.tower())
        throw DimensionMismatch("congruence transform shape mismatch");
    if (mat_equal(S, T)) return Mat::identity(&tw, level, n);
    if (!is_similar(S, T)) throw NotSimilar("forms have different invariants");
    bool integral_unit = mat_is_integral(S) && mat_is_integral(T);
    if (integral_unit) {
        auto ds = det(S), dt = det(T);
        integral_unit = !ds.is_zero() && !dt.is_zero() && tw.pival(ds) == 0 && tw.pival(dt) == 0;
    }
    Mat g(&tw, level, n, n);
    if (integral_unit) {
        g = integral_congruence(S, T);
    } else {
        auto dt = diagonalize(T);
        Mat h = match_form(S, dt.diag, seed, budget);
        g = h * inverse(dt.g);
    }
    if (!mat_equal(transpose(g) * S * g, T)) throw Error("internal: congruence verification failed");
    return g;
}

} // namespace orthinv
