#include "orthinv/residue_field.hpp"

#include <algorithm>
#include <numeric>

namespace orthinv {

bool is_prime_small(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

// dense polynomial arithmetic over F_p, coefficient vectors
using Poly = std::vector<int64_t>;

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& h, int64_t p) {
    int f = (int)h.size() - 1;
    Poly prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    // reduce: x^f = -(h_0 + ... + h_{f-1} x^{f-1})
    for (int d = (int)prod.size() - 1; d >= f; --d) {
        int64_t c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < f; ++i)
            prod[d - f + i] = ((prod[d - f + i] - c * h[i]) % p + p) % p;
    }
    prod.resize(f);
    return prod;
}

Poly poly_powmod(Poly base, int64_t k, const Poly& h, int64_t p) {
    int f = (int)h.size() - 1;
    Poly r(f, 0);
    r[0] = 1;
    while (k > 0) {
        if (k & 1) r = poly_mulmod(r, base, h, p);
        base = poly_mulmod(base, base, h, p);
        k >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
    auto deg = [](const Poly& x) {
        for (int i = (int)x.size() - 1; i >= 0; --i)
            if (x[i] != 0) return i;
        return -1;
    };
    auto inv_mod_p = [&](int64_t v) {
        int64_t r = 1, b2 = v % p, e = p - 2;
        while (e > 0) {
            if (e & 1) r = r * b2 % p;
            b2 = b2 * b2 % p;
            e >>= 1;
        }
        return r;
    };
    while (deg(b) >= 0) {
        int da = deg(a), db = deg(b);
        if (da < db) { std::swap(a, b); continue; }
        int64_t c = a[da] * inv_mod_p(b[db]) % p;
        for (int i = 0; i <= db; ++i)
            a[da - db + i] = ((a[da - db + i] - c * b[i]) % p + p) % p;
    }
    return a;
}

bool is_irreducible(const Poly& h, int64_t p) {
    int f = (int)h.size() - 1;
    // x^(p^f) == x mod h, and gcd(x^(p^(f/l)) - x, h) = 1 for primes l | f
    Poly x(f, 0);
    if (f == 1) return true;
    x[1] = 1;
    Poly xq = x;
    for (int i = 0; i < f; ++i) xq = poly_powmod(xq, p, h, p);
    // xq = x^(p^f) mod h
    Poly diff = xq;
    diff[1] = ((diff[1] - 1) % p + p) % p;
    bool all0 = std::all_of(diff.begin(), diff.end(), [](int64_t c) { return c == 0; });
    if (!all0) return false;
    for (int64_t l : prime_factors(f)) {
        Poly xe = x;
        for (int i = 0; i < f / l; ++i) xe = poly_powmod(xe, p, h, p);
        Poly d = xe;
        d[1] = ((d[1] - 1) % p + p) % p;
        Poly g = poly_gcd(h, d, p);
        int dg = -1;
        for (int i = (int)g.size() - 1; i >= 0; --i)
            if (g[i] != 0) { dg = i; break; }
        if (dg != 0) return false;
    }
    return true;
}

} // namespace

ResidueField::ResidueField(int64_t p, int f) : p_(p), f_(f) {
    if (!is_prime_small(p) || p == 2) throw BadPrime("residue characteristic must be an odd prime");
    if (f < 1) throw Error("degree must be positive");
    q_ = 1;
    for (int i = 0; i < f; ++i) {
        q_ *= p;
        if (q_ > (int64_t)1 << 26) throw BudgetExceeded("residue field too large to tabulate");
    }
    // pick defining polynomial: smallest-code monic irreducible of degree f
    if (f == 1) {
        h_ = {0, 1};
    } else {
        for (int64_t code = 0;; ++code) {
            if (code >= q_) throw Error("no irreducible polynomial found");
            Poly h(f + 1, 0);
            int64_t c = code;
            for (int i = 0; i < f; ++i) { h[i] = c % p; c /= p; }
            h[f] = 1;
            if (is_irreducible(h, p)) { h_ = h; break; }
        }
    }
    // find generator of the multiplicative group: smallest code of full order
    auto factors = prime_factors(q_ - 1);
    gen_ = 0;
    for (int64_t cand = 2; cand < q_; ++cand) {
        bool ok = true;
        for (int64_t l : factors) {
            if (pow_nolut(cand, (q_ - 1) / l) == 1) { ok = false; break; }
        }
        if (ok) { gen_ = cand; break; }
    }
    if (gen_ == 0) throw Error("no multiplicative generator found");
    // build tables
    exp_.resize(q_ - 1);
    log_.assign(q_, -1);
    int64_t cur = 1;
    for (int64_t k = 0; k < q_ - 1; ++k) {
        exp_[k] = cur;
        log_[cur] = k;
        cur = mul_nolut(cur, gen_);
    }
    if (cur != 1) throw Error("generator order mismatch");
    // canonical nonsquare
    if (f == 1) {
        nonsq_ = 0;
        for (int64_t a = 2; a < p; ++a)
            if (chi(a) == -1) { nonsq_ = a; break; }
    } else {
        nonsq_ = gen_;
    }
}

int64_t ResidueField::add(int64_t a, int64_t b) const {
    int64_t out = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
        out += ((a % p_) + (b % p_)) % p_ * mult;
        a /= p_; b /= p_;
        mult *= p_;
    }
    return out;
}

int64_t ResidueField::neg(int64_t a) const {
    int64_t out = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
        out += (p_ - a % p_) % p_ * mult;
        a /= p_;
        mult *= p_;
    }
    return out;
}

int64_t ResidueField::sub(int64_t a, int64_t b) const { return add(a, neg(b)); }

int64_t ResidueField::mul_nolut(int64_t a, int64_t b) const {
    Poly pa(f_), pb(f_);
    for (int i = 0; i < f_; ++i) { pa[i] = a % p_; a /= p_; }
    for (int i = 0; i < f_; ++i) { pb[i] = b % p_; b /= p_; }
    Poly pr = poly_mulmod(pa, pb, h_, p_);
    int64_t out = 0, mult = 1;
    for (int i = 0; i < f_; ++i) { out += pr[i] * mult; mult *= p_; }
    return out;
}

int64_t ResidueField::pow_nolut(int64_t a, int64_t k) const {
    int64_t r = 1;
    while (k > 0) {
        if (k & 1) r = mul_nolut(r, a);
        a = mul_nolut(a, a);
        k >>= 1;
    }
    return r;
}

int64_t ResidueField::mul(int64_t a, int64_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

int64_t ResidueField::inv(int64_t a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in residue field");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

int64_t ResidueField::pow(int64_t a, int64_t k) const {
    if (a == 0) {
        if (k <= 0) throw DivisionByZero("0^k, k <= 0");
        return 0;
    }
    int64_t e = log_[a] % (q_ - 1) * (k % (q_ - 1)) % (q_ - 1);
    if (e < 0) e += q_ - 1;
    return exp_[e];
}

int64_t ResidueField::dlog(int64_t a) const {
    if (a == 0) throw ZeroInput("dlog of zero");
    return log_[a];
}

int64_t ResidueField::from_dlog(int64_t k) const {
    k %= (q_ - 1);
    if (k < 0) k += q_ - 1;
    return exp_[k];
}

int ResidueField::chi(int64_t a) const {
    if (a == 0) throw ZeroInput("quadratic character of zero");
    return (log_[a] % 2 == 0) ? 1 : -1;
}

int64_t ResidueField::sqrt(int64_t a) const {
    if (a == 0) return 0;
    if (chi(a) != 1) throw Error("sqrt of nonsquare in residue field");
    return exp_[log_[a] / 2];
}

int64_t ResidueField::eval_fp_poly(const std::vector<int64_t>& coeffs, int64_t at) const {
    int64_t acc = 0;
    for (int i = (int)coeffs.size() - 1; i >= 0; --i)
        acc = add(mul(acc, at), coeffs[i] % p_);
    return acc;
}

int64_t ResidueField::smallest_root(const std::vector<int64_t>& coeffs) const {
    for (int64_t c = 0; c < q_; ++c)
        if (eval_fp_poly(coeffs, c) == 0) return c;
    throw Error("polynomial has no root in residue field");
}

std::vector<int> ResidueField::digits(int64_t code) const {
    std::vector<int> d(f_);
    for (int i = 0; i < f_; ++i) { d[i] = (int)(code % p_); code /= p_; }
    return d;
}

int64_t ResidueField::from_digits(const std::vector<int>& d) const {
    int64_t out = 0, mult = 1;
    for (int i = 0; i < f_; ++i) { out += d[i] % p_ * mult; mult *= p_; }
    return out;
}

} // namespace orthinv
