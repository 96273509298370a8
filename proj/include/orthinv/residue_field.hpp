#pragma once

// Finite field F_{p^f} with log/antilog tables.  Elements are encoded as
// integers in [0, p^f): the code of c_0 + c_1 x + ... + c_{f-1} x^{f-1} is
// sum c_i p^i, where x is a root of the defining polynomial.

#include <cstdint>
#include <vector>

#include "orthinv/errors.hpp"

namespace orthinv {

class ResidueField {
public:
    // Defining polynomial: the irreducible monic of degree f over F_p whose
    // code (constant coefficient first) is smallest.  Deterministic.
    ResidueField(int64_t p, int f);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    int64_t q() const { return q_; }
    int64_t generator() const { return gen_; }
    const std::vector<int64_t>& defining_poly() const { return h_; }

    int64_t add(int64_t a, int64_t b) const;
    int64_t sub(int64_t a, int64_t b) const;
    int64_t neg(int64_t a) const;
    int64_t mul(int64_t a, int64_t b) const;
    int64_t inv(int64_t a) const;
    int64_t pow(int64_t a, int64_t k) const;

    // discrete log base generator(); a != 0
    int64_t dlog(int64_t a) const;
    int64_t from_dlog(int64_t k) const;

    // quadratic character: +1 for nonzero squares, -1 for nonsquares
    int chi(int64_t a) const;
    bool is_square(int64_t a) const { return a == 0 || chi(a) == 1; }
    int64_t sqrt(int64_t a) const;

    // smallest code that generates the multiplicative group
    int64_t canonical_generator() const { return gen_; }
    // canonical nonsquare: for f=1 the smallest positive nonresidue mod p,
    // otherwise the canonical generator
    int64_t canonical_nonsquare() const { return nonsq_; }

    // evaluate a polynomial with F_p coefficients (codes < p) at a point
    int64_t eval_fp_poly(const std::vector<int64_t>& coeffs, int64_t at) const;
    // smallest root in this field of a monic F_p-polynomial; throws if none
    int64_t smallest_root(const std::vector<int64_t>& coeffs) const;

    // code <-> digit vector (base p, length f)
    std::vector<int> digits(int64_t code) const;
    int64_t from_digits(const std::vector<int>& d) const;

private:
    int64_t p_;
    int f_;
    int64_t q_;
    std::vector<int64_t> h_;       // monic defining polynomial, h_[i] coeff of x^i
    std::vector<int64_t> exp_;     // exp_[k] = gen^k, size q-1
    std::vector<int64_t> log_;     // log_[code], log_[0] = -1
    int64_t gen_;
    int64_t nonsq_;

    int64_t mul_nolut(int64_t a, int64_t b) const;  // polynomial multiplication mod h_
    int64_t pow_nolut(int64_t a, int64_t k) const;
};

// shared small helpers
bool is_prime_small(int64_t n);
std::vector<int64_t> prime_factors(int64_t n);

} // namespace orthinv
