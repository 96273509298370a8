#pragma once

// Exact arithmetic in tame extension towers of Q_p, p odd.
//
// A tower is flattened on construction: after step i the field is
// E_i = L_i[pi_i] where L_i is the unramified subfield Q_p[beta_i] of degree
// f_i (beta_i a root of the canonical lift of the residue polynomial) and
// the uniformizer satisfies pi_i^{e_i} = zeta_i^{m_i} * p, with zeta_i the
// Teichmueller lift of the canonical residue-field generator.  Nonzero
// elements are kept in valuation-normal form
//     x = pi^v * sum_{a<e, b<f} c_{ab} beta^b pi^a,
// with the unit part coefficients tracked modulo p^cprec.

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "orthinv/errors.hpp"
#include "orthinv/residue_field.hpp"

namespace orthinv {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<long long>;

struct UnramStep { int64_t f = 1; };
struct RamStep { int64_t e = 1; int64_t twist = 0; };
using TowerStep = std::variant<UnramStep, RamStep>;

struct TowerSpec {
    int64_t p = 3;
    std::vector<TowerStep> steps;
    int precision = 32;
};

class Tower;

struct FieldElt {
    const Tower* tw = nullptr;
    int level = 0;
    bool zero = true;
    int64_t piv = 0;          // valuation in units of 1/e(level)
    int cprec = 0;            // coefficient precision, p-adic digits
    std::vector<BigInt> c;    // unit part, c[a*f + b] = coeff of beta^b pi^a

    bool is_zero() const { return zero; }
    Rat val() const;          // normalized so val(p) = 1; throws on zero
    FieldElt operator-() const;
};

FieldElt operator+(const FieldElt& a, const FieldElt& b);
FieldElt operator-(const FieldElt& a, const FieldElt& b);
FieldElt operator*(const FieldElt& a, const FieldElt& b);
FieldElt operator/(const FieldElt& a, const FieldElt& b);
bool operator==(const FieldElt& a, const FieldElt& b);
bool operator!=(const FieldElt& a, const FieldElt& b);

class SquareClassGroup;

class Tower {
public:
    explicit Tower(TowerSpec spec);
    Tower(const Tower&) = delete;
    Tower& operator=(const Tower&) = delete;

    const TowerSpec& spec() const { return spec_; }
    int64_t p() const { return spec_.p; }
    int precision() const { return spec_.precision; }
    int num_levels() const { return (int)levels_.size(); }  // includes level 0 = Q_p
    int top() const { return num_levels() - 1; }

    int64_t e(int level) const { return lv(level).e; }
    int64_t f(int level) const { return lv(level).f; }
    int64_t degree(int level) const { return lv(level).e * lv(level).f; }
    int64_t rel_degree(int level, int sub) const;
    const ResidueField& residue_field(int level) const { return *lv(level).res; }
    const std::vector<int64_t>& residue_poly(int level) const { return lv(level).hbar; }
    // exponent m in pi^e = zeta^m * p
    int64_t uniformizer_twist(int level) const { return lv(level).m; }
    // data of the step that produced `level` from its predecessor
    bool step_is_unram(int level) const { return lv(level).step_unram; }
    int64_t step_ram_degree(int level) const { return lv(level).step_e; }
    int64_t step_ram_twist(int level) const { return lv(level).step_twist; }

    // element constructors
    FieldElt zero(int level) const;
    FieldElt one(int level) const { return from_int(level, 1); }
    FieldElt from_int(int level, int64_t v) const;
    FieldElt from_bigint(int level, const BigInt& v) const;
    FieldElt pi(int level) const;
    FieldElt zeta(int level) const;              // Teichmueller generator
    FieldElt zeta_pow(int level, int64_t k) const;
    FieldElt nonresidue_unit(int level) const;   // canonical nonsquare unit

    // arithmetic (also available through the operators above)
    FieldElt add(const FieldElt& a, const FieldElt& b) const;
    FieldElt neg(const FieldElt& a) const;
    FieldElt mul(const FieldElt& a, const FieldElt& b) const;
    FieldElt inv(const FieldElt& a) const;
    FieldElt div(const FieldElt& a, const FieldElt& b) const { return mul(a, inv(b)); }
    FieldElt pow(const FieldElt& a, int64_t k) const;
    bool equal(const FieldElt& a, const FieldElt& b) const;

    Rat val(const FieldElt& x) const;
    int64_t pival(const FieldElt& x) const;      // valuation in 1/e units
    bool is_integral(const FieldElt& x) const { return x.zero || x.piv >= 0; }
    bool is_unit(const FieldElt& x) const { return !x.zero && x.piv == 0; }
    int64_t residue(const FieldElt& x) const;    // residue code of the unit part

    bool is_square(const FieldElt& x) const;
    FieldElt sqrt(const FieldElt& x) const;
    int square_class(const FieldElt& x) const;   // 0:1, 1:u, 2:pi, 3:u*pi
    FieldElt square_class_rep(int level, int idx) const;
    SquareClassGroup square_class_group(int level) const;

    // map an element of a prefix field into a later level
    FieldElt embed(const FieldElt& x, int to_level) const;

    // norm and trace to a prefix field, via the regular representation
    std::pair<FieldElt, FieldElt> norm_trace(const FieldElt& x, int sub_level) const;
    FieldElt norm(const FieldElt& x, int sub_level) const { return norm_trace(x, sub_level).first; }
    FieldElt trace(const FieldElt& x, int sub_level) const { return norm_trace(x, sub_level).second; }

    // [(E^x)^2 cap F^x : (F^x)^2], F the prefix at sub_level
    int y_invariant(int level, int sub_level) const;
    // image of the norm map in the square classes of the prefix field
    std::vector<int> norm_image_classes(int level, int sub_level) const;
    // square classes of the prefix that become squares upstairs
    std::vector<int> square_classes_killed(int level, int sub_level) const;

    // canonical relative basis of `level` over `sub_level`:
    // beta^b pi^a, a < e_rel (slow index), b < f_rel
    std::vector<FieldElt> relative_basis(int level, int sub_level) const;
    // coordinates of x with respect to relative_basis(level, sub)
    std::vector<FieldElt> relative_coords(const FieldElt& x, int sub_level) const;

    // random unit / element helpers (deterministic given the state argument)
    FieldElt random_unit(int level, uint64_t& state) const;
    FieldElt random_elt(int level, uint64_t& state, int val_lo = -2, int val_hi = 2) const;

private:
    struct Level {
        int64_t e = 1, f = 1;
        int64_t m = 0;                         // pi^e = zeta^m * p
        std::vector<int64_t> hbar;             // residue polynomial (codes < p)
        std::unique_ptr<ResidueField> res;
        std::vector<BigInt> H;                 // lift of hbar, coeff of beta^i, i <= f
        FieldElt zeta;                         // Teichmueller generator
        FieldElt zeta_m;                       // zeta^m
        FieldElt zeta_m_inv;
        FieldElt nonsq;                        // canonical nonsquare unit
        // step data mapping the previous level in
        bool step_unram = false;
        int64_t step_e = 1, step_twist = 0;
        FieldElt beta_prev_img;                // image of previous beta (unram steps)
        int64_t zeta_prev_dlog = 1;            // zeta_{i-1} = zeta_i^{t}
    };

    TowerSpec spec_;
    std::vector<Level> levels_;
    std::vector<BigInt> ppow_;                 // p^0 .. p^N

    // lazily built inverse coordinate matrices for relative_coords,
    // keyed by (level, sub); stored flat as level-0 elements
    struct CoordCache {
        bool ready = false;
        int n = 0;
        std::vector<FieldElt> inv;             // n*n over Q_p, row major
    };
    mutable std::vector<std::vector<CoordCache>> coords_;

    const Level& lv(int level) const {
        if (level < 0 || level >= (int)levels_.size()) throw NotSubfield("no such tower level");
        return levels_[level];
    }

    const BigInt& pp(int k) const { return ppow_[k]; }
    int prec_floor() const { return std::max(4, spec_.precision / 2); }

    // unit-part helpers; grids are e*f vectors of coefficients mod p^cprec
    void grid_mul(int level, const std::vector<BigInt>& A, const std::vector<BigInt>& B,
                  std::vector<BigInt>& out, int cprec) const;
    void grid_reduce(std::vector<BigInt>& A, int cprec) const;
    FieldElt make(int level, int64_t piv, std::vector<BigInt> grid, int cprec) const;
    FieldElt normalize(FieldElt x) const;
    FieldElt unit_inv(const FieldElt& x) const;
    FieldElt apply_step(const FieldElt& x, int to_level) const;
    std::vector<FieldElt> to_base_coords(const FieldElt& x) const;  // over Q_p
    void build_coord_cache(int level, int sub) const;
    FieldElt teichmueller(int level, int64_t residue_code) const;
    int64_t valp_coeff(const BigInt& c, int cprec) const;

    friend struct FieldElt;
};

// Canonical coset representatives of F^x modulo squares: {1, u, pi, u*pi}.
class SquareClassGroup {
public:
    SquareClassGroup(const Tower* tw, int level);
    const FieldElt& rep(int idx) const { return reps_[idx]; }
    int size() const { return 4; }
    int class_of(const FieldElt& x) const { return tw_->square_class(x); }
    static int mul(int i, int j) { return i ^ j; }
    int level() const { return level_; }

private:
    const Tower* tw_;
    int level_;
    std::vector<FieldElt> reps_;
};

} // namespace orthinv
