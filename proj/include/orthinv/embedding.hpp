#pragma once

// F-linear embeddings of a tower field E into M_n(F), F a prefix field,
// carried by an explicit basis.  The constructions below produce bases whose
// regular representation is symmetric about the anti-diagonal (J-symmetric)
// and integral.

#include <vector>

#include "orthinv/matrix.hpp"
#include "orthinv/quadform.hpp"
#include "orthinv/tower.hpp"

namespace orthinv {

struct Embedding {
    const Tower* tw = nullptr;
    int e_level = 0;               // the embedded field E
    int f_level = 0;               // the base field F
    int n = 0;                     // relative degree
    std::vector<FieldElt> basis;   // F-basis of E
    bool j_symmetric = false;

    // regular representation of x in this basis, an n x n matrix over F
    Mat matrix_of(const FieldElt& x) const;
    // coordinates of x with respect to the basis
    std::vector<FieldElt> coords(const FieldElt& x) const;
    FieldElt from_coords(const std::vector<FieldElt>& c) const;

    Mat coord_mat;                 // columns are canonical coordinates of basis elements
    Mat coord_inv;
};

// embedding attached to an arbitrary basis (validates invertibility)
Embedding make_embedding(const Tower& tw, int e_level, int f_level,
                         std::vector<FieldElt> basis, bool j_symmetric_hint = false);

// power basis 1, omega, ..., omega^{n-1} for omega with omega^n = tau in F;
// the image of omega is the companion matrix of x^n - tau.
// Throws Reducible when x^n - tau is not irreducible over F.
Embedding companion_embedding(const Tower& tw, int e_level, int f_level,
                              const FieldElt& omega, const FieldElt& tau);

// E/F with the same ramification index (relative extension unramified):
// power basis of the Teichmueller generator, corrected by a congruence
// taking the scaled trace form to the anti-diagonal form
Embedding unramified_jsym_embedding(const Tower& tw, int e_level, int f_level);

// tensor-product basis alpha_j beta_k (outer index slow)
Embedding composite_embedding(const Embedding& outer, const Embedding& inner);

// per-step composition: companion for ramified steps, trace form for
// unramified steps; the result is integral and J-symmetric
Embedding integral_jsym_embedding(const Tower& tw, int e_level, int f_level);

// flattened uniformizer-outer basis pi^j b_k realizing the e x f block
// structure of the parahoric; integral and J-symmetric
Embedding standard_block_embedding(const Tower& tw, int e_level, int f_level);

struct NuSymmetry {
    bool symmetric = false;
    FieldElt witness;              // x with nu = J * matrix_of(x), when symmetric
};

// decide whether the embedding is nu-symmetric, i.e. J * nu lies in the
// image algebra; produces the witness when it does
NuSymmetry nu_symmetric_test(const Embedding& emb, const Mat& nu);

// certificate checks used by tests and the acceptance suite
bool verify_j_symmetry(const Embedding& emb, int samples, uint64_t seed);
bool verify_multiplicative(const Embedding& emb, int samples, uint64_t seed);
bool verify_integral_on_units(const Embedding& emb, int samples, uint64_t seed);
bool verify_det_is_norm(const Embedding& emb, int samples, uint64_t seed);

} // namespace orthinv
