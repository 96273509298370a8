#pragma once

// Hilbert symbols, diagonalization, discriminant/Hasse classification and
// explicit congruence transformations for symmetric matrices over tower
// fields with odd residue characteristic.

#include <cstdint>
#include <vector>

#include "orthinv/matrix.hpp"
#include "orthinv/residue_field.hpp"
#include "orthinv/tower.hpp"

namespace orthinv {

// Hilbert symbol over any level of the tower (odd residue characteristic):
// for a = pi^A u, b = pi^B v this is chi((-1)^(A B) ubar^B vbar^A).
int hilbert_symbol(const FieldElt& a, const FieldElt& b);

struct FormInvariants {
    int n = 0;
    int disc_class = 0;    // square class of det
    int disc0_class = 0;   // square class of (-1)^(n(n-1)/2) det
    int hasse = 1;         // product of Hilbert(a_i, a_j) over i <= j
    int hasse0 = 1;        // product over i < j
    bool operator==(const FormInvariants&) const = default;
};

struct Diagonalization {
    std::vector<FieldElt> diag;
    Mat g;                 // transpose(g) * S * g is the diagonal
};

// symmetric reduction; pivots on a minimal-valuation diagonal entry, adding a
// row/column first whenever every remaining diagonal valuation exceeds some
// off-diagonal one
Diagonalization diagonalize(const Mat& S);

FormInvariants form_invariants(const Mat& S);
FormInvariants invariants_of_diagonal(const Tower& tw, const std::vector<FieldElt>& d);

bool is_similar(const Mat& S1, const Mat& S2);

struct CensusEntry {
    std::vector<int> diag_classes;   // indices into the square-class reps
    Mat rep;
    FormInvariants inv;
};

// all similarity classes of invertible symmetric n x n matrices:
// 8 for n > 2, 7 for n = 2; representatives diagonal over the class reps,
// lexicographically minimal per invariant pair
std::vector<CensusEntry> similarity_class_census(const Tower& tw, int level, int n);

// explicit g with transpose(g) * S * g == T; requires is_similar(S, T)
Mat congruence_transform(const Mat& S, const Mat& T, uint64_t seed = 0,
                         int64_t budget = 200000);

// finite-field congruence: g with g^t S g = T over the residue field,
// entries as field codes; throws NotSimilar when discriminants differ
std::vector<std::vector<int64_t>> ff_congruence(const ResidueField& R,
                                                std::vector<std::vector<int64_t>> S,
                                                std::vector<std::vector<int64_t>> T);

// diagonalize a symmetric matrix over a residue field; returns (diag, g)
std::pair<std::vector<int64_t>, std::vector<std::vector<int64_t>>>
ff_diagonalize(const ResidueField& R, std::vector<std::vector<int64_t>> S);

} // namespace orthinv
