#pragma once

// Brute-force verification over GL_n(F_q): congruence-class counts,
// involution orbit counts, split torus orbits, and similitude factorization,
// all by exhaustive enumeration.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "orthinv/ffmat.hpp"
#include "orthinv/residue_field.hpp"

namespace orthinv {

struct FFContext {
    int64_t q = 0;
    int n = 0;
    int64_t budget = 0;
    std::unique_ptr<ResidueField> Fq;
    std::unique_ptr<ResidueField> Fqn;
    int64_t root = 0;                   // image of Fq's generator polynomial root
    std::vector<int64_t> embed_table;   // Fq code -> Fqn code
    std::vector<int64_t> project_table; // Fqn code -> Fq code or -1

    FFContext(int64_t q, int n, int64_t budget = 0);
    int64_t embed(int64_t c) const { return embed_table[(size_t)c]; }
    int64_t project(int64_t c) const;
    int64_t trace_to_base(int64_t x) const;   // as an Fq code
    int64_t norm_to_base(int64_t x) const;    // as an Fq code
};

int64_t default_ff_budget();

struct FFCensus {
    int64_t total_invertible = 0;
    int num_classes = 0;
    std::array<int64_t, 2> class_sizes = {0, 0};  // by discriminant character +1 / -1
    std::array<FFMat, 2> reps;
};

// enumerate invertible symmetric matrices and bucket them by discriminant
// (the Hasse invariant is trivial over a finite field)
FFCensus ff_congruence_census(const FFContext& ctx);

// number of conjugation orbits of involutions: classes merge exactly when a
// scalar twist carries one onto the other
int ff_involution_orbits(const FFContext& ctx);

struct FFEmbedding {
    int n = 0;
    std::vector<int64_t> basis;        // elements of F_{q^n}
    FFMat coord_inv;                   // over F_p, for coordinate extraction
    FFMat matrix_of(const FFContext& ctx, int64_t x) const;
};

// J-symmetric embedding of F_{q^n} into M_n(F_q), built from the scaled
// trace form on a power basis followed by a congruence onto the
// anti-diagonal form
FFEmbedding ff_jsym_embedding(const FFContext& ctx);

struct FFSplitOrbits {
    int y = 0;                              // number of split torus orbits
    std::vector<int64_t> coset_reps;        // one element of T per orbit
    std::vector<int> orbit_disc_chi;        // discriminant character per orbit
    bool one_per_class = false;             // each congruence class of
                                            // involutions met exactly once
    bool norms_surjective = false;
};

FFSplitOrbits ff_split_t_orbits(const FFContext& ctx, const FFEmbedding& emb);

struct FFSimilitude {
    int mT = 0;
    int mZ = 0;
    bool factorization_ok = false;          // every similitude is a torus
                                            // similitude times an isometry
                                            // times a scalar
    std::vector<int64_t> mu_image;          // similitude ratios
    std::vector<int64_t> mu_torus;          // ratios from the torus
    bool torus_ratios_expected = false;     // (F_{q^n}^x)^2 cap F_q^x
};

FFSimilitude ff_similitude_check(const FFContext& ctx, const FFEmbedding& emb, const FFMat& nu);

} // namespace orthinv
