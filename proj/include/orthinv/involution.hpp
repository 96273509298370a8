#pragma once

// Orthogonal involutions of GL_n, their orbit labels under conjugation, the
// census of torus orbits on which the embedded E^x acts by inversion, and
// the similitude indices attached to each census entry.

#include <vector>

#include "orthinv/embedding.hpp"
#include "orthinv/quadform.hpp"

namespace orthinv {

// theta_nu determined by nu up to center; canonical representative scales
// the first nonzero entry (row-major) to one
struct Involution {
    Mat nu;
};

Involution make_involution(const Mat& nu);
bool involution_equal(const Involution& a, const Involution& b);

struct GOrbitLabel {
    enum Tag { SplitJ, NonQuasiSplit, QuasiSplitDisc } tag = SplitJ;
    int disc_class = 0;  // meaningful for QuasiSplitDisc
    bool operator==(const GOrbitLabel&) const = default;
};

std::string label_name(const GOrbitLabel& l);

struct TOrbitRep {
    FieldElt x;           // coset representative in E^x/((E^x)^2 F^x)
    Mat nu;               // J * matrix_of(x)
    Involution theta;
    GOrbitLabel label;
    FormInvariants inv;
    int mT = 0;
    int mZ = 0;
};

struct EContext {
    const Tower* tw = nullptr;
    int e_level = 0;
    int f_level = 0;
    int n = 0;
    int y = 0;
    Embedding emb;                    // integral J-symmetric embedding of E
    std::vector<int> killed_classes;  // base square classes that become squares in E
    FormInvariants invJ;              // invariants of the anti-diagonal form
    std::vector<TOrbitRep> census;    // one entry per split torus orbit
};

EContext make_context(const Tower& tw, int e_level = -1, int f_level = 0);

// conjugation-orbit label of the involution attached to nu
GOrbitLabel g_orbit_label(const EContext& ctx, const Mat& nu);

// similitude ratios modulo squares for a census involution;
// UnsupportedOrbit outside the computed cases
std::vector<int> similitude_image(const EContext& ctx, const GOrbitLabel& label,
                                  const Mat& nu);

struct MIndices {
    int mT = 0;
    int mZ = 0;
};
MIndices m_indices(const EContext& ctx, const TOrbitRep& rep);

// index for the compact-mod-center subgroup attached to an intermediate
// field over which E is unramified; defined when y = 2
int mk0_index(const EContext& ctx, int e0_level);

// theta acts by inversion on the embedded torus
bool theta_split_certificate(const EContext& ctx, const TOrbitRep& rep, int samples,
                             uint64_t seed);

} // namespace orthinv
