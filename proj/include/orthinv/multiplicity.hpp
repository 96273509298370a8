#pragma once

// Dimension bookkeeping for spaces of invariant linear forms: per-orbit
// dimensions from the split torus census, the pure-inner-form tally over
// congruence classes of symmetric matrices, and the special-orthogonal tally.

#include <string>
#include <vector>

#include "orthinv/involution.hpp"

namespace orthinv {

struct CharacterFlag {
    int phi_minus_one = 1;  // +1 or -1
};

// sum of the torus indices over census entries in the orbit; zero when the
// character is nontrivial at -1
int dim_hom(const EContext& ctx, const GOrbitLabel& label, CharacterFlag flag);

bool distinguished(const EContext& ctx, const GOrbitLabel& label, CharacterFlag flag);

struct OrbitInventoryEntry {
    GOrbitLabel label;
    int weight = 0;  // congruence classes of symmetric matrices above this orbit
};

// involution orbits with their symmetric-matrix-class weights:
// odd n gives two orbits of weight four; even n > 2 gives 1/1/2/2/2;
// n = 2 gives 1/2/2/2
std::vector<OrbitInventoryEntry> g_orbit_inventory(const EContext& ctx);

// weighted sum over all congruence classes; 4 when the flag is trivial
int pure_inner_sum(const EContext& ctx, CharacterFlag flag);

// sum over the special-orthogonal classes; equals the y invariant
int special_orthogonal_sum(const EContext& ctx, CharacterFlag flag);

struct OrbitReportEntry {
    GOrbitLabel label;
    int weight = 0;
    int dim = 0;
    std::vector<int> census_indices;  // entries of the census in this orbit
};

struct DistinctionReport {
    int64_t p = 0;
    int n = 0, e = 0, f = 0, y = 0;
    int phi_minus_one = 1;
    std::vector<OrbitReportEntry> orbits;
    int sum_full = 0;     // pure inner form tally
    int sum_special = 0;  // special orthogonal tally
    bool consistent = false;
};

DistinctionReport build_distinction_report(const EContext& ctx, CharacterFlag flag);

} // namespace orthinv
