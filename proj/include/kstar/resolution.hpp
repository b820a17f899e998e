#pragma once

#include <map>
#include <string>
#include <vector>

#include "kstar/fixed_points.hpp"
#include "kstar/kstar_data.hpp"

namespace kstar {

// Provenance of a column in resolved defining data.
struct ColumnOrigin {
  enum class Kind { original, exceptional } kind{Kind::original};
  // original: (arm, index) position in the input (1-based index; arm = -1 with
  // index +1/-1 for an original v+/v- column)
  int arm{0};
  int index{0};
  // exceptional: id of the input fixed point the curve lies over, e.g.
  // "x-", "x+", "x_2^-", "tau_{0,1}"
  std::string over;
};

struct ResolutionOutput {
  DefiningP resolved;
  // one entry per arm column of `resolved` (arm order, then slope order),
  // then one entry for v+ and v- if present
  std::vector<ColumnOrigin> column_map;
  // singular-point id -> exceptional columns as (arm, 1-based index) in
  // `resolved`; (-1, +1/-1) denotes the v+/v- column
  std::map<std::string, std::vector<std::pair<int, int>>> fibers;
};

ResolutionOutput canonical_resolution(const DefiningP& P);
ResolutionOutput minimal_resolution(const DefiningP& P);

// Resolves only the sink chart of a quasismooth elliptic x^- by subdividing
// cone((-l_{i0 n}, d_{i0 n}), (l_{i1 n}, d_{i1 n})) along its Hilbert basis.
ResolutionOutput resolve_sink_chart(const DefiningP& P);

// Continued-fraction invariant of the point x_i^+ on D^+: 0 when smooth, else
// 1/CF(-E_1^2, ..., -E_q^2) over the exceptional chain, outermost first.
Rat c_plus(const DefiningP& P, int i);

// Continued-fraction invariant of a simple elliptic x^-: 0 when smooth, else
// 1/CF(-E_q^2, ..., -E_1^2) over the chain, sink-most curve first.
Rat c_minus(const DefiningP& P);

// Inverse of self_intersections for smooth surfaces with D^+, adapted to the
// source: rebuilds all (l, d) entries from the arm self-intersection lists and
// (D+)^2. has_vminus is passed through to the output.
DefiningP reconstruct_from_intersections(
    const std::vector<std::vector<Rat>>& arm_selfints, const Rat& dplus_sq,
    bool has_vminus);

}  // namespace kstar
