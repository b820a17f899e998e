#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kstar/exact_math.hpp"
#include "kstar/fixed_points.hpp"
#include "kstar/kstar_data.hpp"

namespace kstar {

struct NotComplete : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FewerThanTwo : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoEllipticSink : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSmoothSink : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToricInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Toric surfaces: Demazure roots of complete fans.
// ---------------------------------------------------------------------------

// Complete fan in Z^2, primitive generators in counterclockwise order.
struct Fan2D {
  std::vector<LatticeVec2> generators;
};

bool is_complete(const Fan2D& fan);

// For each generator v_i, all integral u with <u,v_i> = -1 and <u,v_j> >= 0
// for j != i, found as the lattice points of the clipped line segment
// <u,v_i> = -1. Throws NotComplete.
std::map<int, std::vector<LatticeVec2>> toric_demazure_roots(const Fan2D& fan);

// Same computation one dimension up: lattice points of the clipped plane
// <u,v_i> = -1. The generators must span a pointed, complete configuration so
// that every clipped region is bounded; otherwise NotComplete.
using Vec3 = std::array<Int, 3>;
std::map<int, std::vector<Vec3>> demazure_roots_3d(
    const std::vector<Vec3>& generators);

enum class TwoGenCase { orthogonal, hirzebruch };

struct TwoGenReport {
  TwoGenCase kind;
  // Case orthogonal: the pair (pair_first, pair_second) maps to (1,0), (0,1)
  // and xi_sigma is the minimal slope among the remaining generators
  // (infinite slopes of vertical rays are skipped).
  // Case hirzebruch: the pair maps to (1,0), (b-1,b).
  int pair_first = -1;
  int pair_second = -1;
  std::optional<Rat> xi_sigma;  // case orthogonal
  Int b{0};                     // case hirzebruch
  std::vector<LatticeVec2> normalized_generators;
  std::map<int, std::vector<LatticeVec2>> roots;  // in original coordinates
  Int total_roots{0};
};

// Requires roots at >= 2 generators (else FewerThanTwo).
TwoGenReport classify_two_generator_fans(const Fan2D& fan);

// ---------------------------------------------------------------------------
// P-roots.
// ---------------------------------------------------------------------------

struct PRoot {
  enum class Kind { horizontal, vertical };
  Kind kind;
  Side side;  // horizontal: which elliptic point; vertical: which curve D^±
  int i0 = -1;  // horizontal labels; -1 for vertical roots
  int i1 = -1;
  std::vector<Int> u;  // coordinates u_1, ..., u_r, u_{r+1}
  Int parameter{0};    // gamma (horizontal), alpha (essential vertical)
  // Every label (a,b) at which u satisfies the horizontal root conditions.
  std::vector<std::pair<int, int>> tags;
  bool operator==(const PRoot& o) const { return u == o.u && kind == o.kind; }
};

// <u, v_{ij}> = u_i l_{ij} + u_{r+1} d_{ij} with u_0 := -u_1 - ... - u_r.
Int pairing(const DefiningP& P, const std::vector<Int>& u, int i, int j);

// Literal test of the defining conditions (side plus via negate_last_row).
bool is_horizontal_root(const DefiningP& P, Side side, int i0, int i1,
                        const std::vector<Int>& u);
bool is_vertical_root(const DefiningP& P, Side side, const std::vector<Int>& u);

struct RootIntervals {
  std::vector<Rat> xi;   // per arm
  std::vector<Rat> eta;  // per arm
  // Closed interval [max(0, xi_i : i != iota), eta_kappa]; nullopt if empty.
  std::optional<std::pair<Rat, Rat>> delta(int iota, int kappa) const;
};

// Requires an elliptic sink (else NoEllipticSink).
RootIntervals intervals(const DefiningP& P);

// The interval parameterization candidate u(i0,i1,gamma); rational in general.
std::vector<Rat> u_gamma(const DefiningP& P, int i0, int i1, const Int& gamma);

struct HorizontalEnumeration {
  std::vector<PRoot> roots;
  std::vector<Int> discarded;  // admissible gamma whose candidate failed
};

// All horizontal P-roots at (x^side, i0, i1). Requires the side elliptic.
HorizontalEnumeration horizontal_p_roots_detailed(const DefiningP& P, Side side,
                                                  int i0, int i1);
std::vector<PRoot> horizontal_p_roots(const DefiningP& P, Side side, int i0,
                                      int i1);

struct EpsilonLadder {
  Int epsilon{-1};
  std::vector<PRoot> roots;  // u_0, ..., u_epsilon (empty if epsilon < 0)
};

// Requires x^- smooth (else NotSmoothSink) and l_{i n_i} = 1 for i != i0,i1
// (else InvalidInput).
EpsilonLadder epsilon_ladder(const DefiningP& P, int i0, int i1);

// All vertical P-roots at D^side. Requires the curve (else NoParabolicCurve).
std::vector<PRoot> vertical_p_roots(const DefiningP& P, Side side);

// Vertical P-roots u at D^+ with 0 <= <u,v_{i1}> < l_{i1} for i != i0,i1,
// parameterized by the integers of Gamma(i0,i1).
std::vector<PRoot> essential_vertical_roots(const DefiningP& P, int i0, int i1);

// Endpoints of Gamma(i0,i1); nullopt if empty.
std::optional<std::pair<Rat, Rat>> gamma_interval(const DefiningP& P, int i0,
                                                  int i1);

// Independent oracle: exhaustive scan of the coordinate box |u_i| <= bound,
// 1 <= |u_{r+1}| <= bound (horizontal) or u_{r+1} = ±1 (vertical), checking
// the defining conditions literally.
std::vector<PRoot> brute_force_roots(const DefiningP& P, Side side,
                                     PRoot::Kind kind, const Int& box_bound);

// A box bound sufficient for brute_force_roots to find every root.
Int brute_force_bound(const DefiningP& P, Side side);

// Demazure P-root extension (u, i0, i1, C) with C^+ = (1,...,1) resp.
// C^- = (n_0,...,n_r): checks the full inequality list.
bool extends_to_demazure(const DefiningP& P, const PRoot& root);

// Count formulas, cross-checked against the enumerations.
Rat horizontal_root_count(const DefiningP& P);  // at (x^-,0,1), P normalized
bool has_root_at_10(const DefiningP& P);        // at (x^-,1,0), P normalized
Rat vertical_root_count(const DefiningP& P);    // essential at D^+

struct GeneratingRootSet {
  enum class Kind { horizontal, vertical, none };
  Kind kind = Kind::none;
  Side side = Side::minus;  // side of the elliptic point resp. curve in P
  bool negated = false;     // whether P was conjugated by negate_last_row
  DefiningP prepared;       // sink-adapted, normalized matrix used
  std::vector<int> permutation;  // arm permutation applied by normalize
  std::vector<PRoot> roots;      // expressed for `prepared`
};

// Requires P valid, irredundant, non-toric (else ToricInput).
GeneratingRootSet generating_root_set(const DefiningP& P);

}  // namespace kstar
