#pragma once

#include <map>
#include <optional>
#include <utility>

#include "kstar/kstar_data.hpp"

namespace kstar {

struct NotQuasismooth : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAdapted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoParabolicCurve : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSmooth : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSimpleElliptic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An invariant curve: an arm curve D_ij (1-based j) or a parabolic curve D+/-.
struct Curve {
  enum class Kind { arm, plus, minus } kind{Kind::arm};
  int i{0};
  int j{0};  // 1-based within the arm
  static Curve arm(int i, int j) { return {Kind::arm, i, j}; }
  static Curve plus() { return {Kind::plus, 0, 0}; }
  static Curve minus() { return {Kind::minus, 0, 0}; }
};

struct IntersectionTable {
  // self[(i,j)] = D_ij^2 with 1-based j
  std::map<std::pair<int, int>, Rat> self;
  std::optional<Rat> dplus_sq;   // (D+)^2 when the curve exists
  std::optional<Rat> dminus_sq;  // (D-)^2 when the curve exists
};

IntersectionTable self_intersections(const DefiningP& P);

// D_{in_i}.D_{kn_k} (sink) resp. D_{i1}.D_{k1} (source) for i != k.
std::map<std::pair<int, int>, Rat> mutual_intersections(const DefiningP& P,
                                                        Side side);

bool is_contractible(const DefiningP& P, const Curve& c);

// Interval data of the sink-side root bounds:
// xi_i = 0 if n_i = 1, else 1/(l_{in_i}(m_{in_i-1} - m_{in_i}));
// eta_k = -1/(l_{kn_k} m^-).
Rat xi(const DefiningP& P, int i);
Rat eta(const DefiningP& P, int k);

struct EllipticReport {
  bool exists{false};
  bool quasismooth{false};
  bool smooth{false};
  std::optional<std::pair<int, int>> leading_indices;
  bool simple{false};
  std::optional<int> exceptional_index;
};

struct FixedPointReport {
  struct Parabolic {
    bool exists{false};
    std::vector<bool> x_smooth;  // x_i^+/- smooth flags; quasismooth always
  };
  Parabolic source, sink;
  // hyperbolic_smooth[i][j-1] for the point D_ij cap D_ij+1, j = 1..n_i-1
  std::vector<std::vector<bool>> hyperbolic_smooth;
  EllipticReport elliptic_plus, elliptic_minus;

  bool all_smooth() const;
};

FixedPointReport fixed_point_report(const DefiningP& P);

// Leading indices for the elliptic point on the given side: the (at most two)
// arms whose relevant end has l > 1, completed by smallest indices.
std::pair<int, int> leading_indices(const DefiningP& P, Side side);

struct SimpleEllipticResult {
  bool simple{false};
  std::optional<int> exceptional_index;
  // witness linear form (u_1, ..., u_r, u_{r+1}) when found by the direct route
  std::optional<std::vector<Int>> witness;
};

// Decides simplicity via the witness search and the minimal-resolution fiber,
// asserting agreement. Throws NotQuasismooth if the point is not quasismooth.
SimpleEllipticResult is_simple_elliptic(const DefiningP& P, Side side);

// Reorders the arms of a sink-adapted P so that end-l's are descending, with
// ties among n_i >= 2 arms broken by increasing m_{in_i-1} - m_{in_i}; stable.
std::pair<DefiningP, std::vector<int>> normalize(const DefiningP& P);

bool gentle(const DefiningP& P, Side side);

namespace detail {

// Report without the resolution-backed `simple` fields (used internally by the
// resolution module to avoid recursing through minimal_resolution).
FixedPointReport basic_report(const DefiningP& P);

SimpleEllipticResult simple_elliptic_witness_route(const DefiningP& P);
SimpleEllipticResult simple_elliptic_fiber_route(const DefiningP& P, Side side);

}  // namespace detail

}  // namespace kstar
