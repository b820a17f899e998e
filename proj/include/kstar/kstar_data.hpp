#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kstar/exact_math.hpp"

namespace kstar {

struct ArmEntry {
  Int l{1};  // >= 1
  Int d{0};
  bool operator==(const ArmEntry&) const = default;
  Rat slope() const { return Rat(d) / Rat(l); }
};

using Arm = std::vector<ArmEntry>;

enum class SurfaceCase { ee, ep, pe, pp };

struct DefiningP {
  std::vector<Arm> arms;  // length r+1 >= 2
  bool has_vplus{false};
  bool has_vminus{false};

  int r() const { return static_cast<int>(arms.size()) - 1; }
  int n(int i) const { return static_cast<int>(arms[i].size()); }
  const ArmEntry& first(int i) const { return arms[i].front(); }
  const ArmEntry& last(int i) const { return arms[i].back(); }
  bool operator==(const DefiningP&) const = default;
};

struct DefiningA {
  // r+1 columns in K^2, pairwise linearly independent
  std::vector<std::pair<Rat, Rat>> columns;
  bool operator==(const DefiningA&) const = default;
};

struct KStarSurface {
  DefiningP P;
  DefiningA A;
};

// Canonical A for a given arm count: (1,0), (0,1), (-1,-1), (-1,-2), ...
DefiningA canonical_A(int arm_count);

struct Diagnostic {
  std::string code;      // e.g. "SlopeOrder", "Primitivity", ...
  std::string location;  // e.g. "arm 2"
  std::string message;
};

std::vector<Diagnostic> validate(const DefiningP& P);
std::vector<Diagnostic> validate(const KStarSurface& X);
bool is_valid(const DefiningP& P);

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoEllipticFixedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToricOnly : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scalars {
  std::vector<std::vector<Rat>> m;  // m[i][j] slopes
  Rat m_plus, m_minus;
  Int l_plus, l_minus;
};

Scalars scalars(const DefiningP& P);

SurfaceCase case_of(const DefiningP& P);
bool is_irredundant(const DefiningP& P);
bool is_toric(const DefiningP& P);

enum class Side { plus, minus };

// det(sigma+/-) = l+m+ / l-m-; NoEllipticFixedPoint if the side is parabolic.
Int det_sigma(const DefiningP& P, Side side);

enum class AdaptMode { source, sink };

struct TransformLog {
  // per-arm shift coefficients c_i applied as d_ij <- d_ij + c_i*l_ij (arm 0
  // receives the compensating -sum(c_i) shift)
  std::vector<Int> shifts;
  std::vector<int> permutation;  // new index -> old index
};

std::pair<DefiningP, TransformLog> adapt(const DefiningP& P, AdaptMode mode);
bool is_adapted(const DefiningP& P, AdaptMode mode);

DefiningP negate_last_row(const DefiningP& P);

struct ClassGroup {
  int rank{0};
  std::vector<Int> torsion;  // invariant factors > 1
  // one degree per column of P (arm columns in arm order, then v+, v-):
  // torsion coordinates first (mod the matching invariant factor), then free
  std::vector<std::vector<Int>> degrees;
};

ClassGroup class_group(const DefiningP& P);

// Full column list of P as (r+1)-vectors: arm columns, then v+, v- if present.
std::vector<std::vector<Int>> p_columns(const DefiningP& P);

// Sparse polynomial support lives in cox_action; here a trinomial is kept as
// the list of its three terms (coefficient, per-column exponent vector).
struct Trinomial {
  struct Term {
    Rat coeff;
    std::vector<Int> exponents;  // one slot per column of P (v+/- slots = S_k)
  };
  std::vector<Term> terms;
};

std::vector<Trinomial> trinomials(const KStarSurface& X);

struct RandomBounds {
  int max_r{4};       // r+1 arms, r >= 2 for non-toric output
  int max_n{4};       // entries per arm
  long max_l{7};      // l in [1, max_l]
  long max_d{9};      // |d| <= max_d
};

KStarSurface random_instance(std::uint64_t seed, const RandomBounds& bounds);

// JSON (de)serialization per the CLI contract.
std::string to_json(const KStarSurface& X);
KStarSurface surface_from_json(const std::string& text);

}  // namespace kstar
