#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kstar/cox_action.hpp"
#include "kstar/kstar_data.hpp"
#include "kstar/roots.hpp"

namespace kstar {

struct FormulaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotHorizontal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Upper-triangular binomial matrix phi(s): a_{mu,alpha} =
// binomial(alpha-1, mu-1) s^{alpha-mu} for alpha >= mu (1-based), else 0.
struct PhiMatrix {
  int dim{0};
  Int coeff(int mu, int alpha) const;  // 0 below the diagonal
  Int power(int mu, int alpha) const;
  std::vector<std::vector<Rat>> evaluate(const Rat& s) const;
  // entries as polynomials in the given indeterminate
  std::vector<std::vector<Poly>> symbolic(const Poly& s) const;
};

struct AutStructure {
  enum class Case { NoRoots, Vertical, Horizontal };
  Case kind{Case::NoRoots};
  int rho{0};
  int zeta{0};
  std::vector<Int> psi_exponents;  // length rho + zeta
  std::optional<PhiMatrix> phi;    // present iff zeta == 1
  std::string presentation;        // derived display string
  GeneratingRootSet roots;         // prepared data and generating roots
  std::vector<std::string> notes;  // formula-placement caveats, if any
};

// Unit component of Aut(X) for valid, irredundant, non-toric defining data.
// rho/zeta come from root enumeration and are asserted against the closed
// intersection-number formulas; disagreement with every formula reading is a
// FormulaMismatch. Toric input raises ToricInput.
AutStructure aut0_structure(const DefiningP& P);
inline AutStructure aut0_structure(const KStarSurface& X) {
  return aut0_structure(X.P);
}

struct ToricAutReport {
  enum class Shape { torus, one_line, two_lines, p11b_zb, pgl3, pgl2xpgl2 };
  Shape shape{Shape::torus};
  int ell{0};   // number of rays admitting a Demazure root
  Int rho{0};   // total number of Demazure roots
  Int b{0};     // rho = b + 3 in the p11b_zb row
  std::string structure;
  // diagonal twist character exponents (t1, t2) per unipotent coordinate
  std::vector<std::pair<Int, Int>> psi_pairs;
  std::map<int, std::vector<LatticeVec2>> roots;  // per ray
};

// Unit component of the automorphism group of the toric surface of a
// complete fan, per the root count and shape of the ray configuration.
ToricAutReport toric_aut0(const Fan2D& fan);

struct Classification {
  bool almost_homogeneous{false};
  bool series_one_holds{false};
  bool series_two_holds{false};
  struct GroupDescriptor {
    std::string name;        // "K x K*" twist description
    Int twist_exponent{0};   // phi(t)(s) = t^e s
    Int isotropy_order{0};   // general isotropy group order (cyclic)
    bool compactification{false};  // equivariant compactification of K x K*
  };
  std::vector<GroupDescriptor> groups;
  bool equivariant_compactification_of_K2{false};
  std::string additive_action_families;  // "none" | "one-parameter" |
                                         // "two-parameter"
};

// Almost-homogeneity classification by the two inequality series, evaluated
// exactly on the normalized data. Toric input raises ToricInput.
Classification classify(const DefiningP& P);
inline Classification classify(const KStarSurface& X) {
  return classify(X.P);
}

struct SubgroupCatalog {
  struct Gk {
    int k{0};
    Int twist_exponent{0};   // psi_k(t)(s) = t^e s
    Int isotropy_order{0};   // l_{1n1} for k <= rho, l_{0n0} for k = rho+1
  };
  std::vector<Gk> gk;  // k = 1 .. rho + zeta
  bool has_timos{false};       // iff l_{0n0} = rho and l_{1n1} = 1
  std::vector<Rat> w;          // w_1..w_rho with w_rho = 1, when has_timos
  bool has_v_family{false};    // iff rho > 1 and zeta = 1
  bool has_k2{false};          // iff rho >= 1 and zeta = 1
  bool one_parameter_family{false};  // iff l_{0n0} = rho and l_{1n1} = 1
};

// Two-dimensional subgroup catalog; requires the Horizontal case (else
// NotHorizontal).
SubgroupCatalog subgroup_catalog(const DefiningP& P);

}  // namespace kstar
