#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kstar/kstar_data.hpp"
#include "kstar/roots.hpp"

namespace kstar {

struct MalformedRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotNilpotent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SamplingFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse Laurent polynomial in the Cox variables of a fixed surface plus two
// generic parameters (s, q).  Exponent vectors have length ncox + 2; the last
// two slots are the parameter exponents.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, const Rat& c);
  static Poly variable(int nvars, int index, Int exponent = Int(1));
  static Poly monomial(int nvars, const std::vector<Int>& exponents,
                       const Rat& coeff);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_polynomial() const;  // no negative exponents
  Int total_degree() const;    // max over terms of sum of |exponents|

  const std::map<std::vector<Int>, Rat>& terms() const { return terms_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Rat& c) const;
  Poly pow(Int e) const;  // e >= 0

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // substitute variable index -> replacement polynomial (same nvars);
  // untouched variables map to themselves.  All exponents of substituted
  // variables must be >= 0.
  Poly substitute(const std::map<int, Poly>& images) const;

  // evaluate at a full assignment (length nvars); negative exponents require
  // non-zero values.
  Rat evaluate(const std::vector<Rat>& values) const;

  // partial derivative with respect to one variable
  Poly derivative(int index) const;

  std::string to_string(const std::vector<std::string>& names) const;

  void add_term(const std::vector<Int>& exponents, const Rat& coeff);

 private:
  int nvars_{0};
  std::map<std::vector<Int>, Rat> terms_;
};

// Variable bookkeeping for the Cox ring K[T_ij, S_k] of a surface.
struct VarTable {
  explicit VarTable(const DefiningP& P);

  int ncox() const { return ncox_; }
  int nvars() const { return ncox_ + 2; }  // + parameters s, q
  int s_param() const { return ncox_; }
  int q_param() const { return ncox_ + 1; }
  int t_index(int i, int j) const;  // 1-based j
  std::optional<int> splus_index() const;
  std::optional<int> sminus_index() const;
  // which column of p_columns() a variable belongs to (identity here: the
  // variable order coincides with the column order of p_columns)
  std::vector<std::string> names() const;

  DefiningP P;

 private:
  int ncox_{0};
  std::vector<int> offset_;
};

// The unique vector in the row space of A with beta_{i0} = 0, beta_{i1} = 1.
std::vector<Rat> beta(const DefiningA& A, int i0, int i1);

// Normal form of the trinomial g_{i1,i2,i3} (unit multiple of the det form):
//   T_{i3}^{l_{i3}} - beta(A,i2,i1)_{i3} T_{i1}^{l_{i1}}
//                   - beta(A,i1,i2)_{i3} T_{i2}^{l_{i2}}
Poly trinomial_normal_form(const KStarSurface& X, const VarTable& vt, int i1,
                           int i2, int i3);
std::vector<Poly> all_trinomials(const KStarSurface& X, const VarTable& vt);

// Derivation: one image polynomial per Cox variable, extended by Leibniz.
struct Derivation {
  explicit Derivation(const VarTable& vt);
  Derivation(int ncox, int nvars);
  std::vector<Poly> images;  // length ncox
  Poly apply(const Poly& f) const;
  int nvars{0};
  bool operator==(const Derivation& o) const {
    return images == o.images;
  }
};

struct CoxAutomorphism {
  std::vector<Poly> images;  // length ncox; may involve the parameters
  std::string provenance;
};

// Locally nilpotent derivation of a P-root (Cox ring of X).
Derivation lnd_of_root(const KStarSurface& X, const PRoot& root);

// Ambient toric derivation of a Demazure root of the fan spanned by the
// columns of P.  u is given in the (u_1..u_{r+1}) convention with u_0 = -sum.
Derivation ambient_toric_lnd(const KStarSurface& X,
                             const std::vector<Int>& u);

// Checks that u is a toric Demazure root of the column fan at the column
// hosting the given arm position (or at v+/v-).
bool is_ambient_demazure_root(const DefiningP& P, const std::vector<Int>& u,
                              int i, int j);

// exp(s_poly * delta) as a polynomial automorphism; throws NotNilpotent if
// iteration exceeds 2*(max total degree)+2 steps.
CoxAutomorphism exponential(const Derivation& delta, const Poly& s);

CoxAutomorphism identity_automorphism(const VarTable& vt);

// compose(f, g) = the automorphism z -> f(g(z)).
CoxAutomorphism compose(const CoxAutomorphism& f, const CoxAutomorphism& g);

using CoxPoint = std::vector<Rat>;  // one entry per Cox variable

CoxPoint apply(const CoxAutomorphism& a, const CoxPoint& z, const Rat& s,
               const Rat& q = Rat(0));

// all trinomials vanish at z
bool on_xbar(const KStarSurface& X, const CoxPoint& z);

// Restriction presentation of a horizontal root group via ambient toric
// root groups (lambda_u(s) composed with the u_{nu,iota} factors).
struct RestrictionPresentation {
  std::vector<Int> u;  // the root's linear form
  struct Factor {
    std::vector<Int> u_nu_iota;
    int nu{0};
    int iota{0};
    Poly coefficient;  // alpha(s, nu, iota)
  };
  std::vector<Factor> ambient_factors;
  bool equality_holds{false};
};

RestrictionPresentation restriction_presentation(const KStarSurface& X,
                                                 const PRoot& root);

// Exact rational points of Xbar with prescribed count; throws SamplingFailed
// if some arm i >= 2 has no exponent-1 variable to solve for.
std::vector<CoxPoint> sample_points(const KStarSurface& X, int count,
                                    std::uint64_t seed = 0);

// Ideal invariance of an automorphism, checked on sampled points; falls back
// to single-step division of delta(g) by the trinomial normal forms when
// sampling is impossible (then `fallback_delta` must be provided).
bool ideal_invariance(const KStarSurface& X, const CoxAutomorphism& a,
                      int samples, const Rat& s, const Rat& q = Rat(0));

// delta(g) lies in the trinomial ideal, via division by normal forms.
bool lnd_preserves_ideal(const KStarSurface& X, const Derivation& delta);

// f reduces to zero under division by the trinomial normal forms.
bool poly_in_ideal(const KStarSurface& X, const Poly& f);

// Two automorphisms agree as maps of Xbar (image differences in the ideal).
bool equal_on_xbar(const KStarSurface& X, const CoxAutomorphism& a,
                   const CoxAutomorphism& b);

// Toric counterpart on the Cox ring of a complete 2D fan: variables are the
// rays (plus the two parameters); delta_u of a Demazure root u at some ray.
Derivation toric_surface_lnd(const Fan2D& fan, const LatticeVec2& u);

// Each image homogeneous of the variable's class-group degree.
bool preserves_grading(const KStarSurface& X, const CoxAutomorphism& a);

// Verified relation identities; failures indicate implementation bugs.
struct RelationReport {
  std::vector<std::string> verified;
  std::vector<std::string> skipped;
  std::vector<std::string> failed;
};

RelationReport relation_suite(const KStarSurface& X);

}  // namespace kstar
