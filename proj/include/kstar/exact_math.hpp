#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace kstar {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

struct DivisionByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidCone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Floor/ceil divisions on integers (b != 0), and floor/ceil of rationals.
Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
inline Int rat_floor(const Rat& r) { return floor_div(num(r), den(r)); }
inline Int rat_ceil(const Rat& r) { return ceil_div(num(r), den(r)); }
// Euclidean remainder in [0, m), m >= 1.
Int emod(const Int& a, const Int& m);

struct LatticeVec2 {
  Int x{0};
  Int y{0};
  bool operator==(const LatticeVec2&) const = default;
};

bool is_primitive(const LatticeVec2& v);

Int det2(const LatticeVec2& v, const LatticeVec2& w);

// CF_k(a_1,...,a_k) = a_1 - 1/CF_{k-1}(a_2,...,a_k), evaluated from the tail.
// Throws DivisionByZero if an intermediate value vanishes.
Rat cf_eval(const std::vector<Rat>& a);

// Hilbert basis of cone(v0, v1) in Z^2: returns v0 = v'_0, ..., v'_{q+1} = v1
// with det(v'_i, v'_{i+1}) = 1 and v'_{i-1} + v'_{i+1} = c_i v'_i, c_i >= 2.
// Requires v0, v1 primitive with det2(v0, v1) > 0 (else InvalidCone).
std::vector<LatticeVec2> hilbert_basis_2d(const LatticeVec2& v0,
                                          const LatticeVec2& v1);

using IntMat = std::vector<std::vector<Int>>;

struct SmithNormalForm {
  std::vector<Int> diag;  // d_1 | d_2 | ..., non-negative
  IntMat U;               // unimodular, rows
  IntMat V;               // unimodular
};

// U*M*V diagonal with divisibility chain; diag has min(rows, cols) entries.
SmithNormalForm smith_normal_form(const IntMat& M);

// Ascending integers g with lo <= g <= hi and g == residue (mod modulus).
std::vector<Int> integers_in_interval_with_residue(const Rat& lo, const Rat& hi,
                                                   const Int& residue,
                                                   const Int& modulus);

// Exact binomial coefficient; 0 for k < 0 or k > n. Requires n >= 0.
Int binomial(const Int& n, const Int& k);

std::string to_string(const Rat& r);  // "p" or "p/q"
Rat rat_from_string(const std::string& s);

}  // namespace kstar
