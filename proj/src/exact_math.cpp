#include "kstar/exact_math.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

namespace kstar {

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw DivisionByZero("floor_div by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

Int emod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += boost::multiprecision::abs(m);
  return r;
}

bool is_primitive(const LatticeVec2& v) {
  if (v.x == 0 && v.y == 0) return false;
  return boost::multiprecision::gcd(v.x, v.y) == 1;
}

Int det2(const LatticeVec2& v, const LatticeVec2& w) {
  return v.x * w.y - v.y * w.x;
}

Rat cf_eval(const std::vector<Rat>& a) {
  if (a.empty()) throw std::invalid_argument("cf_eval: empty sequence");
  Rat r = a.back();
  for (auto it = a.rbegin() + 1; it != a.rend(); ++it) {
    if (r == 0) throw DivisionByZero("cf_eval: intermediate value is zero");
    r = *it - 1 / r;
  }
  return r;
}

namespace {

// s*x + t*y = gcd(x, y)
std::tuple<Int, Int, Int> ext_gcd(Int x, Int y) {
  Int s0 = 1, t0 = 0, s1 = 0, t1 = 1;
  while (y != 0) {
    Int q = x / y;
    Int x2 = Int(x - q * y), s2 = Int(s0 - q * s1), t2 = Int(t0 - q * t1);
    x = y;
    y = x2;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (x < 0) {
    x = -x;
    s0 = -s0;
    t0 = -t0;
  }
  return {x, s0, t0};
}

}  // namespace

std::vector<LatticeVec2> hilbert_basis_2d(const LatticeVec2& v0,
                                          const LatticeVec2& v1) {
  if (!is_primitive(v0) || !is_primitive(v1))
    throw InvalidCone("hilbert_basis_2d: generators must be primitive");
  if (det2(v0, v1) <= 0)
    throw InvalidCone("hilbert_basis_2d: need det(v0, v1) > 0");
  std::vector<LatticeVec2> out{v0};
  LatticeVec2 a = v0;
  while (true) {
    Int D = det2(a, v1);
    if (D == 1) break;
    // Particular x0 with det(a, x0) = 1, then slide by multiples of a so that
    // 0 <= det(x, v1) < D.
    auto [g, s, t] = ext_gcd(a.x, a.y);
    (void)g;  // = 1 by primitivity
    LatticeVec2 x0{-t, s};
    Int d0 = det2(x0, v1);
    Int shift = (emod(d0, D) - d0) / D;
    LatticeVec2 x{x0.x + shift * a.x, x0.y + shift * a.y};
    out.push_back(x);
    a = x;
  }
  out.push_back(v1);
  // Assert the defining relations of the chain.
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    if (det2(out[i], out[i + 1]) != 1)
      throw std::logic_error("hilbert_basis_2d: chain determinant != 1");
  }
  for (size_t i = 1; i + 1 < out.size(); ++i) {
    LatticeVec2 s{out[i - 1].x + out[i + 1].x, out[i - 1].y + out[i + 1].y};
    // s = c * out[i] with integer c >= 2
    bool ok = false;
    if (out[i].x != 0 && s.x % out[i].x == 0) {
      Int c = s.x / out[i].x;
      ok = (s.y == c * out[i].y) && c >= 2;
    } else if (out[i].y != 0 && s.y % out[i].y == 0) {
      Int c = s.y / out[i].y;
      ok = (s.x == c * out[i].x) && c >= 2;
    }
    if (!ok) throw std::logic_error("hilbert_basis_2d: c_i relation violated");
  }
  return out;
}

namespace {

IntMat identity(size_t n) {
  IntMat I(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

}  // namespace

SmithNormalForm smith_normal_form(const IntMat& M) {
  size_t m = M.size();
  size_t n = m ? M[0].size() : 0;
  IntMat S = M;
  IntMat U = identity(m), V = identity(n);

  auto swap_rows = [&](size_t i, size_t j) {
    std::swap(S[i], S[j]);
    std::swap(U[i], U[j]);
  };
  auto swap_cols = [&](size_t i, size_t j) {
    for (size_t k = 0; k < m; ++k) std::swap(S[k][i], S[k][j]);
    for (size_t k = 0; k < n; ++k) std::swap(V[k][i], V[k][j]);
  };
  auto add_row = [&](size_t dst, size_t src, const Int& c) {
    for (size_t k = 0; k < n; ++k) S[dst][k] += c * S[src][k];
    for (size_t k = 0; k < m; ++k) U[dst][k] += c * U[src][k];
  };
  auto add_col = [&](size_t dst, size_t src, const Int& c) {
    for (size_t k = 0; k < m; ++k) S[k][dst] += c * S[k][src];
    for (size_t k = 0; k < n; ++k) V[k][dst] += c * V[k][src];
  };
  auto negate_row = [&](size_t i) {
    for (auto& x : S[i]) x = -x;
    for (auto& x : U[i]) x = -x;
  };

  size_t rank = std::min(m, n);
  for (size_t t = 0; t < rank; ++t) {
    for (;;) {
      // Locate a minimal-abs nonzero pivot in the trailing block.
      size_t pi = t, pj = t;
      Int best = 0;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j) {
          Int a = boost::multiprecision::abs(S[i][j]);
          if (a != 0 && (best == 0 || a < best)) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) {
        // trailing block zero; done
        t = rank;
        break;
      }
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i)
        if (S[i][t] != 0) {
          add_row(i, t, -floor_div(S[i][t], S[t][t]));
          if (S[i][t] != 0) clean = false;
        }
      for (size_t j = t + 1; j < n; ++j)
        if (S[t][j] != 0) {
          add_col(j, t, -floor_div(S[t][j], S[t][t]));
          if (S[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // Enforce divisibility of the trailing block by the pivot.
      bool divisible = true;
      for (size_t i = t + 1; i < m && divisible; ++i)
        for (size_t j = t + 1; j < n && divisible; ++j)
          if (S[i][j] % S[t][t] != 0) {
            add_col(t, j, 1);
            divisible = false;
          }
      if (divisible) break;
    }
    if (t >= rank) break;
  }
  for (size_t t = 0; t < rank; ++t)
    if (S[t][t] < 0) negate_row(t);

  SmithNormalForm out;
  out.diag.reserve(rank);
  for (size_t t = 0; t < rank; ++t) out.diag.push_back(S[t][t]);
  out.U = std::move(U);
  out.V = std::move(V);
  return out;
}

std::vector<Int> integers_in_interval_with_residue(const Rat& lo, const Rat& hi,
                                                   const Int& residue,
                                                   const Int& modulus) {
  if (modulus < 1)
    throw std::invalid_argument("integers_in_interval_with_residue: modulus");
  std::vector<Int> out;
  if (lo > hi) return out;
  Int a = rat_ceil(lo), b = rat_floor(hi);
  Int first = a + emod(residue - a, modulus);
  for (Int g = first; g <= b; g += modulus) out.push_back(g);
  return out;
}

Int binomial(const Int& n, const Int& k) {
  if (n < 0) throw std::invalid_argument("binomial: n < 0");
  if (k < 0 || k > n) return 0;
  Int kk = k;
  if (n - k < kk) kk = n - k;
  Int r = 1;
  for (Int i = 1; i <= kk; ++i) {
    r *= n - kk + i;
    r /= i;
  }
  return r;
}

std::string to_string(const Rat& r) {
  std::string s = num(r).str();
  if (den(r) != 1) s += "/" + den(r).str();
  return s;
}

Rat rat_from_string(const std::string& s) {
  auto pos = s.find('/');
  if (pos == std::string::npos) return Rat(Int(s));
  Int p(s.substr(0, pos)), q(s.substr(pos + 1));
  if (q == 0) throw DivisionByZero("rational with zero denominator: " + s);
  return Rat(p) / Rat(q);
}

}  // namespace kstar
