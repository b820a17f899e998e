#include "kstar/cox_action.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace kstar {

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly Poly::constant(int nvars, const Rat& c) {
  Poly p(nvars);
  p.add_term(std::vector<Int>(nvars, Int(0)), c);
  return p;
}

Poly Poly::variable(int nvars, int index, Int exponent) {
  Poly p(nvars);
  std::vector<Int> e(nvars, Int(0));
  e[index] = exponent;
  p.add_term(e, Rat(1));
  return p;
}

Poly Poly::monomial(int nvars, const std::vector<Int>& exponents,
                    const Rat& coeff) {
  Poly p(nvars);
  p.add_term(exponents, coeff);
  return p;
}

void Poly::add_term(const std::vector<Int>& exponents, const Rat& coeff) {
  if (coeff == 0) return;
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_.emplace(exponents, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Poly::is_polynomial() const {
  for (const auto& [e, c] : terms_)
    for (const Int& x : e)
      if (x < 0) return false;
  return true;
}

Int Poly::total_degree() const {
  Int best = 0;
  for (const auto& [e, c] : terms_) {
    Int d = 0;
    for (const Int& x : e) d += Int(x < 0 ? Int(-x) : x);
    if (d > best) best = d;
  }
  return best;
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const {
  Poly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, Rat(-c));
  return out;
}

Poly Poly::operator-() const { return scaled(Rat(-1)); }

Poly Poly::scaled(const Rat& c) const {
  Poly out(nvars_);
  if (c == 0) return out;
  for (const auto& [e, k] : terms_) out.terms_.emplace(e, Rat(k * c));
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out(nvars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<Int> e(nvars_);
      for (int k = 0; k < nvars_; ++k) e[k] = Int(e1[k] + e2[k]);
      out.add_term(e, Rat(c1 * c2));
    }
  }
  return out;
}

Poly Poly::pow(Int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly result = Poly::constant(nvars_, Rat(1));
  Poly base = *this;
  while (e > 0) {
    if (emod(e, Int(2)) == 1) result = result * base;
    base = base * base;
    e = floor_div(e, Int(2));
  }
  return result;
}

bool Poly::operator==(const Poly& o) const { return terms_ == o.terms_; }

Poly Poly::substitute(const std::map<int, Poly>& images) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Poly term = Poly::constant(nvars_, c);
    std::vector<Int> untouched(nvars_, Int(0));
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      auto it = images.find(v);
      if (it == images.end()) {
        untouched[v] = e[v];
      } else {
        if (e[v] < 0)
          throw std::invalid_argument(
              "Poly::substitute: negative exponent at substituted variable");
        term = term * it->second.pow(e[v]);
      }
    }
    out = out + term * Poly::monomial(nvars_, untouched, Rat(1));
  }
  return out;
}

Rat Poly::evaluate(const std::vector<Rat>& values) const {
  Rat out(0);
  for (const auto& [e, c] : terms_) {
    Rat term = c;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      Rat base = values[v];
      Int k = e[v];
      if (k < 0) {
        if (base == 0) throw DivisionByZero("Poly::evaluate: 0^negative");
        base = Rat(1) / base;
        k = Int(-k);
      }
      for (Int it = 0; it < k; ++it) term *= base;
    }
    out += term;
  }
  return out;
}

Poly Poly::derivative(int index) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[index] == 0) continue;
    std::vector<Int> ne = e;
    ne[index] -= 1;
    out.add_term(ne, Rat(c * Rat(e[index])));
  }
  return out;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << kstar::to_string(c);
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      os << "*" << names[v];
      if (e[v] != 1) os << "^" << e[v];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// VarTable
// ---------------------------------------------------------------------------

VarTable::VarTable(const DefiningP& P_) : P(P_) {
  offset_.assign(P.r() + 1, 0);
  int acc = 0;
  for (int i = 0; i <= P.r(); ++i) {
    offset_[i] = acc;
    acc += P.n(i);
  }
  ncox_ = acc + (P.has_vplus ? 1 : 0) + (P.has_vminus ? 1 : 0);
}

int VarTable::t_index(int i, int j) const { return offset_[i] + (j - 1); }

std::optional<int> VarTable::splus_index() const {
  if (!P.has_vplus) return std::nullopt;
  int narm = ncox_ - (P.has_vplus ? 1 : 0) - (P.has_vminus ? 1 : 0);
  return narm;
}

std::optional<int> VarTable::sminus_index() const {
  if (!P.has_vminus) return std::nullopt;
  return ncox_ - 1;
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  for (int i = 0; i <= P.r(); ++i)
    for (int j = 1; j <= P.n(i); ++j)
      out.push_back("T" + std::to_string(i) + std::to_string(j));
  if (P.has_vplus) out.push_back("S+");
  if (P.has_vminus) out.push_back("S-");
  out.push_back("s");
  out.push_back("q");
  return out;
}

namespace {

// <u, column c> over the full column list of P (arm columns, then v+, v-).
Int column_pairing(const DefiningP& P, const std::vector<Int>& u,
                   const VarTable& vt, int var) {
  int acc = 0;
  for (int i = 0; i <= P.r(); ++i) {
    if (var < acc + P.n(i)) return pairing(P, u, i, var - acc + 1);
    acc += P.n(i);
  }
  // v+ = e_{r+1}, v- = -e_{r+1}
  if (vt.splus_index() && var == *vt.splus_index()) return u.back();
  return Int(-u.back());
}

std::vector<Int> arm_monomial_exponents(const VarTable& vt, int i) {
  std::vector<Int> e(vt.nvars(), Int(0));
  for (int j = 1; j <= vt.P.n(i); ++j)
    e[vt.t_index(i, j)] = vt.P.arms[i][j - 1].l;
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// beta and trinomials
// ---------------------------------------------------------------------------

std::vector<Rat> beta(const DefiningA& A, int i0, int i1) {
  if (i0 == i1) throw std::invalid_argument("beta: i0 == i1");
  const auto& a = A.columns[i0];
  const auto& b = A.columns[i1];
  Rat det = a.first * b.second - a.second * b.first;
  if (det == 0) throw InvalidInput("beta: dependent A columns");
  Rat x = -a.second / det;
  Rat y = a.first / det;
  std::vector<Rat> out;
  out.reserve(A.columns.size());
  for (const auto& col : A.columns)
    out.push_back(x * col.first + y * col.second);
  return out;
}

Poly trinomial_normal_form(const KStarSurface& X, const VarTable& vt, int i1,
                           int i2, int i3) {
  auto b21 = beta(X.A, i2, i1);
  auto b12 = beta(X.A, i1, i2);
  Poly g = Poly::monomial(vt.nvars(), arm_monomial_exponents(vt, i3), Rat(1));
  g = g + Poly::monomial(vt.nvars(), arm_monomial_exponents(vt, i1),
                         Rat(-b21[i3]));
  g = g + Poly::monomial(vt.nvars(), arm_monomial_exponents(vt, i2),
                         Rat(-b12[i3]));
  return g;
}

std::vector<Poly> all_trinomials(const KStarSurface& X, const VarTable& vt) {
  std::vector<Poly> out;
  int r = X.P.r();
  for (int i1 = 0; i1 <= r; ++i1)
    for (int i2 = i1 + 1; i2 <= r; ++i2)
      for (int i3 = i2 + 1; i3 <= r; ++i3)
        out.push_back(trinomial_normal_form(X, vt, i1, i2, i3));
  return out;
}

// ---------------------------------------------------------------------------
// Derivations
// ---------------------------------------------------------------------------

Derivation::Derivation(const VarTable& vt)
    : images(vt.ncox(), Poly(vt.nvars())), nvars(vt.nvars()) {}

Derivation::Derivation(int ncox, int nv)
    : images(ncox, Poly(nv)), nvars(nv) {}

Poly Derivation::apply(const Poly& f) const {
  Poly out(nvars);
  int ncox = static_cast<int>(images.size());
  for (const auto& [e, c] : f.terms()) {
    for (int v = 0; v < ncox; ++v) {
      if (e[v] == 0 || images[v].is_zero()) continue;
      std::vector<Int> ne = e;
      ne[v] -= 1;
      out = out + Poly::monomial(nvars, ne, Rat(c * Rat(e[v]))) * images[v];
    }
  }
  return out;
}

Derivation lnd_of_root(const KStarSurface& X, const PRoot& root) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  Derivation delta(vt);
  const int nv = vt.nvars();

  // h^u exponents over the Cox variables
  std::vector<Int> hu(nv, Int(0));
  for (int v = 0; v < vt.ncox(); ++v)
    hu[v] = column_pairing(P, root.u, vt, v);

  if (root.kind == PRoot::Kind::vertical) {
    auto k0 = root.side == Side::plus ? vt.splus_index() : vt.sminus_index();
    if (!k0) throw MalformedRoot("lnd_of_root: missing parabolic curve");
    if (!is_vertical_root(P, root.side, root.u))
      throw MalformedRoot("lnd_of_root: not a vertical root");
    std::vector<Int> e = hu;
    e[*k0] += 1;
    for (const Int& x : e)
      if (x < 0) throw MalformedRoot("lnd_of_root: h^u S_k not a monomial");
    delta.images[*k0] = Poly::monomial(nv, e, Rat(1));
    return delta;
  }

  // horizontal
  const int i0 = root.i0, i1 = root.i1;
  if (!is_horizontal_root(P, root.side, i0, i1, root.u))
    throw MalformedRoot("lnd_of_root: not a horizontal root at (i0,i1)");
  auto c_of = [&](int i) { return root.side == Side::minus ? P.n(i) : 1; };
  // zeta exponents
  std::vector<Int> zeta(nv, Int(0));
  for (int i = 0; i <= P.r(); ++i) {
    for (int j = 1; j <= P.n(i); ++j) {
      if (i != i0 && i != i1 && j != c_of(i))
        zeta[vt.t_index(i, j)] = P.arms[i][j - 1].l;
      else if (i == i1 && j == c_of(i1))
        zeta[vt.t_index(i, j)] = -1;
    }
  }
  std::vector<Int> hz(nv, Int(0));
  for (int v = 0; v < nv; ++v) {
    hz[v] = Int(hu[v] - zeta[v]);
    if (hz[v] < 0)
      throw MalformedRoot("lnd_of_root: h^u/h^zeta not a monomial");
  }
  auto b = beta(X.A, i0, i1);
  for (int i = 0; i <= P.r(); ++i) {
    if (b[i] == 0) continue;
    // partial-derivative product over k != i, i0
    Poly img = Poly::monomial(nv, hz, b[i]);
    for (int k = 0; k <= P.r(); ++k) {
      if (k == i || k == i0) continue;
      std::vector<Int> e = arm_monomial_exponents(vt, k);
      int ck = vt.t_index(k, c_of(k));
      Rat lead(P.arms[k][c_of(k) - 1].l);
      e[ck] -= 1;
      img = img * Poly::monomial(nv, e, lead);
    }
    delta.images[vt.t_index(i, c_of(i))] = img;
  }
  return delta;
}

Derivation ambient_toric_lnd(const KStarSurface& X,
                             const std::vector<Int>& u) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  Derivation delta(vt);
  const int nv = vt.nvars();
  std::vector<Int> vals(vt.ncox());
  int distinguished = -1;
  for (int v = 0; v < vt.ncox(); ++v) {
    vals[v] = column_pairing(P, u, vt, v);
    if (vals[v] == -1 && distinguished < 0)
      distinguished = v;
    else if (vals[v] < 0)
      throw MalformedRoot("ambient_toric_lnd: not a Demazure root");
  }
  if (distinguished < 0)
    throw MalformedRoot("ambient_toric_lnd: no distinguished column");
  std::vector<Int> e(nv, Int(0));
  for (int v = 0; v < vt.ncox(); ++v) e[v] = vals[v];
  e[distinguished] += 1;
  delta.images[distinguished] = Poly::monomial(nv, e, Rat(1));
  return delta;
}

bool is_ambient_demazure_root(const DefiningP& P, const std::vector<Int>& u,
                              int i, int j) {
  VarTable vt(P);
  int target = vt.t_index(i, j);
  for (int v = 0; v < vt.ncox(); ++v) {
    Int val = column_pairing(P, u, vt, v);
    if (v == target) {
      if (val != -1) return false;
    } else if (val < 0) {
      return false;
    }
  }
  return true;
}

Derivation toric_surface_lnd(const Fan2D& fan, const LatticeVec2& u) {
  int n = static_cast<int>(fan.generators.size());
  Derivation delta(n, n + 2);
  std::vector<Int> vals(n);
  int distinguished = -1;
  for (int v = 0; v < n; ++v) {
    vals[v] = Int(u.x * fan.generators[v].x + u.y * fan.generators[v].y);
    if (vals[v] == -1 && distinguished < 0)
      distinguished = v;
    else if (vals[v] < 0)
      throw MalformedRoot("toric_surface_lnd: not a Demazure root");
  }
  if (distinguished < 0)
    throw MalformedRoot("toric_surface_lnd: no distinguished ray");
  std::vector<Int> e(n + 2, Int(0));
  for (int v = 0; v < n; ++v) e[v] = vals[v];
  e[distinguished] += 1;
  delta.images[distinguished] = Poly::monomial(n + 2, e, Rat(1));
  return delta;
}

// ---------------------------------------------------------------------------
// Exponentials and composition
// ---------------------------------------------------------------------------

CoxAutomorphism exponential(const Derivation& delta, const Poly& s) {
  int ncox = static_cast<int>(delta.images.size());
  CoxAutomorphism out;
  out.images.reserve(ncox);
  Int maxdeg = 0;
  for (const Poly& img : delta.images) {
    Int d = img.total_degree();
    if (d > maxdeg) maxdeg = d;
  }
  Int bound = Int(2 * maxdeg + 2 + ncox);
  for (int v = 0; v < ncox; ++v) {
    Poly acc = Poly::variable(delta.nvars, v);
    Poly cur = delta.images[v];
    Poly spow = s;
    Rat fact(1);
    Int k = 1;
    while (!cur.is_zero()) {
      if (k > bound) throw NotNilpotent("exponential: iteration bound hit");
      acc = acc + (cur * spow).scaled(Rat(1) / fact);
      cur = delta.apply(cur);
      k += 1;
      fact *= Rat(k);
      spow = spow * s;
    }
    out.images.push_back(acc);
  }
  return out;
}

CoxAutomorphism identity_automorphism(const VarTable& vt) {
  CoxAutomorphism out;
  for (int v = 0; v < vt.ncox(); ++v)
    out.images.push_back(Poly::variable(vt.nvars(), v));
  out.provenance = "identity";
  return out;
}

CoxAutomorphism compose(const CoxAutomorphism& f, const CoxAutomorphism& g) {
  std::map<int, Poly> sub;
  for (int v = 0; v < static_cast<int>(g.images.size()); ++v)
    sub.emplace(v, g.images[v]);
  CoxAutomorphism out;
  out.images.reserve(f.images.size());
  for (const Poly& img : f.images) out.images.push_back(img.substitute(sub));
  out.provenance = f.provenance + " o " + g.provenance;
  return out;
}

CoxPoint apply(const CoxAutomorphism& a, const CoxPoint& z, const Rat& s,
               const Rat& q) {
  std::vector<Rat> values = z;
  values.push_back(s);
  values.push_back(q);
  CoxPoint out;
  out.reserve(a.images.size());
  for (const Poly& img : a.images) out.push_back(img.evaluate(values));
  return out;
}

bool on_xbar(const KStarSurface& X, const CoxPoint& z) {
  VarTable vt(X.P);
  std::vector<Rat> values = z;
  values.push_back(Rat(0));
  values.push_back(Rat(0));
  for (const Poly& g : all_trinomials(X, vt))
    if (g.evaluate(values) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Restriction presentation
// ---------------------------------------------------------------------------

namespace {

std::vector<Int> add_eprime(std::vector<Int> u, int plus_i, int minus_i) {
  // e'_0 = 0; e'_i = e_i for i >= 1 in the stored (u_1..u_{r+1}) convention
  if (plus_i >= 1) u[plus_i - 1] += 1;
  if (minus_i >= 1) u[minus_i - 1] -= 1;
  return u;
}

}  // namespace

RestrictionPresentation restriction_presentation(const KStarSurface& X,
                                                 const PRoot& root) {
  if (root.kind != PRoot::Kind::horizontal)
    throw MalformedRoot("restriction_presentation: horizontal roots only");
  const DefiningP& P = X.P;
  VarTable vt(P);
  const int nv = vt.nvars();
  const int i0 = root.i0, i1 = root.i1;
  auto c_of = [&](int i) { return root.side == Side::minus ? P.n(i) : 1; };
  const Int l1 = P.arms[i1][c_of(i1) - 1].l;
  auto b = beta(X.A, i0, i1);

  RestrictionPresentation out;
  out.u = root.u;
  Poly s = Poly::variable(nv, vt.s_param());
  CoxAutomorphism rhs = exponential(ambient_toric_lnd(X, root.u), s);
  for (int iota = 0; iota <= P.r(); ++iota) {
    if (iota == i0 || iota == i1) continue;
    for (Int nu = 1; nu <= l1; ++nu) {
      std::vector<Int> unu(root.u.size());
      for (size_t k = 0; k < unu.size(); ++k) unu[k] = Int(nu * root.u[k]);
      unu = add_eprime(unu, i1, iota);
      if (!is_ambient_demazure_root(P, unu, iota, c_of(iota)))
        throw MalformedRoot(
            "restriction_presentation: u_{nu,iota} is not an ambient root");
      RestrictionPresentation::Factor f;
      f.u_nu_iota = unu;
      f.nu = static_cast<int>(nu);
      f.iota = iota;
      f.coefficient =
          Poly::variable(nv, vt.s_param(), nu).scaled(Rat(b[iota] * binomial(l1, nu)));
      rhs = compose(rhs, exponential(ambient_toric_lnd(X, unu), f.coefficient));
      out.ambient_factors.push_back(std::move(f));
    }
  }
  CoxAutomorphism lhs = exponential(lnd_of_root(X, root), s);
  out.equality_holds = lhs.images == rhs.images;
  return out;
}

// ---------------------------------------------------------------------------
// Ideal checks and sampling
// ---------------------------------------------------------------------------

bool poly_in_ideal(const KStarSurface& X, const Poly& f) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  const int r = P.r();
  // normal forms T_i^{l_i} - beta(A,1,0)_i T_0^{l_0} - beta(A,0,1)_i T_1^{l_1}
  struct NF {
    std::vector<Int> lead;  // arm-i monomial
    Poly tail;              // the two lower terms (so NF = lead - tail... )
  };
  auto b10 = beta(X.A, 1, 0);
  auto b01 = beta(X.A, 0, 1);
  std::vector<NF> nfs;
  for (int i = 2; i <= r; ++i) {
    NF nf;
    nf.lead = arm_monomial_exponents(vt, i);
    nf.tail =
        Poly::monomial(vt.nvars(), arm_monomial_exponents(vt, 0), b10[i]) +
        Poly::monomial(vt.nvars(), arm_monomial_exponents(vt, 1), b01[i]);
    nfs.push_back(std::move(nf));
  }
  Poly rem = f;
  bool progress = true;
  while (!rem.is_zero() && progress) {
    progress = false;
    for (const auto& [e, c] : rem.terms()) {
      for (int k = static_cast<int>(nfs.size()) - 1; k >= 0; --k) {
        bool divisible = true;
        for (int v = 0; v < vt.nvars(); ++v)
          if (e[v] < nfs[k].lead[v]) {
            divisible = false;
            break;
          }
        if (!divisible) continue;
        std::vector<Int> quot(vt.nvars());
        for (int v = 0; v < vt.nvars(); ++v)
          quot[v] = Int(e[v] - nfs[k].lead[v]);
        Poly qmono = Poly::monomial(vt.nvars(), quot, c);
        // rem -= q * (lead - tail)
        rem = rem - Poly::monomial(vt.nvars(), e, c) + qmono * nfs[k].tail;
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  return rem.is_zero();
}

bool equal_on_xbar(const KStarSurface& X, const CoxAutomorphism& a,
                   const CoxAutomorphism& b) {
  if (a.images.size() != b.images.size()) return false;
  for (size_t v = 0; v < a.images.size(); ++v)
    if (!poly_in_ideal(X, a.images[v] - b.images[v])) return false;
  return true;
}

bool lnd_preserves_ideal(const KStarSurface& X, const Derivation& delta) {
  VarTable vt(X.P);
  for (const Poly& g : all_trinomials(X, vt))
    if (!poly_in_ideal(X, delta.apply(g))) return false;
  return true;
}

std::vector<CoxPoint> sample_points(const KStarSurface& X, int count,
                                    std::uint64_t seed) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  const int r = P.r();
  // find an exponent-1 variable per arm i >= 2
  std::vector<int> solve_j(r + 1, -1);
  for (int i = 2; i <= r; ++i) {
    for (int j = 1; j <= P.n(i); ++j)
      if (P.arms[i][j - 1].l == 1) {
        solve_j[i] = j;
        break;
      }
    if (solve_j[i] < 0)
      throw SamplingFailed("sample_points: arm " + std::to_string(i) +
                           " has no exponent-1 variable");
  }
  auto b10 = beta(X.A, 1, 0);
  auto b01 = beta(X.A, 0, 1);
  std::mt19937_64 rng(seed);
  auto rnd = [&]() {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    int p = 0;
    while (p == 0) p = num(rng);
    return Rat(p, den(rng));
  };
  std::vector<CoxPoint> out;
  while (static_cast<int>(out.size()) < count) {
    CoxPoint z(vt.ncox(), Rat(1));
    // free variables: arms 0 and 1, S_k, and non-solved slots of arms >= 2
    for (int i = 0; i <= r; ++i)
      for (int j = 1; j <= P.n(i); ++j)
        if (i < 2 || j != solve_j[i]) z[vt.t_index(i, j)] = rnd();
    if (auto sp = vt.splus_index()) z[*sp] = rnd();
    if (auto sm = vt.sminus_index()) z[*sm] = rnd();
    auto arm_value = [&](int i) {
      Rat v(1);
      for (int j = 1; j <= P.n(i); ++j) {
        Rat base = z[vt.t_index(i, j)];
        for (Int k = 0; k < P.arms[i][j - 1].l; ++k) v *= base;
      }
      return v;
    };
    Rat t0 = arm_value(0), t1 = arm_value(1);
    bool degenerate = false;
    for (int i = 2; i <= r; ++i) {
      Rat target = b10[i] * t0 + b01[i] * t1;
      if (target == 0) {  // keep all coordinates non-zero; redraw
        degenerate = true;
        break;
      }
      Rat others(1);
      for (int j = 1; j <= P.n(i); ++j) {
        if (j == solve_j[i]) continue;
        Rat base = z[vt.t_index(i, j)];
        for (Int k = 0; k < P.arms[i][j - 1].l; ++k) others *= base;
      }
      z[vt.t_index(i, solve_j[i])] = target / others;
    }
    if (degenerate) continue;
    if (!on_xbar(X, z))
      throw std::logic_error("sample_points: constructed point off Xbar");
    out.push_back(std::move(z));
  }
  return out;
}

bool ideal_invariance(const KStarSurface& X, const CoxAutomorphism& a,
                      int samples, const Rat& s, const Rat& q) {
  auto pts = sample_points(X, samples, 12345);
  for (const auto& z : pts) {
    CoxPoint img = apply(a, z, s, q);
    if (!on_xbar(X, img)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Grading
// ---------------------------------------------------------------------------

bool preserves_grading(const KStarSurface& X, const CoxAutomorphism& a) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  auto cols = p_columns(P);
  const int rows = static_cast<int>(cols.size());      // n + m
  const int rank = static_cast<int>(cols[0].size());   // r + 1
  IntMat M(rows, std::vector<Int>(rank, Int(0)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rank; ++j) M[i][j] = cols[i][j];
  auto snf = smith_normal_form(M);
  // diff in im(P^T)  <=>  U*diff solvable against the diagonal
  auto in_image = [&](const std::vector<Int>& diff) {
    std::vector<Int> rhs(rows, Int(0));
    for (int i = 0; i < rows; ++i) {
      Int acc = 0;
      for (int j = 0; j < rows; ++j) acc += Int(snf.U[i][j] * diff[j]);
      rhs[i] = acc;
    }
    for (int i = 0; i < rows; ++i) {
      Int d = i < static_cast<int>(snf.diag.size()) ? snf.diag[i] : Int(0);
      if (d == 0) {
        if (rhs[i] != 0) return false;
      } else if (emod(rhs[i], d) != 0) {
        return false;
      }
    }
    return true;
  };
  for (int v = 0; v < vt.ncox(); ++v) {
    for (const auto& [e, c] : a.images[v].terms()) {
      std::vector<Int> diff(rows, Int(0));
      for (int w = 0; w < vt.ncox(); ++w) diff[w] = e[w];
      diff[v] -= 1;
      if (!in_image(diff)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Relation suite
// ---------------------------------------------------------------------------

RelationReport relation_suite(const KStarSurface& X) {
  const DefiningP& P = X.P;
  VarTable vt(P);
  const int nv = vt.nvars();
  RelationReport rep;
  auto record = [&](const std::string& name, bool ok) {
    (ok ? rep.verified : rep.failed).push_back(name);
  };
  Poly s = Poly::variable(nv, vt.s_param());
  Poly q = Poly::variable(nv, vt.q_param());
  const int r = P.r();

  // beta relation identities (Lemma-level, pure linear algebra)
  {
    bool ok = true;
    for (int i0 = 0; i0 <= r && ok; ++i0)
      for (int i1 = 0; i1 <= r && ok; ++i1) {
        if (i0 == i1) continue;
        for (int io = 0; io <= r && ok; ++io) {
          if (io == i0 || io == i1) continue;
          auto b = beta(X.A, i0, i1);
          auto b2 = beta(X.A, i0, io);
          // beta(A,i0,i1) = beta(A,i0,i1)_{i1}^{-1} * ... stated with iota1:
          // beta(A,i0,i1) = beta(A,i0,iota1)_{i1}^{-1} beta(A,i0,iota1)
          if (b2[i1] == 0) {
            ok = false;
            break;
          }
          for (int k = 0; k <= r; ++k)
            if (b[k] != b2[k] / b2[i1]) ok = false;
          // beta(A,i1,io) = beta(A,i0,i1)_{io}^{-1}(beta(A,i0,i1)-beta(A,io,i1))
          auto lhs = beta(X.A, i1, io);
          auto bo = beta(X.A, io, i1);
          if (b[io] == 0) {
            ok = false;
            break;
          }
          for (int k = 0; k <= r; ++k)
            if (lhs[k] != (b[k] - bo[k]) / b[io]) ok = false;
        }
      }
    record("betarel", ok);
  }

  // one-parameter law, grading, ideal preservation, restriction presentation
  std::vector<PRoot> hroots;
  if (!P.has_vminus) {
    try {
      for (int i0 = 0; i0 <= r; ++i0)
        for (int i1 = 0; i1 <= r; ++i1) {
          if (i0 == i1) continue;
          for (const auto& root : horizontal_p_roots(P, Side::minus, i0, i1))
            hroots.push_back(root);
        }
    } catch (const NoEllipticSink&) {
    }
  }
  std::vector<PRoot> vroots;
  for (Side side : {Side::plus, Side::minus}) {
    bool exists = side == Side::plus ? P.has_vplus : P.has_vminus;
    if (!exists) continue;
    for (const auto& root : vertical_p_roots(P, side)) vroots.push_back(root);
  }
  std::vector<PRoot> all = hroots;
  all.insert(all.end(), vroots.begin(), vroots.end());
  if (all.empty()) {
    rep.skipped.push_back("per-root laws (no roots)");
  } else {
    bool one_param = true, grading = true, ideal = true, restr = true;
    for (const auto& root : all) {
      Derivation d = lnd_of_root(X, root);
      CoxAutomorphism es = exponential(d, s);
      CoxAutomorphism eq = exponential(d, q);
      CoxAutomorphism esum = exponential(d, s + q);
      if (compose(es, eq).images != esum.images) one_param = false;
      if (!preserves_grading(X, es)) grading = false;
      if (!lnd_preserves_ideal(X, d)) ideal = false;
      if (root.kind == PRoot::Kind::horizontal &&
          !restriction_presentation(X, root).equality_holds)
        restr = false;
    }
    record("one-parameter group law", one_param);
    record("grading preservation", grading);
    record("ideal invariance of derivations", ideal);
    if (hroots.empty())
      rep.skipped.push_back("restriction presentation (no horizontal roots)");
    else
      record("restriction presentation", restr);
  }

  // pairwise-vanishing products of the ambient factors (linformsunuiota iii)
  {
    bool any = false, ok = true;
    for (const auto& root : hroots) {
      auto pres = restriction_presentation(X, root);
      for (size_t a = 0; a < pres.ambient_factors.size(); ++a)
        for (size_t b2 = 0; b2 < pres.ambient_factors.size(); ++b2) {
          if (a == b2) continue;
          any = true;
          Derivation da = ambient_toric_lnd(X, pres.ambient_factors[a].u_nu_iota);
          Derivation db = ambient_toric_lnd(X, pres.ambient_factors[b2].u_nu_iota);
          for (const Poly& img : db.images)
            if (!da.apply(img).is_zero()) ok = false;
        }
    }
    if (any)
      record("ambient factor products vanish", ok);
    else
      rep.skipped.push_back("ambient factor products (no factors)");
  }

  // hor-P-root-rel (i): same gamma across I(P) sinks
  {
    bool any = false, ok = true;
    std::vector<int> IP;
    if (!P.has_vminus && !hroots.empty())
      for (int i = 0; i <= r; ++i)
        if (P.last(i).l == 1) IP.push_back(i);
    for (int i1 : IP) {
      for (int io : IP) {
        if (i1 == io) continue;
        for (int i0 = 0; i0 <= r; ++i0) {
          if (i0 == i1 || i0 == io) continue;
          for (const auto& ra : hroots) {
            if (ra.i0 != i0 || ra.i1 != i1) continue;
            for (const auto& rb : hroots) {
              if (rb.i0 != i0 || rb.i1 != io ||
                  rb.parameter != ra.parameter)
                continue;
              any = true;
              auto bb = beta(X.A, i0, io);
              Derivation da = lnd_of_root(X, ra);
              Derivation db = lnd_of_root(X, rb);
              // beta(A,i0,iota1)_{i1} * delta_{tau(i0,i1,g)} = delta_{tau(i0,iota1,g)}
              for (size_t v = 0; v < da.images.size(); ++v)
                if (da.images[v].scaled(bb[i1]) != db.images[v]) ok = false;
            }
          }
        }
      }
    }
    if (any)
      record("horizontal root relation (i)", ok);
    else
      rep.skipped.push_back("horizontal root relation (i) (not applicable)");
  }

  // hor-P-root-rel (ii): lambda_{tau(i0,i1,1)}(s) =
  //   lambda_{tau(io,i1,1)}(s) prod_nu lambda_{tau(i1,io,nu)}(...)
  {
    bool any = false, ok = true;
    std::vector<int> IP;
    if (!P.has_vminus && !hroots.empty())
      for (int i = 0; i <= r; ++i)
        if (P.last(i).l == 1) IP.push_back(i);
    auto find_root = [&](int a, int b2, const Int& g) -> const PRoot* {
      for (const auto& root : hroots)
        if (root.i0 == a && root.i1 == b2 && root.parameter == g) return &root;
      return nullptr;
    };
    for (int i0 : IP) {
      for (int io : IP) {
        if (i0 == io) continue;
        for (int i1 = 0; i1 <= r; ++i1) {
          if (i1 == i0 || i1 == io) continue;
          const Int l1 = P.last(i1).l;
          const PRoot* base = find_root(i0, i1, Int(1));
          const PRoot* alt = find_root(io, i1, Int(1));
          if (!base || !alt) continue;
          std::vector<const PRoot*> ladder;
          bool complete = true;
          for (Int nu = 1; nu <= l1; ++nu) {
            const PRoot* rn = find_root(i1, io, nu);
            if (!rn) complete = false;
            ladder.push_back(rn);
          }
          if (!complete) continue;
          any = true;
          auto b = beta(X.A, i0, i1);
          CoxAutomorphism lhs = exponential(lnd_of_root(X, *base), s);
          CoxAutomorphism rhs = exponential(lnd_of_root(X, *alt), s);
          for (Int nu = 1; nu <= l1; ++nu) {
            Poly coeff = Poly::variable(nv, vt.s_param(), nu)
                             .scaled(Rat(b[io] * binomial(l1, nu)));
            rhs = compose(
                rhs, exponential(lnd_of_root(X, *ladder[int(nu) - 1]), coeff));
          }
          if (!equal_on_xbar(X, lhs, rhs)) ok = false;
        }
      }
    }
    if (any)
      record("horizontal root relation (ii)", ok);
    else
      rep.skipped.push_back("horizontal root relation (ii) (not applicable)");
  }

  // vert-root-rel: split of a vertical root at D^+
  {
    bool any = false, ok = true;
    for (const auto& root : vroots) {
      if (root.side != Side::plus) continue;
      for (int iota = 0; iota <= r && r >= 2; ++iota) {
        if (pairing(P, root.u, iota, 1) < P.arms[iota][0].l) continue;
        for (int i0 = 0; i0 <= r; ++i0) {
          for (int i1 = 0; i1 <= r; ++i1) {
            if (i0 == i1 || i0 == iota || i1 == iota) continue;
            any = true;
            auto mk = [&](int tgt) {
              PRoot nr = root;
              nr.u = add_eprime(root.u, tgt, iota);
              return nr;
            };
            PRoot r0 = mk(i0), r1 = mk(i1);
            if (!is_vertical_root(P, Side::plus, r0.u) ||
                !is_vertical_root(P, Side::plus, r1.u)) {
              ok = false;
              continue;
            }
            auto b10v = beta(X.A, i1, i0);
            auto b01v = beta(X.A, i0, i1);
            CoxAutomorphism lhs = exponential(lnd_of_root(X, root), s);
            CoxAutomorphism rhs = compose(
                exponential(lnd_of_root(X, r0), s.scaled(b10v[iota])),
                exponential(lnd_of_root(X, r1), s.scaled(b01v[iota])));
            if (!equal_on_xbar(X, lhs, rhs)) ok = false;
          }
        }
      }
    }
    if (any)
      record("vertical root split", ok);
    else
      rep.skipped.push_back("vertical root split (not applicable)");
  }

  return rep;
}

}  // namespace kstar
