#include "kstar/aut_group.hpp"

#include <algorithm>
#include <sstream>

#include "kstar/fixed_points.hpp"
#include "kstar/resolution.hpp"

namespace kstar {

// ---------------------------------------------------------------------------
// PhiMatrix
// ---------------------------------------------------------------------------

Int PhiMatrix::coeff(int mu, int alpha) const {
  if (alpha < mu) return Int(0);
  return binomial(Int(alpha - 1), Int(mu - 1));
}

Int PhiMatrix::power(int mu, int alpha) const {
  return alpha < mu ? Int(0) : Int(alpha - mu);
}

std::vector<std::vector<Rat>> PhiMatrix::evaluate(const Rat& s) const {
  std::vector<std::vector<Rat>> out(dim, std::vector<Rat>(dim, Rat(0)));
  for (int mu = 1; mu <= dim; ++mu)
    for (int alpha = mu; alpha <= dim; ++alpha) {
      Rat v(coeff(mu, alpha));
      for (Int k = 0; k < power(mu, alpha); ++k) v *= s;
      out[mu - 1][alpha - 1] = v;
    }
  return out;
}

std::vector<std::vector<Poly>> PhiMatrix::symbolic(const Poly& s) const {
  std::vector<std::vector<Poly>> out(
      dim, std::vector<Poly>(dim, Poly(s.nvars())));
  for (int mu = 1; mu <= dim; ++mu)
    for (int alpha = mu; alpha <= dim; ++alpha)
      out[mu - 1][alpha - 1] =
          s.pow(power(mu, alpha)).scaled(Rat(coeff(mu, alpha)));
  return out;
}

// ---------------------------------------------------------------------------
// aut0_structure
// ---------------------------------------------------------------------------

namespace {

void require_usable(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("defining data is invalid");
  if (!is_irredundant(P)) throw InvalidInput("defining data is redundant");
  if (is_toric(P)) throw ToricInput("defining data is toric");
}

// min over i != 0 of l_i D_i^2 + (l_i - l_1) D_i.D_1 on normalized data.
Rat horizontal_min_term(const DefiningP& P) {
  IntersectionTable tab = self_intersections(P);
  auto mut = mutual_intersections(P, Side::minus);
  const Int l1 = P.last(1).l;
  std::optional<Rat> best;
  for (int i = 1; i <= P.r(); ++i) {
    Rat term = Rat(P.last(i).l) * tab.self.at({i, P.n(i)});
    if (i != 1) term += Rat(Int(P.last(i).l - l1)) * mut.at({i, 1});
    if (!best || term < *best) best = term;
  }
  return *best;
}

Int count_from_inner(const Rat& inner) {
  Int c = Int(rat_floor(inner) + 1);
  return c < 0 ? Int(0) : c;
}

std::string presentation_string(int rho, int zeta) {
  std::ostringstream os;
  os << "(K^" << rho << " ⋊_phi K^" << zeta << ") ⋊_psi K*";
  return os.str();
}

// Sink-adapted, normalized data of the side carrying a quasismooth simple
// elliptic fixed point, if any.
std::optional<DefiningP> normalized_qse(const DefiningP& P) {
  for (Side side : {Side::minus, Side::plus}) {
    bool elliptic = side == Side::minus ? !P.has_vminus : !P.has_vplus;
    if (!elliptic) continue;
    DefiningP Q = side == Side::minus ? P : negate_last_row(P);
    bool simple = false;
    try {
      simple = is_simple_elliptic(Q, Side::minus).simple;
    } catch (const NotQuasismooth&) {
      simple = false;
    }
    if (!simple) continue;
    auto [Qa, log] = adapt(Q, AdaptMode::sink);
    auto [Qn, perm] = normalize(Qa);
    return Qn;
  }
  return std::nullopt;
}

}  // namespace

AutStructure aut0_structure(const DefiningP& P) {
  require_usable(P);
  AutStructure out;
  out.roots = generating_root_set(P);
  const GeneratingRootSet& g = out.roots;

  if (g.kind == GeneratingRootSet::Kind::horizontal) {
    out.kind = AutStructure::Case::Horizontal;
    const DefiningP& Q = g.prepared;
    const Int l0 = Q.last(0).l;
    const Int l1 = Q.last(1).l;
    std::vector<Int> gammas;
    bool zeta_enum = false;
    for (const auto& root : g.roots) {
      if (root.i0 == 0 && root.i1 == 1)
        gammas.push_back(root.parameter);
      else if (root.i0 == 1 && root.i1 == 0)
        zeta_enum = true;
    }
    std::sort(gammas.rbegin(), gammas.rend());
    out.rho = static_cast<int>(gammas.size());
    out.zeta = zeta_enum ? 1 : 0;

    // closed formulas, both floor placements of c(x^-)
    Rat min_term = horizontal_min_term(Q);
    Rat c = c_minus(Q);
    Int count_outside = count_from_inner(min_term / Rat(l1) - c);
    Int count_inside = count_from_inner((min_term - c) / Rat(l1));
    if (count_outside != count_inside) {
      std::ostringstream os;
      os << "floor-placement readings differ (" << count_outside << " vs "
         << count_inside << "); enumeration value " << out.rho << " reported";
      out.notes.push_back(os.str());
    }
    if (Int(out.rho) != count_outside && Int(out.rho) != count_inside)
      throw FormulaMismatch("horizontal root count formula disagrees with "
                            "enumeration");
    if (horizontal_root_count(Q) != Rat(out.rho) &&
        Int(out.rho) != count_inside)
      throw FormulaMismatch("horizontal count helper disagrees");
    if (has_root_at_10(Q) != zeta_enum)
      throw FormulaMismatch("zeta criterion disagrees with enumeration");

    // psi ladder: strictly decreasing gammas with common difference l_{1n1}
    for (size_t k = 1; k < gammas.size(); ++k)
      if (gammas[k] != Int(gammas[0] - Int(k) * l1))
        throw FormulaMismatch("gamma ladder is not arithmetic");
    if (!gammas.empty()) {
      if (out.zeta == 1) {
        if (gammas[0] != l0)
          throw FormulaMismatch("leading psi exponent differs from l_{0n0}");
      } else {
        DefiningP resolved = minimal_resolution(Q).resolved;
        if (gammas[0] != resolved.last(0).l)
          throw FormulaMismatch(
              "leading psi exponent differs from resolved l_{0n0}");
      }
    }
    out.psi_exponents = gammas;
    if (out.zeta == 1) {
      out.psi_exponents.push_back(l1);
      out.phi = PhiMatrix{out.rho};
    }
  } else if (g.kind == GeneratingRootSet::Kind::vertical) {
    out.kind = AutStructure::Case::Vertical;
    const DefiningP& Q = g.prepared;
    out.rho = static_cast<int>(g.roots.size());
    out.zeta = 0;
    // theorem formula (D^+)^2 + 1 - sum c_i(D^+), and the count helper
    IntersectionTable tab = self_intersections(Q);
    Rat direct = *tab.dplus_sq + 1;
    for (int i = 0; i <= Q.r(); ++i) direct -= c_plus(Q, i);
    if (direct < 0) direct = Rat(0);
    if (direct != Rat(out.rho) || vertical_root_count(Q) != Rat(out.rho))
      throw FormulaMismatch("vertical root count formula disagrees with "
                            "enumeration");
    out.psi_exponents.assign(out.rho, Int(-1));
  } else {
    out.kind = AutStructure::Case::NoRoots;
    out.rho = 0;
    out.zeta = 0;
    // assert the closed formulas also give zero wherever they apply
    for (Side side : {Side::plus, Side::minus}) {
      bool exists = side == Side::plus ? P.has_vplus : P.has_vminus;
      if (!exists) continue;
      DefiningP Q = side == Side::plus ? P : negate_last_row(P);
      auto [Qa, log] = adapt(Q, AdaptMode::sink);
      if (vertical_root_count(Qa) != 0)
        throw FormulaMismatch("vertical formula positive without roots");
    }
    if (auto Qn = normalized_qse(P)) {
      if (horizontal_root_count(*Qn) != 0 || has_root_at_10(*Qn))
        throw FormulaMismatch("horizontal formula positive without roots");
    }
  }
  out.presentation = presentation_string(out.rho, out.zeta);
  return out;
}

// ---------------------------------------------------------------------------
// toric_aut0
// ---------------------------------------------------------------------------

namespace {

Int ray_det(const LatticeVec2& a, const LatticeVec2& b) {
  return Int(a.x * b.y - a.y * b.x);
}

bool is_p2_fan(const std::vector<LatticeVec2>& v) {
  if (v.size() != 3) return false;
  if (Int(v[0].x + v[1].x + v[2].x) != 0) return false;
  if (Int(v[0].y + v[1].y + v[2].y) != 0) return false;
  for (int i = 0; i < 3; ++i) {
    Int d = ray_det(v[i], v[(i + 1) % 3]);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

bool is_p1p1_fan(const std::vector<LatticeVec2>& v) {
  if (v.size() != 4) return false;
  for (int i = 0; i < 2; ++i)
    if (Int(v[i].x + v[i + 2].x) != 0 || Int(v[i].y + v[i + 2].y) != 0)
      return false;
  Int d = ray_det(v[0], v[1]);
  return d == 1 || d == -1;
}

}  // namespace

ToricAutReport toric_aut0(const Fan2D& fan) {
  ToricAutReport out;
  out.roots = toric_demazure_roots(fan);
  for (const auto& [ray, list] : out.roots) {
    if (list.empty()) continue;
    ++out.ell;
    out.rho += Int(list.size());
  }
  std::ostringstream os;
  if (out.ell == 0) {
    out.shape = ToricAutReport::Shape::torus;
    out.structure = "T^2";
  } else if (out.ell == 1) {
    out.shape = ToricAutReport::Shape::one_line;
    os << "K^" << out.rho << " ⋊_psi1 T^2";
    out.structure = os.str();
    for (Int k = 0; k < out.rho; ++k)
      out.psi_pairs.emplace_back(Int(-1), Int(0));
  } else if (out.ell == 2) {
    out.shape = ToricAutReport::Shape::two_lines;
    Int rho = Int(out.rho - 1);
    os << "(K^" << rho << " ⋊_phi K) ⋊_psi2 T^2";
    out.structure = os.str();
    for (Int k = 0; k < rho; ++k)
      out.psi_pairs.emplace_back(Int(k), Int(-1));
    out.psi_pairs.emplace_back(Int(-1), Int(0));
  } else if (is_p2_fan(fan.generators)) {
    out.shape = ToricAutReport::Shape::pgl3;
    out.structure = "PGL_3(K)";
  } else if (is_p1p1_fan(fan.generators)) {
    out.shape = ToricAutReport::Shape::pgl2xpgl2;
    out.structure = "PGL_2(K) x PGL_2(K)";
  } else if (out.ell == 3) {
    out.shape = ToricAutReport::Shape::p11b_zb;
    out.b = Int(out.rho - 3);
    os << "(K^" << Int(out.b + 1) << " ⋊_phi' K^2) ⋊_psi3 T^2";
    out.structure = os.str();
    for (Int k = 0; k <= out.b; ++k)
      out.psi_pairs.emplace_back(Int(k), Int(1 - k));
    out.psi_pairs.emplace_back(Int(1), Int(-1));
    out.psi_pairs.emplace_back(Int(-1), Int(1));
  } else {
    throw std::logic_error("toric_aut0: ray configuration outside the table");
  }
  return out;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

Classification classify(const DefiningP& P) {
  AutStructure aut = aut0_structure(P);
  Classification out;
  auto Qn = normalized_qse(P);
  if (Qn) {
    const DefiningP& Q = *Qn;
    IntersectionTable tab = self_intersections(Q);
    auto mut = mutual_intersections(Q, Side::minus);
    const Int l0 = Q.last(0).l;
    const Int l1 = Q.last(1).l;
    Rat c = c_minus(Q);
    out.series_one_holds = true;
    for (int i = 1; i <= Q.r(); ++i) {
      Rat lhs = Rat(Q.last(i).l) * tab.self.at({i, Q.n(i)});
      if (i != 1) lhs += Rat(Int(Q.last(i).l - l1)) * mut.at({i, 1});
      if (lhs < Rat(l1) * c) out.series_one_holds = false;
    }
    out.series_two_holds = true;
    for (int i = 0; i <= Q.r(); ++i) {
      if (i == 1) continue;
      Rat lhs = Rat(Q.last(i).l) * tab.self.at({i, Q.n(i)});
      Rat rhs = i == 0 ? Rat(0) : Rat(Int(l0 - Q.last(i).l)) * mut.at({i, 0});
      if (lhs < rhs) out.series_two_holds = false;
    }
    bool horizontal = aut.kind == AutStructure::Case::Horizontal;
    if (out.series_one_holds != (horizontal && aut.rho >= 1))
      throw FormulaMismatch("series one disagrees with rho >= 1");
    if (out.series_two_holds != (horizontal && aut.zeta == 1))
      throw FormulaMismatch("series two disagrees with zeta = 1");
    if (out.series_one_holds) {
      Classification::GroupDescriptor gd;
      gd.name = "K ⋊ K*";
      gd.twist_exponent = l1;
      gd.isotropy_order = l0;
      gd.compactification = l0 == 1;
      out.groups.push_back(gd);
    }
    if (out.series_two_holds) {
      Classification::GroupDescriptor gd;
      gd.name = "K ⋊ K*";
      gd.twist_exponent = l0;
      gd.isotropy_order = l1;
      gd.compactification = l1 == 1;
      out.groups.push_back(gd);
    }
    out.equivariant_compactification_of_K2 =
        out.series_one_holds && out.series_two_holds;
    if (aut.rho >= 1 && aut.zeta == 1 && horizontal)
      out.additive_action_families =
          (l0 == Int(aut.rho) && l1 == 1) ? "one-parameter" : "two-parameter";
    else
      out.additive_action_families = "none";
  } else {
    out.additive_action_families = "none";
  }
  out.almost_homogeneous = out.series_one_holds || out.series_two_holds;
  return out;
}

// ---------------------------------------------------------------------------
// subgroup_catalog
// ---------------------------------------------------------------------------

SubgroupCatalog subgroup_catalog(const DefiningP& P) {
  AutStructure aut = aut0_structure(P);
  if (aut.kind != AutStructure::Case::Horizontal)
    throw NotHorizontal("subgroup catalog requires the horizontal case");
  const DefiningP& Q = aut.roots.prepared;
  const Int l0 = Q.last(0).l;
  const Int l1 = Q.last(1).l;
  SubgroupCatalog out;
  for (int k = 1; k <= aut.rho + aut.zeta; ++k) {
    SubgroupCatalog::Gk g;
    g.k = k;
    g.twist_exponent = aut.psi_exponents[k - 1];
    g.isotropy_order = k <= aut.rho ? l1 : l0;
    out.gk.push_back(g);
  }
  out.has_timos = l0 == Int(aut.rho) && l1 == 1;
  if (out.has_timos) {
    for (int k = 1; k <= aut.rho; ++k)
      out.w.push_back(Rat(binomial(Int(aut.rho - 1), Int(k - 1)),
                          Int(aut.rho - k + 1)));
  }
  out.has_v_family = aut.rho > 1 && aut.zeta == 1;
  out.has_k2 = aut.rho >= 1 && aut.zeta == 1;
  out.one_parameter_family = out.has_timos;
  return out;
}

}  // namespace kstar
