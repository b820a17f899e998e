#include "kstar/selftest.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>

#include "kstar/aut_group.hpp"
#include "kstar/cox_action.hpp"
#include "kstar/fixed_points.hpp"
#include "kstar/resolution.hpp"
#include "kstar/roots.hpp"

namespace kstar {

namespace {

const Int kBruteCap = 60;  // box bound above which the oracle scan is skipped

std::set<std::vector<Int>> u_set(const std::vector<PRoot>& roots) {
  std::set<std::vector<Int>> out;
  for (const auto& r : roots) out.insert(r.u);
  return out;
}

struct Runner {
  SelftestSummary& sum;
  std::string tag;

  void pass(const std::string& name) { ++sum.passed[name]; }
  void skip(const std::string& name) { ++sum.skipped[name]; }
  void fail(const std::string& name, const std::string& detail) {
    sum.failures.push_back(tag + ": " + name + ": " + detail);
  }
  void check(const std::string& name, bool ok, const std::string& detail) {
    if (ok)
      pass(name);
    else
      fail(name, detail);
  }
};

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

void check_root_oracles(Runner& run, const DefiningP& P) {
  // horizontal: interval/congruence enumeration vs brute-force box scan
  if (auto Qn = normalized_qse(P)) {
    const DefiningP& Q = *Qn;
    Int bound = brute_force_bound(Q, Side::minus);
    if (bound > kBruteCap) {
      run.skip("oracle horizontal");
    } else {
      auto brute = brute_force_roots(Q, Side::minus, PRoot::Kind::horizontal,
                                     bound);
      bool ok = true;
      for (int i0 = 0; i0 <= Q.r() && ok; ++i0)
        for (int i1 = 0; i1 <= Q.r() && ok; ++i1) {
          if (i0 == i1) continue;
          auto enumerated = u_set(horizontal_p_roots(Q, Side::minus, i0, i1));
          std::set<std::vector<Int>> scanned;
          for (const auto& r : brute)
            for (auto [a, b] : r.tags)
              if (a == i0 && b == i1) scanned.insert(r.u);
          if (enumerated != scanned) ok = false;
        }
      run.check("oracle horizontal", ok, "enumeration differs from box scan");
    }
  } else {
    run.skip("oracle horizontal");
  }
  // vertical, on both oriented curves
  bool any_vertical = false;
  for (Side side : {Side::plus, Side::minus}) {
    bool exists = side == Side::plus ? P.has_vplus : P.has_vminus;
    if (!exists) continue;
    any_vertical = true;
    Int bound = brute_force_bound(P, side);
    if (bound > kBruteCap) {
      run.skip("oracle vertical");
      continue;
    }
    auto enumerated = u_set(vertical_p_roots(P, side));
    auto scanned =
        u_set(brute_force_roots(P, side, PRoot::Kind::vertical, bound));
    run.check("oracle vertical", enumerated == scanned,
              "enumeration differs from box scan");
  }
  if (!any_vertical) run.skip("oracle vertical");
}

void check_interval_identity(Runner& run, const DefiningP& P) {
  for (Side side : {Side::minus, Side::plus}) {
    bool elliptic = side == Side::minus ? !P.has_vminus : !P.has_vplus;
    if (!elliptic) {
      run.skip("interval identity");
      continue;
    }
    DefiningP Q0 = side == Side::minus ? P : negate_last_row(P);
    auto [Q, log] = adapt(Q0, AdaptMode::sink);
    RootIntervals iv = intervals(Q);
    IntersectionTable tab = self_intersections(Q);
    auto mut = mutual_intersections(Q, Side::minus);
    Scalars sc = scalars(Q);
    bool ok = true;
    for (int i = 0; i <= Q.r(); ++i)
      for (int k = 0; k <= Q.r(); ++k) {
        if (i == k) continue;
        Rat lhs = iv.eta[k] - iv.xi[i];
        // the identity is in sink-side terms: when an n_i = 1 curve also runs
        // into an elliptic source, drop the source contribution 1/(l^2 m+)
        // from its self-intersection number (and the mutual numbers here are
        // the sink-local ones)
        Rat self = tab.self.at({i, Q.n(i)});
        if (Q.n(i) == 1 && !Q.has_vplus)
          self -= 1 / (Rat(Int(Q.last(i).l * Q.last(i).l)) * sc.m_plus);
        Rat rhs = Rat(Q.last(i).l) * self +
                  Rat(Int(Q.last(i).l - Q.last(k).l)) * mut.at({i, k});
        if (lhs != rhs) ok = false;
      }
    run.check("interval identity", ok, "eta_k - xi_i mismatch");
  }
}

void check_resolution(Runner& run, const DefiningP& P) {
  ResolutionOutput res = minimal_resolution(P);
  run.check("resolution smooth", fixed_point_report(res.resolved).all_smooth(),
            "minimal resolution not smooth");
  IntersectionTable tab = self_intersections(res.resolved);
  // exceptional curves end at <= -2; a -1 curve may persist only over a
  // non-quasismooth elliptic point (contracting it would recreate one)
  bool ok = true;
  for (const auto& [point, cols] : res.fibers)
    for (auto [arm, j] : cols) {
      if (arm < 0) continue;  // parabolic curves are not chain members
      Rat e2 = tab.self.at({arm, j});
      if (e2 > -2 && !(e2 == -1 && (point == "x-" || point == "x+"))) ok = false;
    }
  run.check("resolution minimal", ok, "exceptional curve with E^2 > -2");
  bool uni = true;
  const DefiningP& R = res.resolved;
  for (int i = 0; i <= R.r(); ++i) {
    std::vector<LatticeVec2> chain;
    if (R.has_vplus) chain.push_back({0, 1});
    for (const auto& e : R.arms[i]) chain.push_back({e.l, e.d});
    if (R.has_vminus) chain.push_back({0, -1});
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
      if (det2(chain[k + 1], chain[k]) != 1) uni = false;
  }
  run.check("resolution unimodular chains", uni,
            "adjacent columns not unimodular");
}

Rat cf_eval(const std::vector<Rat>& a, std::size_t k = 0) {
  if (k + 1 == a.size()) return a[k];
  return a[k] - 1 / cf_eval(a, k + 1);
}

void check_smooth_lemmas(Runner& run, const DefiningP& P) {
  DefiningP R = minimal_resolution(P).resolved;
  if (!R.has_vplus) {
    run.skip("smooth chain identity");
    run.skip("smooth cf identity");
    run.skip("intersection roundtrip");
    return;
  }
  auto [Q, log] = adapt(R, AdaptMode::source);
  IntersectionTable tab = self_intersections(Q);
  // three-term recursion along each unimodular chain
  bool chain_ok = true;
  for (int i = 0; i <= Q.r(); ++i) {
    std::vector<LatticeVec2> chain;
    chain.push_back({0, 1});
    for (const auto& e : Q.arms[i]) chain.push_back({e.l, e.d});
    if (Q.has_vminus) chain.push_back({0, -1});
    for (int j = 1; j <= Q.n(i); ++j) {
      std::size_t k = static_cast<std::size_t>(j);
      if (k + 1 >= chain.size()) continue;  // innermost column of a sink arm
      Rat d2 = tab.self.at({i, j});
      if (Rat(Int(chain[k - 1].x + chain[k + 1].x)) != -d2 * Rat(chain[k].x) ||
          Rat(Int(chain[k - 1].y + chain[k + 1].y)) != -d2 * Rat(chain[k].y))
        chain_ok = false;
    }
  }
  run.check("smooth chain identity", chain_ok,
            "v_{j-1} + v_{j+1} != -D^2 v_j");
  // (D+)^2 through slopes and the continued fractions of the arm chains
  Scalars sc = scalars(Q);
  Rat sum = 0;
  for (int i = 0; i <= Q.r(); ++i) {
    sum -= sc.m[i][Q.n(i) - 1];
    if (Q.n(i) > 1) {
      std::vector<Rat> a;
      for (int j = 1; j < Q.n(i); ++j) a.push_back(Rat(-tab.self.at({i, j})));
      sum -= 1 / cf_eval(a);
    }
  }
  run.check("smooth cf identity", sum == *tab.dplus_sq,
            "(D+)^2 mismatch with continued-fraction expression");
  std::vector<std::vector<Rat>> arms;
  for (int i = 0; i <= Q.r(); ++i) {
    std::vector<Rat> a;
    for (int j = 1; j <= Q.n(i); ++j) a.push_back(tab.self.at({i, j}));
    arms.push_back(a);
  }
  run.check("intersection roundtrip",
            reconstruct_from_intersections(arms, *tab.dplus_sq,
                                           Q.has_vminus) == Q,
            "reconstruction does not return the input");
}

void check_root_lifting(Runner& run, const DefiningP& P) {
  DefiningP R = minimal_resolution(P).resolved;
  bool any_h = false, any_v = false;
  bool ok_h = true, ok_v = true;
  for (Side side : {Side::minus, Side::plus}) {
    bool e_P = side == Side::minus ? !P.has_vminus : !P.has_vplus;
    bool e_R = side == Side::minus ? !R.has_vminus : !R.has_vplus;
    if (e_P && e_R) {
      any_h = true;
      for (int i0 = 0; i0 <= P.r(); ++i0)
        for (int i1 = 0; i1 <= P.r(); ++i1) {
          if (i0 == i1) continue;
          if (u_set(horizontal_p_roots(P, side, i0, i1)) !=
              u_set(horizontal_p_roots(R, side, i0, i1)))
            ok_h = false;
        }
    }
    if (!e_P && !e_R) {
      any_v = true;
      if (u_set(vertical_p_roots(P, side)) != u_set(vertical_p_roots(R, side)))
        ok_v = false;
    }
  }
  if (any_h)
    run.check("horizontal root lifting", ok_h,
              "root sets of P and its minimal resolution differ");
  else
    run.skip("horizontal root lifting");
  if (any_v)
    run.check("vertical root lifting", ok_v,
              "root sets of P and its minimal resolution differ");
  else
    run.skip("vertical root lifting");
}

void check_exclusions(Runner& run, const DefiningP& P) {
  // a quasismooth simple elliptic point excludes vertical roots entirely
  int qse_count = 0;
  for (Side side : {Side::minus, Side::plus}) {
    bool elliptic = side == Side::minus ? !P.has_vminus : !P.has_vplus;
    if (!elliptic) continue;
    DefiningP Q = side == Side::minus ? P : negate_last_row(P);
    try {
      if (is_simple_elliptic(Q, Side::minus).simple) ++qse_count;
    } catch (const NotQuasismooth&) {
    }
  }
  run.check("at most one qse point", qse_count <= 1, "two qse points");
  if (qse_count >= 1) {
    bool ok = true;
    for (Side side : {Side::plus, Side::minus}) {
      bool exists = side == Side::plus ? P.has_vplus : P.has_vminus;
      if (exists && !vertical_p_roots(P, side).empty()) ok = false;
    }
    run.check("qse excludes vertical roots", ok,
              "vertical roots next to a qse point");
  } else {
    run.skip("qse excludes vertical roots");
  }
  if (P.has_vplus && P.has_vminus) {
    if (!vertical_p_roots(P, Side::plus).empty())
      run.check("vertical roots on one side only",
                vertical_p_roots(P, Side::minus).empty(),
                "roots at both parabolic curves");
    else
      run.skip("vertical roots on one side only");
  } else {
    run.skip("vertical roots on one side only");
  }
}

void check_cox_action(Runner& run, const KStarSurface& X) {
  RelationReport rep = relation_suite(X);
  if (rep.failed.empty()) {
    run.pass("cox relation suite");
  } else {
    std::ostringstream os;
    for (const auto& f : rep.failed) os << f << "; ";
    run.fail("cox relation suite", os.str());
  }
  // sampled ideal invariance of generating root groups
  GeneratingRootSet g = generating_root_set(X.P);
  if (g.roots.empty()) {
    run.skip("sampled ideal invariance");
    return;
  }
  KStarSurface Xp{g.prepared, canonical_A(g.prepared.r() + 1)};
  VarTable vt(Xp.P);
  Poly s = Poly::variable(vt.nvars(), vt.s_param());
  int done = 0;
  for (const auto& root : g.roots) {
    if (done >= 2) break;
    CoxAutomorphism a = exponential(lnd_of_root(Xp, root), s);
    try {
      run.check("sampled ideal invariance", ideal_invariance(Xp, a, 10, Rat(1)),
                "root group moved a sampled point off the surface");
      ++done;
    } catch (const SamplingFailed&) {
      run.skip("sampled ideal invariance");
      break;
    }
  }
}

void check_aut_group(Runner& run, const DefiningP& P) {
  AutStructure aut;
  try {
    aut = aut0_structure(P);
  } catch (const FormulaMismatch& e) {
    run.fail("aut formulas", e.what());
    return;
  }
  run.pass("aut formulas");
  Classification c = classify(P);
  run.check("classify iff horizontal roots",
            c.almost_homogeneous ==
                (aut.kind == AutStructure::Case::Horizontal &&
                 aut.rho + aut.zeta >= 1),
            "almost-homogeneity flag disagrees with the root data");
  run.check("phi presence", aut.phi.has_value() == (aut.zeta == 1),
            "phi matrix present without zeta");
  if (aut.kind == AutStructure::Case::Horizontal && aut.rho >= 2) {
    const Int l1 = aut.roots.prepared.last(1).l;
    bool ladder = true;
    for (int k = 1; k < aut.rho; ++k)
      if (aut.psi_exponents[k] != Int(aut.psi_exponents[0] - Int(k) * l1))
        ladder = false;
    run.check("psi ladder", ladder, "psi exponents not arithmetic");
  } else {
    run.skip("psi ladder");
  }
  if (aut.phi && aut.phi->dim >= 1 && aut.phi->dim <= 6) {
    Poly s = Poly::variable(2, 0);
    Poly t = Poly::variable(2, 1);
    auto Ms = aut.phi->symbolic(s);
    auto Mt = aut.phi->symbolic(t);
    auto Mst = aut.phi->symbolic(s + t);
    bool ok = true;
    for (int i = 0; i < aut.phi->dim; ++i)
      for (int j = 0; j < aut.phi->dim; ++j) {
        Poly acc(2);
        for (int k = 0; k < aut.phi->dim; ++k) acc = acc + Ms[i][k] * Mt[k][j];
        if (!(acc == Mst[i][j])) ok = false;
      }
    run.check("phi group law", ok, "phi(s)phi(t) != phi(s+t)");
  } else {
    run.skip("phi group law");
  }
}

std::vector<KStarSurface> fixture_pool() {
  std::vector<KStarSurface> out;
  KStarSurface running;
  running.P.arms = {{{7, -4}}, {{2, 1}}, {{1, 1}, {1, 0}}};
  running.A = canonical_A(3);
  out.push_back(running);
  const std::vector<std::pair<long, long>> pairs = {{2, 1}, {3, 2}, {4, 3},
                                                    {5, 2}, {5, 3}, {7, 2}};
  for (auto [l0, l1] : pairs) {
    long d0 = 0;
    while ((l1 * d0 + 1) % l0 != 0) ++d0;
    long d1 = (-1 - l1 * d0) / l0;
    KStarSurface X;
    X.P.arms = {{{1, 1}, {Int(l0), Int(d0)}},
                {{1, 1}, {Int(l1), Int(d1)}},
                {{1, 1}, {1, 0}}};
    X.A = canonical_A(3);
    if (is_valid(X.P)) out.push_back(std::move(X));
  }
  return out;
}

}  // namespace

SelftestSummary run_property_suite(std::uint64_t seed, int count,
                                   const RandomBounds& bounds, bool verbose) {
  SelftestSummary sum;
  std::vector<std::pair<std::string, KStarSurface>> pool;
  int fixture_no = 0;
  for (auto& X : fixture_pool())
    pool.emplace_back("fixture " + std::to_string(fixture_no++), std::move(X));
  for (int k = 0; k < count; ++k) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    pool.emplace_back("seed " + std::to_string(s), random_instance(s, bounds));
  }
  for (auto& [tag, X] : pool) {
    if (verbose) std::cerr << "[selftest] " << tag << "\n";
    Runner run{sum, tag};
    ++sum.instances;
    try {
      check_root_oracles(run, X.P);
      check_interval_identity(run, X.P);
      check_resolution(run, X.P);
      check_smooth_lemmas(run, X.P);
      check_root_lifting(run, X.P);
      check_exclusions(run, X.P);
      check_cox_action(run, X);
      check_aut_group(run, X.P);
    } catch (const std::exception& e) {
      run.fail("unexpected exception", e.what());
    }
  }
  return sum;
}

}  // namespace kstar
