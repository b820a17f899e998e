#include "kstar/resolution.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace kstar {

namespace {

struct Working {
  DefiningP P;
  std::vector<std::vector<ColumnOrigin>> origin;  // parallel to P.arms
  std::optional<ColumnOrigin> vplus_origin, vminus_origin;
};

ColumnOrigin original_col(int arm, int index) {
  ColumnOrigin o;
  o.kind = ColumnOrigin::Kind::original;
  o.arm = arm;
  o.index = index;
  return o;
}

ColumnOrigin exceptional_col(std::string over) {
  ColumnOrigin o;
  o.kind = ColumnOrigin::Kind::exceptional;
  o.over = std::move(over);
  return o;
}

ResolutionOutput finish(const Working& w) {
  ResolutionOutput out;
  out.resolved = w.P;
  for (int i = 0; i <= w.P.r(); ++i)
    for (int j = 1; j <= w.P.n(i); ++j) {
      const ColumnOrigin& o = w.origin[i][j - 1];
      out.column_map.push_back(o);
      if (o.kind == ColumnOrigin::Kind::exceptional)
        out.fibers[o.over].push_back({i, j});
    }
  auto flag_col = [&](const std::optional<ColumnOrigin>& o, int sign) {
    if (!o) return;
    out.column_map.push_back(*o);
    if (o->kind == ColumnOrigin::Kind::exceptional)
      out.fibers[o->over].push_back({-1, sign});
  };
  flag_col(w.vplus_origin, 1);
  flag_col(w.vminus_origin, -1);
  return out;
}

// Interior Hilbert-basis members of the cone between two consecutive plane
// vectors a (higher slope) and b (lower slope), returned in decreasing slope.
std::vector<LatticeVec2> interior_members(const LatticeVec2& a,
                                          const LatticeVec2& b) {
  auto hb = hilbert_basis_2d(b, a);
  std::vector<LatticeVec2> inner(hb.begin() + 1, hb.end() - 1);
  std::reverse(inner.begin(), inner.end());
  return inner;
}

}  // namespace

ResolutionOutput canonical_resolution(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("canonical_resolution: invalid data");
  if (!is_irredundant(P))
    throw InvalidInput("canonical_resolution: redundant data");
  Working w;
  w.P.has_vplus = w.P.has_vminus = true;
  w.P.arms.resize(P.r() + 1);
  w.origin.resize(P.r() + 1);
  w.vplus_origin =
      P.has_vplus ? original_col(-1, 1) : exceptional_col("x+");
  w.vminus_origin =
      P.has_vminus ? original_col(-1, -1) : exceptional_col("x-");
  for (int i = 0; i <= P.r(); ++i) {
    // plane vectors of the arm chain, source boundary to sink boundary
    std::vector<LatticeVec2> chain;
    chain.push_back({0, 1});
    for (const auto& e : P.arms[i]) chain.push_back({e.l, e.d});
    chain.push_back({0, -1});
    auto over_id = [&](size_t k) -> std::string {
      // id of the input fixed point under the cone (chain[k], chain[k+1])
      if (k == 0)
        return P.has_vplus ? "x_" + std::to_string(i) + "^+" : "x+";
      if (k + 2 == chain.size())
        return P.has_vminus ? "x_" + std::to_string(i) + "^-" : "x-";
      return "tau_{" + std::to_string(i) + "," + std::to_string(k) + "}";
    };
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      if (k > 0) {
        w.P.arms[i].push_back(P.arms[i][k - 1]);
        w.origin[i].push_back(original_col(i, static_cast<int>(k)));
      }
      for (const auto& m : interior_members(chain[k], chain[k + 1])) {
        w.P.arms[i].push_back({m.x, m.y});
        w.origin[i].push_back(exceptional_col(over_id(k)));
      }
    }
  }
  if (!is_valid(w.P))
    throw std::logic_error("canonical_resolution: output invalid");
  if (!detail::basic_report(w.P).all_smooth())
    throw std::logic_error("canonical_resolution: output not smooth");
  return finish(w);
}

namespace {

// Remove one contractible (-1)-curve of exceptional provenance, if any.
bool contract_one(Working& w) {
  auto table = self_intersections(w.P);
  auto try_arm_removal = [&](int i, int j) {
    DefiningP Q = w.P;
    Q.arms[i].erase(Q.arms[i].begin() + (j - 1));
    if (Q.arms[i].empty() || !is_valid(Q)) return false;
    if (!detail::basic_report(Q).all_smooth()) return false;
    w.P = Q;
    w.origin[i].erase(w.origin[i].begin() + (j - 1));
    return true;
  };
  for (int i = 0; i <= w.P.r(); ++i)
    for (int j = w.P.n(i); j >= 1; --j) {
      if (w.origin[i][j - 1].kind != ColumnOrigin::Kind::exceptional) continue;
      if (table.self.at({i, j}) != -1) continue;
      if (try_arm_removal(i, j)) return true;
    }
  auto try_flag_removal = [&](bool plus) {
    DefiningP Q = w.P;
    (plus ? Q.has_vplus : Q.has_vminus) = false;
    if (!is_valid(Q) || !detail::basic_report(Q).all_smooth()) return false;
    w.P = Q;
    (plus ? w.vplus_origin : w.vminus_origin).reset();
    return true;
  };
  if (w.vplus_origin &&
      w.vplus_origin->kind == ColumnOrigin::Kind::exceptional &&
      table.dplus_sq == Rat(-1) && try_flag_removal(true))
    return true;
  if (w.vminus_origin &&
      w.vminus_origin->kind == ColumnOrigin::Kind::exceptional &&
      table.dminus_sq == Rat(-1) && try_flag_removal(false))
    return true;
  return false;
}

}  // namespace

ResolutionOutput minimal_resolution(const DefiningP& P) {
  ResolutionOutput canon = canonical_resolution(P);
  Working w;
  w.P = canon.resolved;
  w.origin.resize(w.P.r() + 1);
  size_t pos = 0;
  for (int i = 0; i <= w.P.r(); ++i)
    for (int j = 1; j <= w.P.n(i); ++j) w.origin[i].push_back(canon.column_map[pos++]);
  w.vplus_origin = canon.column_map[pos++];
  w.vminus_origin = canon.column_map[pos++];
  while (contract_one(w)) {
  }
  return finish(w);
}

ResolutionOutput resolve_sink_chart(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("resolve_sink_chart: invalid data");
  if (P.has_vminus)
    throw NoEllipticFixedPoint("resolve_sink_chart: sink is parabolic");
  FixedPointReport rep = detail::basic_report(P);
  if (!rep.elliptic_minus.quasismooth)
    throw NotQuasismooth("resolve_sink_chart: x- is not quasismooth");
  auto [Q, log] = adapt(P, AdaptMode::sink);
  auto [i0, i1] = leading_indices(Q, Side::minus);
  // zero the arm-0 end slope when arm 0 is not a leading arm, so the leading
  // cone determinant is -l^-m^- > 0
  Int extra_shift = 0;
  int shift_arm = -1;
  if (i0 != 0 && i1 != 0 && Q.last(0).d != 0) {
    extra_shift = Q.last(0).d;  // l_{0n_0} = 1 here
    shift_arm = i0;
    for (auto& e : Q.arms[shift_arm]) e.d += extra_shift * e.l;
    for (auto& e : Q.arms[0]) e.d -= extra_shift * e.l;
  }
  LatticeVec2 v0{-Q.last(i0).l, Q.last(i0).d};
  LatticeVec2 v1{Q.last(i1).l, Q.last(i1).d};
  if (det2(v0, v1) <= 0)
    throw std::logic_error("resolve_sink_chart: leading cone degenerate");
  Working w;
  w.P = Q;
  w.origin.resize(Q.r() + 1);
  for (int i = 0; i <= Q.r(); ++i)
    for (int j = 1; j <= Q.n(i); ++j) w.origin[i].push_back(original_col(i, j));
  if (Q.has_vplus) w.vplus_origin = original_col(-1, 1);
  for (const auto& m : hilbert_basis_2d(v0, v1)) {
    if (m == v0 || m == v1) continue;
    if (m.x < 0) {
      w.P.arms[i0].push_back({-m.x, m.y});
      w.origin[i0].push_back(exceptional_col("x-"));
    } else if (m.x > 0) {
      w.P.arms[i1].push_back({m.x, m.y});
      w.origin[i1].push_back(exceptional_col("x-"));
    } else {
      w.P.has_vminus = true;
      w.vminus_origin = exceptional_col("x-");
    }
  }
  // restore slope order within the two extended arms, carrying provenance
  for (int i : {i0, i1}) {
    std::vector<size_t> ord(w.P.arms[i].size());
    std::iota(ord.begin(), ord.end(), size_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](size_t a, size_t b) {
      return w.P.arms[i][a].slope() > w.P.arms[i][b].slope();
    });
    Arm arm;
    std::vector<ColumnOrigin> org;
    for (size_t k : ord) {
      arm.push_back(w.P.arms[i][k]);
      org.push_back(w.origin[i][k]);
    }
    w.P.arms[i] = std::move(arm);
    w.origin[i] = std::move(org);
  }
  // undo the temporary (T1) shifts
  if (shift_arm >= 0) {
    for (auto& e : w.P.arms[shift_arm]) e.d -= extra_shift * e.l;
    for (auto& e : w.P.arms[0]) e.d += extra_shift * e.l;
  }
  for (int i = 1; i <= Q.r(); ++i) {
    if (log.shifts[i] == 0) continue;
    for (auto& e : w.P.arms[i]) e.d -= log.shifts[i] * e.l;
    for (auto& e : w.P.arms[0]) e.d += log.shifts[i] * e.l;
  }
  if (!is_valid(w.P))
    throw std::logic_error("resolve_sink_chart: output invalid");
  return finish(w);
}

Rat c_plus(const DefiningP& P, int i) {
  if (!is_valid(P)) throw InvalidInput("c_plus: invalid data");
  if (!P.has_vplus) throw NoParabolicCurve("c_plus: no D+");
  if (P.first(i).l == 1) return 0;
  auto mr = minimal_resolution(P);
  auto it = mr.fibers.find("x_" + std::to_string(i) + "^+");
  if (it == mr.fibers.end() || it->second.empty()) return 0;
  auto table = self_intersections(mr.resolved);
  std::vector<Rat> chain;  // outermost (meeting the D+ transform) first
  for (const auto& [arm, j] : it->second) chain.push_back(-table.self.at({arm, j}));
  return 1 / cf_eval(chain);
}

Rat c_minus(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("c_minus: invalid data");
  if (P.has_vminus)
    throw NoEllipticFixedPoint("c_minus: sink is parabolic");
  if (det_sigma(P, Side::minus) == -1) return 0;
  auto mr = minimal_resolution(P);
  auto it = mr.fibers.find("x-");
  if (it == mr.fibers.end() || it->second.empty()) return 0;
  int arm = it->second.front().first;
  for (const auto& [a, j] : it->second)
    if (a != arm || a < 0)
      throw NotSimpleElliptic("c_minus: x- is not simple");
  auto table = self_intersections(mr.resolved);
  std::vector<Rat> chain;  // sink-most exceptional curve first
  for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
    chain.push_back(-table.self.at({rit->first, rit->second}));
  return 1 / cf_eval(chain);
}

DefiningP reconstruct_from_intersections(
    const std::vector<std::vector<Rat>>& arm_selfints, const Rat& dplus_sq,
    bool has_vminus) {
  if (arm_selfints.size() < 2)
    throw InvalidInput("reconstruct_from_intersections: need >= 2 arms");
  auto as_int = [](const Rat& v) {
    if (den(v) != 1)
      throw NotSmooth("reconstruct_from_intersections: non-integer entry");
    return num(v);
  };
  DefiningP P;
  P.has_vplus = true;
  P.has_vminus = has_vminus;
  for (size_t i = 0; i < arm_selfints.size(); ++i) {
    const auto& D = arm_selfints[i];
    Arm arm;
    for (size_t j = 1; j <= D.size(); ++j) {
      // f_k = CF_k(-D_{ij-k}^2, ..., -D_{ij-1}^2)
      auto f = [&](size_t k) {
        std::vector<Rat> a;
        for (size_t t = j - k; t <= j - 1; ++t) a.push_back(-D[t - 1]);
        return cf_eval(a);
      };
      Rat l = 1, dtail = 1;
      for (size_t k = 1; k + 1 <= j; ++k) l *= f(k);
      for (size_t k = 1; k + 2 <= j; ++k) dtail *= f(k);
      Rat d;
      if (i == 0)
        d = j == 1 ? -dplus_sq : -(dplus_sq * f(j - 1) + 1) * dtail;
      else
        d = j == 1 ? Rat(0) : -dtail;
      arm.push_back({as_int(l), as_int(d)});
    }
    P.arms.push_back(std::move(arm));
  }
  if (!is_valid(P))
    throw NotSmooth("reconstruct_from_intersections: inconsistent table");
  return P;
}

}  // namespace kstar
