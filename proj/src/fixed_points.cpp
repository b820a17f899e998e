#include "kstar/fixed_points.hpp"

#include <algorithm>
#include <numeric>

#include "kstar/resolution.hpp"

namespace kstar {

namespace {

bool source_elliptic(const DefiningP& P) { return !P.has_vplus; }
bool sink_elliptic(const DefiningP& P) { return !P.has_vminus; }

}  // namespace

IntersectionTable self_intersections(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("self_intersections: invalid data");
  Scalars s = scalars(P);
  IntersectionTable t;
  bool se = source_elliptic(P), ke = sink_elliptic(P);
  for (int i = 0; i <= P.r(); ++i) {
    int n = P.n(i);
    for (int j = 1; j <= n; ++j) {
      Rat l2 = Rat(P.arms[i][j - 1].l) * Rat(P.arms[i][j - 1].l);
      Rat v;
      if (n == 1) {
        if (se && ke)
          v = (1 / s.m_plus - 1 / s.m_minus) / l2;
        else if (!se && !ke)
          v = 0;
        else if (se)
          v = 1 / (l2 * s.m_plus);
        else
          v = -1 / (l2 * s.m_minus);
      } else if (j == 1) {
        Rat gap = s.m[i][0] - s.m[i][1];
        v = se ? Rat((1 / s.m_plus - 1 / gap) / l2) : Rat(-1 / (l2 * gap));
      } else if (j < n) {
        Rat a = s.m[i][j - 2] - s.m[i][j - 1];
        Rat b = s.m[i][j - 1] - s.m[i][j];
        v = -(a + b) / (l2 * a * b);
      } else {
        Rat gap = s.m[i][n - 1] - s.m[i][n - 2];
        v = ke ? Rat((-1 / s.m_minus + 1 / gap) / l2)
               : Rat(-1 / (l2 * (-gap)));
      }
      t.self[{i, j}] = v;
    }
  }
  if (P.has_vplus) t.dplus_sq = -s.m_plus;
  if (P.has_vminus) t.dminus_sq = s.m_minus;
  return t;
}

std::map<std::pair<int, int>, Rat> mutual_intersections(const DefiningP& P,
                                                        Side side) {
  if (!is_valid(P)) throw InvalidInput("mutual_intersections: invalid data");
  if (side == Side::plus && !source_elliptic(P))
    throw NoEllipticFixedPoint("mutual_intersections: source is parabolic");
  if (side == Side::minus && !sink_elliptic(P))
    throw NoEllipticFixedPoint("mutual_intersections: sink is parabolic");
  Scalars s = scalars(P);
  std::map<std::pair<int, int>, Rat> out;
  for (int i = 0; i <= P.r(); ++i)
    for (int k = 0; k <= P.r(); ++k) {
      if (i == k) continue;
      Rat v;
      if (side == Side::minus)
        v = -1 / (Rat(P.last(i).l) * Rat(P.last(k).l) * s.m_minus);
      else
        v = 1 / (Rat(P.first(i).l) * Rat(P.first(k).l) * s.m_plus);
      out[{i, k}] = v;
    }
  return out;
}

bool is_contractible(const DefiningP& P, const Curve& c) {
  auto t = self_intersections(P);
  switch (c.kind) {
    case Curve::Kind::plus:
      if (!t.dplus_sq) throw NoParabolicCurve("is_contractible: no D+");
      return *t.dplus_sq < 0;
    case Curve::Kind::minus:
      if (!t.dminus_sq) throw NoParabolicCurve("is_contractible: no D-");
      return *t.dminus_sq < 0;
    case Curve::Kind::arm:
    default: {
      auto it = t.self.find({c.i, c.j});
      if (it == t.self.end())
        throw InvalidInput("is_contractible: no such curve");
      return it->second < 0;
    }
  }
}

Rat xi(const DefiningP& P, int i) {
  if (P.n(i) == 1) return 0;
  Scalars s = scalars(P);
  return 1 / (Rat(P.last(i).l) * (s.m[i][P.n(i) - 2] - s.m[i][P.n(i) - 1]));
}

Rat eta(const DefiningP& P, int k) {
  Scalars s = scalars(P);
  return -1 / (Rat(P.last(k).l) * s.m_minus);
}

bool FixedPointReport::all_smooth() const {
  auto par_ok = [](const Parabolic& p) {
    return !p.exists ||
           std::all_of(p.x_smooth.begin(), p.x_smooth.end(),
                       [](bool b) { return b; });
  };
  auto ell_ok = [](const EllipticReport& e) { return !e.exists || e.smooth; };
  for (const auto& arm : hyperbolic_smooth)
    for (bool b : arm)
      if (!b) return false;
  return par_ok(source) && par_ok(sink) && ell_ok(elliptic_plus) &&
         ell_ok(elliptic_minus);
}

std::pair<int, int> leading_indices(const DefiningP& P, Side side) {
  std::vector<int> big, small;
  for (int i = 0; i <= P.r(); ++i) {
    const Int& l = side == Side::minus ? P.last(i).l : P.first(i).l;
    (l > 1 ? big : small).push_back(i);
  }
  while (big.size() < 2) {
    big.push_back(small.front());
    small.erase(small.begin());
  }
  std::sort(big.begin(), big.begin() + 2);
  return {big[0], big[1]};
}

namespace detail {

FixedPointReport basic_report(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("fixed_point_report: invalid data");
  if (!is_irredundant(P))
    throw InvalidInput("fixed_point_report: redundant data");
  FixedPointReport rep;
  if (P.has_vplus) {
    rep.source.exists = true;
    for (int i = 0; i <= P.r(); ++i)
      rep.source.x_smooth.push_back(P.first(i).l == 1);
  }
  if (P.has_vminus) {
    rep.sink.exists = true;
    for (int i = 0; i <= P.r(); ++i)
      rep.sink.x_smooth.push_back(P.last(i).l == 1);
  }
  rep.hyperbolic_smooth.resize(P.r() + 1);
  for (int i = 0; i <= P.r(); ++i)
    for (int j = 1; j < P.n(i); ++j) {
      const ArmEntry& a = P.arms[i][j - 1];
      const ArmEntry& b = P.arms[i][j];
      rep.hyperbolic_smooth[i].push_back(b.l * a.d - a.l * b.d == 1);
    }
  auto fill_elliptic = [&](Side side, EllipticReport& e) {
    e.exists = true;
    int over = 0;
    for (int i = 0; i <= P.r(); ++i) {
      const Int& l = side == Side::minus ? P.last(i).l : P.first(i).l;
      if (l > 1) ++over;
    }
    e.quasismooth = over <= 2;
    e.leading_indices = leading_indices(P, side);
    Int det = det_sigma(P, side);
    e.smooth = e.quasismooth && (side == Side::minus ? det == -1 : det == 1);
  };
  if (!P.has_vplus) fill_elliptic(Side::plus, rep.elliptic_plus);
  if (!P.has_vminus) fill_elliptic(Side::minus, rep.elliptic_minus);
  return rep;
}

}  // namespace detail

FixedPointReport fixed_point_report(const DefiningP& P) {
  FixedPointReport rep = detail::basic_report(P);
  auto fill_simple = [&](Side side, EllipticReport& e) {
    if (!e.exists) return;
    SimpleEllipticResult r = detail::simple_elliptic_fiber_route(P, side);
    e.simple = r.simple;
    e.exceptional_index = r.exceptional_index;
  };
  fill_simple(Side::plus, rep.elliptic_plus);
  fill_simple(Side::minus, rep.elliptic_minus);
  return rep;
}

namespace detail {

// Witness search for simplicity of a quasismooth x^-: a linear form
// u = (u_1..u_r, gamma) with <u, v_{i1 end}> = -1, <u, v_{i end}> = 0 for
// i != i0, i1 and <u, v_{ij}> >= 0 on every column outside arm i1.
SimpleEllipticResult simple_elliptic_witness_route(const DefiningP& P) {
  Scalars s = scalars(P);
  int r = P.r();
  SimpleEllipticResult res;
  for (int i0 = 0; i0 <= r && !res.simple; ++i0)
    for (int i1 = 0; i1 <= r && !res.simple; ++i1) {
      if (i0 == i1) continue;
      bool ok = true;
      for (int i = 0; i <= r; ++i)
        if (i != i0 && i != i1 && P.last(i).l != 1) ok = false;
      if (!ok) continue;
      const Int& l1 = P.last(i1).l;
      Int gmax = rat_floor(-1 / (Rat(l1) * s.m_minus));
      for (Int g = 1; g <= gmax; ++g) {
        // w_i are the pairing coefficients per arm; sum w_i = 0
        std::vector<Int> w(r + 1, 0);
        Int t = -1 - g * P.last(i1).d;
        if (t % l1 != 0) continue;
        w[i1] = t / l1;
        for (int i = 0; i <= r; ++i)
          if (i != i0 && i != i1) w[i] = -g * P.last(i).d;
        Int sum = 0;
        for (int i = 0; i <= r; ++i)
          if (i != i0) sum += w[i];
        w[i0] = -sum;
        bool good = true;
        for (int i = 0; i <= r && good; ++i) {
          if (i == i1) continue;
          for (const auto& e : P.arms[i])
            if (w[i] * e.l + g * e.d < 0) {
              good = false;
              break;
            }
        }
        if (good) {
          res.simple = true;
          res.exceptional_index = i0;
          std::vector<Int> u(w.begin() + 1, w.end());
          u.push_back(g);
          res.witness = std::move(u);
          break;
        }
      }
    }
  return res;
}

SimpleEllipticResult simple_elliptic_fiber_route(const DefiningP& P,
                                                 Side side) {
  if (side == Side::plus)
    return simple_elliptic_fiber_route(negate_last_row(P), Side::minus);
  SimpleEllipticResult res;
  auto mr = minimal_resolution(P);
  auto it = mr.fibers.find("x-");
  if (it == mr.fibers.end() || it->second.empty()) {
    res.simple = true;  // smooth point: empty fiber is vacuously simple
    return res;
  }
  int arm = it->second.front().first;
  res.simple = true;
  for (const auto& [a, j] : it->second)
    if (a != arm || a < 0) res.simple = false;  // spread out or contains D-
  if (res.simple) res.exceptional_index = arm;
  return res;
}

}  // namespace detail

SimpleEllipticResult is_simple_elliptic(const DefiningP& P, Side side) {
  if (side == Side::plus) {
    SimpleEllipticResult res =
        is_simple_elliptic(negate_last_row(P), Side::minus);
    return res;
  }
  if (!sink_elliptic(P))
    throw NoEllipticFixedPoint("is_simple_elliptic: sink is parabolic");
  FixedPointReport rep = detail::basic_report(P);
  if (!rep.elliptic_minus.quasismooth)
    throw NotQuasismooth("is_simple_elliptic: x- is not quasismooth");
  SimpleEllipticResult fiber = detail::simple_elliptic_fiber_route(P, side);
  if (rep.elliptic_minus.smooth) return fiber;
  SimpleEllipticResult witness = detail::simple_elliptic_witness_route(P);
  if (witness.simple != fiber.simple ||
      (witness.simple && witness.exceptional_index != fiber.exceptional_index))
    throw std::logic_error(
        "is_simple_elliptic: witness and resolution routes disagree");
  return witness;
}

std::pair<DefiningP, std::vector<int>> normalize(const DefiningP& P) {
  if (!is_adapted(P, AdaptMode::sink))
    throw NotAdapted("normalize: P is not sink adapted");
  Scalars s = scalars(P);
  std::vector<int> idx(P.arms.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto tie_key = [&](int i) -> std::optional<Rat> {
    if (P.n(i) < 2) return std::nullopt;
    return s.m[i][P.n(i) - 2] - s.m[i][P.n(i) - 1];
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (P.last(a).l != P.last(b).l) return P.last(a).l > P.last(b).l;
    auto ta = tie_key(a), tb = tie_key(b);
    if (ta && tb) return *ta < *tb;
    return false;  // ties involving single-entry arms stay stable
  });
  DefiningP Q = P;
  Q.arms.clear();
  for (int i : idx) Q.arms.push_back(P.arms[i]);
  auto [R, log] = adapt(Q, AdaptMode::sink);
  return {R, idx};
}

bool gentle(const DefiningP& P, Side side) {
  if (side == Side::plus) {
    if (!P.has_vplus) throw NoParabolicCurve("gentle: no D+");
    for (int i = 0; i <= P.r(); ++i)
      if (P.first(i).l == 1) return true;
    return false;
  }
  if (!P.has_vminus) throw NoParabolicCurve("gentle: no D-");
  for (int i = 0; i <= P.r(); ++i)
    if (P.last(i).l == 1) return true;
  return false;
}

}  // namespace kstar
