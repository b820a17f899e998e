#include "kstar/roots.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "kstar/resolution.hpp"

namespace kstar {
namespace {

// Extended gcd: returns g = gcd(a,b) with s*a + t*b = g.
Int ext_gcd(const Int& a, const Int& b, Int& s, Int& t) {
  Int x = a, y = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (y != 0) {
    Int q = floor_div(x, y);
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
  s = s0;
  t = t0;
  return x;
}

Int mod_inverse(const Int& a, const Int& m) {
  Int s, t;
  Int g = ext_gcd(emod(a, m), m, s, t);
  if (g != 1) throw DivisionByZero("no modular inverse");
  return emod(s, m);
}

// Angle-order comparison on Z^2 \ {0}: half-plane index, then det.
int half_index(const LatticeVec2& v) {
  if (v.y > 0 || (v.y == 0 && v.x > 0)) return 0;
  return 1;
}

bool angle_less(const LatticeVec2& a, const LatticeVec2& b) {
  int ha = half_index(a), hb = half_index(b);
  if (ha != hb) return ha < hb;
  return det2(a, b) > 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Toric part
// ---------------------------------------------------------------------------

bool is_complete(const Fan2D& fan) {
  const auto& g = fan.generators;
  int n = static_cast<int>(g.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    if (!is_primitive(g[i])) return false;
    for (int j = i + 1; j < n; ++j)
      if (g[i] == g[j]) return false;
  }
  int descents = 0;
  for (int i = 0; i < n; ++i) {
    const auto& a = g[i];
    const auto& b = g[(i + 1) % n];
    if (det2(a, b) <= 0) return false;
    if (!angle_less(a, b)) ++descents;
  }
  return descents == 1;
}

std::map<int, std::vector<LatticeVec2>> toric_demazure_roots(const Fan2D& fan) {
  if (!is_complete(fan)) throw NotComplete("fan is not complete");
  const auto& g = fan.generators;
  int n = static_cast<int>(g.size());
  std::map<int, std::vector<LatticeVec2>> out;
  for (int i = 0; i < n; ++i) {
    // Particular solution of <u, v_i> = -1 and the lattice direction of the
    // line: u = u0 + t*w with w orthogonal to v_i.
    Int s, t;
    ext_gcd(g[i].x, g[i].y, s, t);  // s*x + t*y = 1
    LatticeVec2 u0{-s, -t};
    LatticeVec2 w{-g[i].y, g[i].x};
    // Clip by <u0 + t*w, v_j> >= 0 for j != i.
    bool empty = false;
    std::optional<Rat> lo, hi;
    for (int j = 0; j < n && !empty; ++j) {
      if (j == i) continue;
      Int c = det2(g[i], g[j]);  // <w, v_j>
      Int a = Int(u0.x * g[j].x + u0.y * g[j].y);
      if (c > 0) {
        Rat bound = Rat(-a) / Rat(c);
        if (!lo || bound > *lo) lo = bound;
      } else if (c < 0) {
        Rat bound = Rat(-a) / Rat(c);
        if (!hi || bound < *hi) hi = bound;
      } else if (a < 0) {
        empty = true;
      }
    }
    std::vector<LatticeVec2> roots;
    if (!empty && lo && hi) {
      for (Int tt = rat_ceil(*lo); tt <= rat_floor(*hi); ++tt)
        roots.push_back({Int(u0.x + tt * w.x), Int(u0.y + tt * w.y)});
    }
    out[i] = std::move(roots);
  }
  return out;
}

std::map<int, std::vector<Vec3>> demazure_roots_3d(
    const std::vector<Vec3>& generators) {
  int n = static_cast<int>(generators.size());
  std::map<int, std::vector<Vec3>> out;
  for (int i = 0; i < n; ++i) {
    const Vec3& v = generators[i];
    // Solve <u, v> = -1 via the Smith normal form of the row [v].
    IntMat row{{v[0], v[1], v[2]}};
    SmithNormalForm snf = smith_normal_form(row);
    if (snf.diag[0] != 1) throw NotComplete("generator is not primitive");
    Int sign = snf.U[0][0];  // U M V = diag(1,0,0), U is 1x1 = ±1
    Vec3 u0, w1, w2;
    for (int k = 0; k < 3; ++k) {
      u0[k] = Int(-sign * snf.V[k][0]);
      w1[k] = snf.V[k][1];
      w2[k] = snf.V[k][2];
    }
    // Constraints a_j s + b_j t + c_j >= 0 in parameters (s, t).
    struct Cons {
      Int a, b, c;
    };
    std::vector<Cons> cons;
    auto dot = [](const Vec3& x, const Vec3& y) {
      return Int(x[0] * y[0] + x[1] * y[1] + x[2] * y[2]);
    };
    bool empty = false;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Cons c{dot(w1, generators[j]), dot(w2, generators[j]),
             dot(u0, generators[j])};
      if (c.a == 0 && c.b == 0) {
        if (c.c < 0) empty = true;
        continue;
      }
      cons.push_back(c);
    }
    std::vector<Vec3> roots;
    if (!empty) {
      // Boundedness: the recession cone {d : A d >= 0} must be trivial. Its
      // extreme rays lie on constraint boundaries, so testing the rotated
      // normals suffices.
      for (const auto& k : cons) {
        for (const LatticeVec2& d :
             {LatticeVec2{-k.b, k.a}, LatticeVec2{k.b, -k.a}}) {
          bool feasible = true;
          for (const auto& c : cons)
            if (c.a * d.x + c.b * d.y < 0) feasible = false;
          if (feasible) throw NotComplete("clipped region is unbounded");
        }
      }
      // Vertices of the polygon: feasible pairwise intersections.
      std::vector<std::pair<Rat, Rat>> verts;
      for (size_t p = 0; p < cons.size(); ++p) {
        for (size_t q = p + 1; q < cons.size(); ++q) {
          Int det = Int(cons[p].a * cons[q].b - cons[p].b * cons[q].a);
          if (det == 0) continue;
          Rat s_val = Rat(Int(-cons[p].c * cons[q].b + cons[q].c * cons[p].b)) /
                      Rat(det);
          Rat t_val = Rat(Int(-cons[p].a * cons[q].c + cons[q].a * cons[p].c)) /
                      Rat(det);
          bool feasible = true;
          for (const auto& c : cons)
            if (Rat(c.a) * s_val + Rat(c.b) * t_val + Rat(c.c) < 0)
              feasible = false;
          if (feasible) verts.emplace_back(s_val, t_val);
        }
      }
      if (!verts.empty()) {
        Rat slo = verts[0].first, shi = verts[0].first;
        Rat tlo = verts[0].second, thi = verts[0].second;
        for (const auto& [a, b] : verts) {
          slo = std::min(slo, a);
          shi = std::max(shi, a);
          tlo = std::min(tlo, b);
          thi = std::max(thi, b);
        }
        for (Int s_i = rat_ceil(slo); s_i <= rat_floor(shi); ++s_i) {
          for (Int t_i = rat_ceil(tlo); t_i <= rat_floor(thi); ++t_i) {
            bool ok = true;
            for (const auto& c : cons)
              if (c.a * s_i + c.b * t_i + c.c < 0) ok = false;
            if (ok)
              roots.push_back({Int(u0[0] + s_i * w1[0] + t_i * w2[0]),
                               Int(u0[1] + s_i * w1[1] + t_i * w2[1]),
                               Int(u0[2] + s_i * w1[2] + t_i * w2[2])});
          }
        }
      }
    }
    out[i] = std::move(roots);
  }
  return out;
}

TwoGenReport classify_two_generator_fans(const Fan2D& fan) {
  auto roots = toric_demazure_roots(fan);
  const auto& g = fan.generators;
  int n = static_cast<int>(g.size());
  std::vector<int> with_roots;
  Int total = 0;
  for (const auto& [i, rs] : roots) {
    if (!rs.empty()) with_roots.push_back(i);
    total += Int(rs.size());
  }
  if (with_roots.size() < 2)
    throw FewerThanTwo("fewer than two generators admit a root");

  auto pair_val = [&](const LatticeVec2& u, const LatticeVec2& v) {
    return Int(u.x * v.x + u.y * v.y);
  };

  TwoGenReport rep;
  rep.roots = roots;
  rep.total_roots = total;

  // Prefer the two-sided-positive configuration: a linearly independent pair
  // v, v' with roots m, m' satisfying <m,v'> > 0 and <m',v> > 0.
  for (int a : with_roots) {
    for (int b : with_roots) {
      if (a == b || det2(g[a], g[b]) == 0) continue;
      for (const auto& ma : roots[a]) {
        for (const auto& mb : roots[b]) {
          if (pair_val(ma, g[b]) <= 0 || pair_val(mb, g[a]) <= 0) continue;
          // Orient the pair so that det(v, v') = b > 0.
          int va = a, vb = b;
          if (det2(g[va], g[vb]) < 0) std::swap(va, vb);
          Int bb = det2(g[va], g[vb]);
          // The other generators are annihilated by the roots; find w with
          // det(v, w) = -1.
          int w_idx = -1;
          for (int k = 0; k < n; ++k) {
            if (k == va || k == vb) continue;
            if (det2(g[va], g[k]) == -1) w_idx = k;
          }
          if (w_idx < 0) continue;
          // Basis change T with T v = (1,0), T w = (-1,-1).
          // T = N * [v w]^{-1}, N = [(1,0)^T, (-1,-1)^T].
          Int D = det2(g[va], g[w_idx]);  // = -1
          // [v w]^{-1} = (1/D) [[w.y, -w.x], [-v.y, v.x]]
          auto apply = [&](const LatticeVec2& z) {
            Int p = Int((z.x * g[w_idx].y - z.y * g[w_idx].x));
            Int q = Int((-z.x * g[va].y + z.y * g[va].x));
            p = Int(p / D) * 1;  // D = ±1
            q = Int(q / D) * 1;
            // N * (p, q)^T with N columns (1,0) and (-1,-1): image of v is
            // (1,0), image of w is (-1,-1).
            return LatticeVec2{Int(p - q), Int(-q)};
          };
          if (D != -1 && D != 1) continue;
          LatticeVec2 tv = apply(g[va]);
          LatticeVec2 tw = apply(g[w_idx]);
          if (!(tv == LatticeVec2{1, 0} && tw == LatticeVec2{-1, -1}))
            continue;
          LatticeVec2 tvp = apply(g[vb]);
          if (!(tvp == LatticeVec2{Int(bb - 1), bb})) continue;
          bool ok = true;
          std::vector<LatticeVec2> norm;
          for (int k = 0; k < n; ++k) {
            LatticeVec2 z = apply(g[k]);
            if (k != va && k != vb && k != w_idx &&
                !(z == LatticeVec2{1, 1}))
              ok = false;
            norm.push_back(z);
          }
          if (!ok) continue;
          rep.kind = TwoGenCase::hirzebruch;
          rep.pair_first = va;
          rep.pair_second = vb;
          rep.b = bb;
          rep.normalized_generators = std::move(norm);
          return rep;
        }
      }
    }
  }

  // Orthogonal pair: roots m at v, m' at v' with <m,v'> = 0.
  for (int a : with_roots) {
    for (int b : with_roots) {
      if (a == b) continue;
      for (const auto& ma : roots[a]) {
        if (pair_val(ma, g[b]) != 0) continue;
        Int D = det2(g[a], g[b]);
        if (D != 1 && D != -1) continue;
        // T = [v v']^{-1}: sends v to (1,0), v' to (0,1).
        auto apply = [&](const LatticeVec2& z) {
          Int p = Int(z.x * g[b].y - z.y * g[b].x);
          Int q = Int(-z.x * g[a].y + z.y * g[a].x);
          return LatticeVec2{Int(p / D), Int(q / D)};
        };
        std::vector<LatticeVec2> norm;
        std::optional<Rat> xi_min;
        bool ok = true;
        for (int k = 0; k < n; ++k) {
          LatticeVec2 z = apply(g[k]);
          norm.push_back(z);
          if (k == a || k == b) continue;
          if (z.x > 0 || z.y > 0) ok = false;  // must lie in cone(-v,-v')
          if (z.x != 0) {
            Rat slope = Rat(z.y) / Rat(z.x);
            if (!xi_min || slope < *xi_min) xi_min = slope;
          }
        }
        if (!ok) continue;
        rep.kind = TwoGenCase::orthogonal;
        rep.pair_first = a;
        rep.pair_second = b;
        rep.xi_sigma = xi_min;
        rep.normalized_generators = std::move(norm);
        return rep;
      }
    }
  }
  throw FewerThanTwo("no pair matching either configuration");
}

// ---------------------------------------------------------------------------
// P-roots
// ---------------------------------------------------------------------------

Int pairing(const DefiningP& P, const std::vector<Int>& u, int i, int j) {
  int r = P.r();
  Int ui;
  if (i == 0) {
    ui = 0;
    for (int k = 1; k <= r; ++k) ui -= u[k - 1];
  } else {
    ui = u[i - 1];
  }
  const ArmEntry& e = P.arms[i][j - 1];
  return Int(ui * e.l + u[r] * e.d);
}

namespace {

std::vector<Int> conjugate_u(const std::vector<Int>& u) {
  std::vector<Int> v = u;
  v.back() = -v.back();
  return v;
}

bool is_horizontal_root_minus(const DefiningP& P, int i0, int i1,
                              const std::vector<Int>& u) {
  int r = P.r();
  if (i0 == i1 || i0 < 0 || i1 < 0 || i0 > r || i1 > r) return false;
  if (P.has_vminus) return false;
  if (u.back() <= 0) return false;
  if (pairing(P, u, i1, P.n(i1)) != -1) return false;
  for (int i = 0; i <= r; ++i) {
    if (i == i0 || i == i1) continue;
    if (P.last(i).l != 1) return false;
    if (pairing(P, u, i, P.n(i)) != 0) return false;
    if (P.n(i) > 1 && pairing(P, u, i, P.n(i) - 1) < P.arms[i][P.n(i) - 2].l)
      return false;
  }
  if (pairing(P, u, i0, P.n(i0)) < 0) return false;
  if (P.n(i1) > 1 && pairing(P, u, i1, P.n(i1) - 1) < 0) return false;
  return true;
}

}  // namespace

bool is_horizontal_root(const DefiningP& P, Side side, int i0, int i1,
                        const std::vector<Int>& u) {
  if (side == Side::minus) return is_horizontal_root_minus(P, i0, i1, u);
  return is_horizontal_root_minus(negate_last_row(P), i0, i1, conjugate_u(u));
}

bool is_vertical_root(const DefiningP& P, Side side, const std::vector<Int>& u) {
  if (side == Side::plus) {
    if (!P.has_vplus) return false;
    if (u.back() != -1) return false;  // <u, v+> = -1
    for (int i = 0; i <= P.r(); ++i)
      if (pairing(P, u, i, 1) < 0) return false;
    return true;
  }
  if (!P.has_vminus) return false;
  return is_vertical_root(negate_last_row(P), Side::plus, conjugate_u(u));
}

std::optional<std::pair<Rat, Rat>> RootIntervals::delta(int iota,
                                                        int kappa) const {
  Rat lo = 0;
  for (int i = 0; i < static_cast<int>(xi.size()); ++i) {
    if (i == iota) continue;
    lo = std::max(lo, xi[i]);
  }
  Rat hi = eta[kappa];
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

RootIntervals intervals(const DefiningP& P) {
  if (P.has_vminus) throw NoEllipticSink("x^- is not elliptic");
  RootIntervals out;
  for (int i = 0; i <= P.r(); ++i) {
    out.xi.push_back(xi(P, i));
    out.eta.push_back(eta(P, i));
  }
  return out;
}

std::vector<Rat> u_gamma(const DefiningP& P, int i0, int i1, const Int& gamma) {
  int r = P.r();
  Scalars sc = scalars(P);
  std::vector<Rat> u(r + 1, Rat(0));
  // e'_0 contributes nothing; e'_i = e_i for i >= 1.
  auto add = [&](int i, const Rat& c) {
    if (i >= 1) u[i - 1] += c;
  };
  u[r] = Rat(gamma);
  Rat inv_l = Rat(1) / Rat(P.last(i1).l);
  add(i1, -inv_l);
  add(i0, inv_l);
  for (int i = 0; i <= r; ++i) {
    if (i == i0) continue;
    Rat m = sc.m[i].back();
    add(i, Rat(-gamma) * m);
    add(i0, Rat(gamma) * m);
  }
  return u;
}

HorizontalEnumeration horizontal_p_roots_detailed(const DefiningP& P, Side side,
                                                  int i0, int i1) {
  if (side == Side::plus) {
    HorizontalEnumeration rec =
        horizontal_p_roots_detailed(negate_last_row(P), Side::minus, i0, i1);
    for (auto& root : rec.roots) {
      root.u = conjugate_u(root.u);
      root.side = Side::plus;
    }
    return rec;
  }
  if (P.has_vminus) throw NoEllipticFixedPoint("x^- is not elliptic");
  HorizontalEnumeration out;
  RootIntervals iv = intervals(P);
  auto delta = iv.delta(i0, i1);
  if (!delta) return out;
  const Int l = P.last(i1).l;
  const Int d = P.last(i1).d;
  // gamma * d == -1 (mod l)
  Int residue = l == 1 ? Int(0) : emod(Int(-mod_inverse(d, l)), l);
  int r = P.r();
  for (const Int& gamma : integers_in_interval_with_residue(
           delta->first, delta->second, residue, l)) {
    std::vector<Rat> cand = u_gamma(P, i0, i1, gamma);
    bool integral = true;
    std::vector<Int> u;
    for (const Rat& c : cand) {
      if (den(c) != 1) integral = false;
      u.push_back(num(c));
    }
    if (!integral || !is_horizontal_root_minus(P, i0, i1, u)) {
      out.discarded.push_back(gamma);
      continue;
    }
    PRoot root;
    root.kind = PRoot::Kind::horizontal;
    root.side = Side::minus;
    root.i0 = i0;
    root.i1 = i1;
    root.u = std::move(u);
    root.parameter = gamma;
    for (int a = 0; a <= r; ++a)
      for (int b = 0; b <= r; ++b)
        if (a != b && is_horizontal_root_minus(P, a, b, root.u))
          root.tags.emplace_back(a, b);
    out.roots.push_back(std::move(root));
  }
  return out;
}

std::vector<PRoot> horizontal_p_roots(const DefiningP& P, Side side, int i0,
                                      int i1) {
  return horizontal_p_roots_detailed(P, side, i0, i1).roots;
}

EpsilonLadder epsilon_ladder(const DefiningP& P, int i0, int i1) {
  if (P.has_vminus) throw NotSmoothSink("x^- is not elliptic");
  if (det_sigma(P, Side::minus) != -1)
    throw NotSmoothSink("x^- is not smooth");
  int r = P.r();
  for (int i = 0; i <= r; ++i)
    if (i != i0 && i != i1 && P.last(i).l != 1)
      throw InvalidInput("l_{in_i} != 1 off the chosen pair");
  const Int l0 = P.last(i0).l;
  const Int l1 = P.last(i1).l;
  // epsilon maximal with l0 - eps*l1 >= xi_i for i != i0, n_i >= 2, and the
  // ladder parameter gamma = l0 - eps*l1 still positive.
  std::optional<Int> eps;
  auto tighten = [&](const Rat& bound) {
    // eps <= (l0 - bound)/l1
    Int e = rat_floor((Rat(l0) - bound) / Rat(l1));
    if (!eps || e < *eps) eps = e;
  };
  for (int i = 0; i <= r; ++i)
    if (i != i0 && P.n(i) >= 2) tighten(xi(P, i));
  tighten(Rat(1));  // gamma >= 1
  EpsilonLadder out;
  out.epsilon = *eps;
  for (Int mu = 0; mu <= out.epsilon; ++mu) {
    Int gamma = Int(l0 - mu * l1);
    std::vector<Rat> cand = u_gamma(P, i0, i1, gamma);
    PRoot root;
    root.kind = PRoot::Kind::horizontal;
    root.side = Side::minus;
    root.i0 = i0;
    root.i1 = i1;
    root.parameter = gamma;
    for (const Rat& c : cand) {
      if (den(c) != 1)
        throw std::logic_error("non-integral ladder candidate");
      root.u.push_back(num(c));
    }
    out.roots.push_back(std::move(root));
  }
  return out;
}

std::vector<PRoot> vertical_p_roots(const DefiningP& P, Side side) {
  if (side == Side::minus) {
    if (!P.has_vminus) throw NoParabolicCurve("no curve D^-");
    auto rec = vertical_p_roots(negate_last_row(P), Side::plus);
    for (auto& root : rec) {
      root.u = conjugate_u(root.u);
      root.side = Side::minus;
    }
    return rec;
  }
  if (!P.has_vplus) throw NoParabolicCurve("no curve D^+");
  int r = P.r();
  Scalars sc = scalars(P);
  std::vector<Int> lo(r);
  for (int i = 1; i <= r; ++i) lo[i - 1] = rat_ceil(sc.m[i][0]);
  Int sum_cap = rat_floor(-sc.m[0][0]);  // u_0 >= m_01
  std::vector<PRoot> out;
  std::vector<Int> u(r + 1);
  u[r] = -1;
  std::function<void(int, Int)> rec = [&](int idx, Int partial) {
    if (idx == r) {
      PRoot root;
      root.kind = PRoot::Kind::vertical;
      root.side = Side::plus;
      root.u = u;
      assert(is_vertical_root(P, Side::plus, root.u));
      out.push_back(std::move(root));
      return;
    }
    Int rest_min = 0;
    for (int k = idx + 1; k < r; ++k) rest_min += lo[k];
    for (Int val = lo[idx]; Int(partial + val + rest_min) <= sum_cap; ++val) {
      u[idx] = val;
      rec(idx + 1, Int(partial + val));
    }
  };
  rec(0, 0);
  return out;
}

std::optional<std::pair<Rat, Rat>> gamma_interval(const DefiningP& P, int i0,
                                                  int i1) {
  Scalars sc = scalars(P);
  Rat lo = sc.m[i1][0];
  Rat hi = -sc.m[i0][0];
  for (int i = 0; i <= P.r(); ++i) {
    if (i == i0 || i == i1) continue;
    hi -= Rat(rat_ceil(sc.m[i][0]));
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::vector<PRoot> essential_vertical_roots(const DefiningP& P, int i0,
                                            int i1) {
  if (!P.has_vplus) throw NoParabolicCurve("no curve D^+");
  int r = P.r();
  Scalars sc = scalars(P);
  std::vector<PRoot> out;
  auto interval = gamma_interval(P, i0, i1);
  if (!interval) return out;
  for (Int alpha = rat_ceil(interval->first);
       alpha <= rat_floor(interval->second); ++alpha) {
    std::vector<Int> u(r + 1, Int(0));
    auto add = [&](int i, const Int& c) {
      if (i >= 1) u[i - 1] += c;
    };
    u[r] = -1;
    add(i1, alpha);
    add(i0, -alpha);
    for (int i = 0; i <= r; ++i) {
      if (i == i0 || i == i1) continue;
      Int c = rat_ceil(sc.m[i][0]);
      add(i, c);
      add(i0, -c);
    }
    if (!is_vertical_root(P, Side::plus, u))
      throw std::logic_error("Gamma candidate is not a vertical root");
    for (int i = 0; i <= r; ++i) {
      if (i == i0 || i == i1) continue;
      Int p = pairing(P, u, i, 1);
      if (p < 0 || p >= P.first(i).l)
        throw std::logic_error("Gamma candidate is not essential");
    }
    PRoot root;
    root.kind = PRoot::Kind::vertical;
    root.side = Side::plus;
    root.i0 = i0;
    root.i1 = i1;
    root.u = std::move(u);
    root.parameter = alpha;
    out.push_back(std::move(root));
  }
  return out;
}

Int brute_force_bound(const DefiningP& P, Side side) {
  const DefiningP Q = side == Side::minus ? P : negate_last_row(P);
  Scalars sc = scalars(Q);
  // |u_{r+1}| <= max eta_k when x^- is elliptic; coordinates are bounded by
  // gamma times the largest slope magnitude (plus slack for u_{i0}).
  Int gmax = 1;
  if (!Q.has_vminus) {
    for (int k = 0; k <= Q.r(); ++k) {
      Rat e = -Rat(1) / (Rat(Q.last(k).l) * sc.m_minus);
      gmax = std::max(gmax, rat_floor(e));
    }
  }
  Int mmax = 1;
  for (const auto& arm : sc.m)
    for (const Rat& m : arm) mmax = std::max(mmax, Int(rat_ceil(abs(m))));
  return Int(gmax * (mmax + 1) + 2);
}

std::vector<PRoot> brute_force_roots(const DefiningP& P, Side side,
                                     PRoot::Kind kind, const Int& box_bound) {
  int r = P.r();
  std::vector<PRoot> out;
  if (kind == PRoot::Kind::vertical) {
    bool exists =
        side == Side::plus ? P.has_vplus : P.has_vminus;
    if (!exists) return out;
    std::vector<Int> u(r + 1);
    u[r] = side == Side::plus ? Int(-1) : Int(1);
    std::function<void(int)> rec = [&](int idx) {
      if (idx == r) {
        if (is_vertical_root(P, side, u)) {
          PRoot root;
          root.kind = PRoot::Kind::vertical;
          root.side = side;
          root.u = u;
          out.push_back(std::move(root));
        }
        return;
      }
      for (Int val = -box_bound; val <= box_bound; ++val) {
        u[idx] = val;
        rec(idx + 1);
      }
    };
    rec(0);
    return out;
  }
  bool elliptic = side == Side::minus ? !P.has_vminus : !P.has_vplus;
  if (!elliptic) return out;
  std::vector<Int> u(r + 1);
  std::function<void(int)> rec = [&](int idx) {
    if (idx == r + 1) {
      std::vector<std::pair<int, int>> tags;
      for (int a = 0; a <= r; ++a)
        for (int b = 0; b <= r; ++b)
          if (a != b && is_horizontal_root(P, side, a, b, u))
            tags.emplace_back(a, b);
      if (!tags.empty()) {
        PRoot root;
        root.kind = PRoot::Kind::horizontal;
        root.side = side;
        root.i0 = tags[0].first;
        root.i1 = tags[0].second;
        root.u = u;
        root.parameter = side == Side::minus ? u[r] : Int(-u[r]);
        root.tags = std::move(tags);
        out.push_back(std::move(root));
      }
      return;
    }
    if (idx == r) {
      for (Int val = 1; val <= box_bound; ++val) {
        u[idx] = side == Side::minus ? val : Int(-val);
        rec(idx + 1);
      }
      return;
    }
    for (Int val = -box_bound; val <= box_bound; ++val) {
      u[idx] = val;
      rec(idx + 1);
    }
  };
  rec(0);
  return out;
}

bool extends_to_demazure(const DefiningP& P, const PRoot& root) {
  int r = P.r();
  if (root.kind == PRoot::Kind::vertical) {
    // (u, k0) with the unique v^± column as k0.
    Side side = root.side;
    const std::vector<Int>& u = root.u;
    Int at_flag = side == Side::plus ? Int(u[r]) : Int(-u[r]);
    if (at_flag != -1) return false;
    bool other = side == Side::plus ? P.has_vminus : P.has_vplus;
    if (other) {
      Int v = side == Side::plus ? Int(-u[r]) : Int(u[r]);
      if (v < 0) return false;
    }
    for (int i = 0; i <= r; ++i)
      for (int j = 1; j <= P.n(i); ++j)
        if (pairing(P, u, i, j) < 0) return false;
    return true;
  }
  // Horizontal: C^+ = (1,...,1) at x^+, C^- = (n_0,...,n_r) at x^-.
  const std::vector<Int>& u = root.u;
  int i0 = root.i0, i1 = root.i1;
  auto c_of = [&](int i) { return root.side == Side::plus ? 1 : P.n(i); };
  for (int i = 0; i <= r; ++i) {
    if (i != i0 && i != i1 && P.arms[i][c_of(i) - 1].l != 1) return false;
    for (int j = 1; j <= P.n(i); ++j) {
      Int p = pairing(P, u, i, j);
      if (j == c_of(i)) {
        if (i == i1 && p != -1) return false;
        if (i != i0 && i != i1 && p != 0) return false;
        if (i == i0 && p < 0) return false;
      } else {
        Int lower = (i != i0 && i != i1) ? P.arms[i][j - 1].l : Int(0);
        if (p < lower) return false;
      }
    }
  }
  // <u, v^±> >= 0 for the parabolic columns.
  if (P.has_vplus && u[r] < 0) return false;
  if (P.has_vminus && u[r] > 0) return false;
  return true;
}

Rat horizontal_root_count(const DefiningP& P) {
  if (P.has_vminus) throw NoEllipticSink("x^- is not elliptic");
  IntersectionTable tab = self_intersections(P);
  auto mut = mutual_intersections(P, Side::minus);
  int r = P.r();
  const Int l1 = P.last(1).l;
  // min over i != 0 of l_i D_i^2 + (l_i - l_1) D_i D_1 (the i = 1 term
  // reduces to l_1 D_1^2).
  std::optional<Rat> min_term;
  for (int i = 1; i <= r; ++i) {
    Rat di = tab.self.at({i, P.n(i)});
    Rat term = Rat(P.last(i).l) * di;
    if (i != 1)
      term += Rat(Int(P.last(i).l - l1)) * mut.at({i, 1});
    if (!min_term || term < *min_term) min_term = term;
  }
  Rat inner = *min_term / Rat(l1) - c_minus(P);
  Int count = Int(rat_floor(inner) + 1);
  if (count < 0) count = 0;
  return Rat(count);
}

bool has_root_at_10(const DefiningP& P) {
  if (P.has_vminus) throw NoEllipticSink("x^- is not elliptic");
  IntersectionTable tab = self_intersections(P);
  auto mut = mutual_intersections(P, Side::minus);
  const Int l0 = P.last(0).l;
  for (int i = 0; i <= P.r(); ++i) {
    if (i == 1) continue;
    Rat di = tab.self.at({i, P.n(i)});
    Rat rhs = i == 0 ? Rat(0)
                     : Rat(Int(l0 - P.last(i).l)) * mut.at({i, 0});
    if (Rat(P.last(i).l) * di < rhs) return false;
  }
  return true;
}

Rat vertical_root_count(const DefiningP& P) {
  if (!P.has_vplus) throw NoParabolicCurve("no curve D^+");
  IntersectionTable tab = self_intersections(P);
  Rat total = *tab.dplus_sq + 1;
  for (int i = 0; i <= P.r(); ++i) total -= c_plus(P, i);
  Int count = rat_floor(total);
  if (Rat(count) != total)
    throw std::logic_error("vertical root count is not integral");
  if (count < 0) count = 0;
  return Rat(count);
}

GeneratingRootSet generating_root_set(const DefiningP& P) {
  if (is_toric(P)) throw ToricInput("defining data is toric");
  auto dedup_push = [](std::vector<PRoot>& roots, PRoot root) {
    for (const auto& existing : roots)
      if (existing.u == root.u) return;
    roots.push_back(std::move(root));
  };
  for (Side side : {Side::minus, Side::plus}) {
    bool elliptic = side == Side::minus ? !P.has_vminus : !P.has_vplus;
    if (!elliptic) continue;
    DefiningP Q = side == Side::minus ? P : negate_last_row(P);
    bool qs_simple = false;
    try {
      qs_simple = is_simple_elliptic(Q, Side::minus).simple;
    } catch (const NotQuasismooth&) {
      qs_simple = false;
    }
    if (!qs_simple) continue;
    auto [Qa, log] = adapt(Q, AdaptMode::sink);
    auto [Qn, perm] = normalize(Qa);
    GeneratingRootSet out;
    out.kind = GeneratingRootSet::Kind::horizontal;
    out.side = side;
    out.negated = side == Side::plus;
    out.prepared = Qn;
    out.permutation = perm;
    for (auto& root : horizontal_p_roots(Qn, Side::minus, 0, 1))
      dedup_push(out.roots, std::move(root));
    for (auto& root : horizontal_p_roots(Qn, Side::minus, 1, 0))
      dedup_push(out.roots, std::move(root));
    if (!out.roots.empty()) return out;
  }
  for (Side side : {Side::plus, Side::minus}) {
    bool exists = side == Side::plus ? P.has_vplus : P.has_vminus;
    if (!exists) continue;
    DefiningP Q = side == Side::plus ? P : negate_last_row(P);
    auto [Qa, log] = adapt(Q, AdaptMode::sink);
    GeneratingRootSet out;
    out.kind = GeneratingRootSet::Kind::vertical;
    out.side = side;
    out.negated = side == Side::minus;
    out.prepared = Qa;
    out.permutation.resize(Qa.arms.size());
    for (size_t i = 0; i < out.permutation.size(); ++i)
      out.permutation[i] = static_cast<int>(i);
    out.roots = essential_vertical_roots(Qa, 0, 1);
    if (!out.roots.empty()) return out;
  }
  GeneratingRootSet none;
  none.prepared = P;
  none.permutation.resize(P.arms.size());
  for (size_t i = 0; i < none.permutation.size(); ++i)
    none.permutation[i] = static_cast<int>(i);
  return none;
}

}  // namespace kstar
