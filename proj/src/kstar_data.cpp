#include "kstar/kstar_data.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace kstar {

DefiningA canonical_A(int arm_count) {
  DefiningA A;
  A.columns.reserve(arm_count);
  for (int i = 0; i < arm_count; ++i) {
    if (i == 0)
      A.columns.emplace_back(Rat(1), Rat(0));
    else if (i == 1)
      A.columns.emplace_back(Rat(0), Rat(1));
    else
      A.columns.emplace_back(Rat(-1), Rat(-(i - 1)));
  }
  return A;
}

std::vector<Diagnostic> validate(const DefiningP& P) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string code, std::string loc, std::string msg) {
    out.push_back({std::move(code), std::move(loc), std::move(msg)});
  };
  if (P.arms.size() < 2) {
    diag("ArmCount", "P", "need at least two arms (r+1 >= 2)");
    return out;
  }
  for (int i = 0; i <= P.r(); ++i) {
    const Arm& arm = P.arms[i];
    std::string loc = "arm " + std::to_string(i);
    if (arm.empty()) {
      diag("EmptyArm", loc, "arm has no entries");
      continue;
    }
    for (int j = 0; j < P.n(i); ++j) {
      const ArmEntry& e = arm[j];
      std::string eloc = loc + " entry " + std::to_string(j);
      if (e.l < 1) diag("NonPositiveL", eloc, "l must be >= 1");
      else if (boost::multiprecision::gcd(e.l, boost::multiprecision::abs(e.d)) != 1)
        diag("Primitivity", eloc, "gcd(l, |d|) != 1");
    }
    for (int j = 0; j + 1 < P.n(i); ++j) {
      if (arm[j].l >= 1 && arm[j + 1].l >= 1 &&
          !(arm[j].slope() > arm[j + 1].slope()))
        diag("SlopeOrder", loc + " entries " + std::to_string(j) + "," +
                               std::to_string(j + 1),
             "slopes must be strictly decreasing");
    }
  }
  if (!out.empty()) return out;
  // The columns must generate Q^{r+1} as a cone: on a side without a v+/- flag
  // the elliptic cone must be full, i.e. m+ > 0 (source) resp. m- < 0 (sink).
  Rat mp = 0, mm = 0;
  for (int i = 0; i <= P.r(); ++i) {
    mp += P.first(i).slope();
    mm += P.last(i).slope();
  }
  if (!P.has_vplus && !(mp > 0))
    diag("ConeDegenerate", "source", "no v+ column and m+ <= 0");
  if (!P.has_vminus && !(mm < 0))
    diag("ConeDegenerate", "sink", "no v- column and m- >= 0");
  return out;
}

std::vector<Diagnostic> validate(const KStarSurface& X) {
  auto out = validate(X.P);
  if (X.A.columns.size() != X.P.arms.size())
    out.push_back({"ArmCount", "A", "A must have one column per arm"});
  for (size_t i = 0; i < X.A.columns.size(); ++i)
    for (size_t k = i + 1; k < X.A.columns.size(); ++k) {
      const auto& a = X.A.columns[i];
      const auto& b = X.A.columns[k];
      if (a.first * b.second - a.second * b.first == 0)
        out.push_back({"DependentColumns",
                       "A columns " + std::to_string(i) + "," + std::to_string(k),
                       "columns must be pairwise linearly independent"});
    }
  return out;
}

bool is_valid(const DefiningP& P) { return validate(P).empty(); }

Scalars scalars(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("scalars: invalid defining data");
  Scalars s;
  s.m.resize(P.r() + 1);
  s.m_plus = 0;
  s.m_minus = 0;
  s.l_plus = 1;
  s.l_minus = 1;
  for (int i = 0; i <= P.r(); ++i) {
    for (const auto& e : P.arms[i]) s.m[i].push_back(e.slope());
    s.m_plus += P.first(i).slope();
    s.m_minus += P.last(i).slope();
    s.l_plus *= P.first(i).l;
    s.l_minus *= P.last(i).l;
  }
  return s;
}

SurfaceCase case_of(const DefiningP& P) {
  if (P.has_vplus && P.has_vminus) return SurfaceCase::pp;
  if (P.has_vplus) return SurfaceCase::pe;
  if (P.has_vminus) return SurfaceCase::ep;
  return SurfaceCase::ee;
}

bool is_irredundant(const DefiningP& P) {
  for (int i = 0; i <= P.r(); ++i)
    if (P.first(i).l * P.n(i) < 2) return false;
  return true;
}

bool is_toric(const DefiningP& P) {
  int essential = 0;
  for (int i = 0; i <= P.r(); ++i)
    if (P.first(i).l * P.n(i) >= 2) ++essential;
  return essential <= 2;
}

Int det_sigma(const DefiningP& P, Side side) {
  Scalars s = scalars(P);
  if (side == Side::plus) {
    if (P.has_vplus) throw NoEllipticFixedPoint("source is parabolic");
    Rat v = Rat(s.l_plus) * s.m_plus;
    if (den(v) != 1 || v <= 0) throw std::logic_error("det(sigma+) not a positive integer");
    return num(v);
  }
  if (P.has_vminus) throw NoEllipticFixedPoint("sink is parabolic");
  Rat v = Rat(s.l_minus) * s.m_minus;
  if (den(v) != 1 || v >= 0) throw std::logic_error("det(sigma-) not a negative integer");
  return num(v);
}

bool is_adapted(const DefiningP& P, AdaptMode mode) {
  for (int i = 1; i <= P.r(); ++i) {
    if (mode == AdaptMode::sink) {
      if (!(0 <= P.last(i).d && P.last(i).d < P.last(i).l)) return false;
    } else {
      if (!(-P.first(i).l < P.first(i).d && P.first(i).d <= 0)) return false;
    }
  }
  return true;
}

std::pair<DefiningP, TransformLog> adapt(const DefiningP& P, AdaptMode mode) {
  if (!is_valid(P)) throw InvalidInput("adapt: invalid defining data");
  DefiningP Q = P;
  TransformLog log;
  // arm order is untouched here; reordering (T3) belongs to normalization
  log.permutation.resize(Q.arms.size());
  std::iota(log.permutation.begin(), log.permutation.end(), 0);
  // (T1) residue shifts on arms 1..r, compensated on arm 0
  log.shifts.assign(Q.r() + 1, 0);
  Int total = 0;
  for (int i = 1; i <= Q.r(); ++i) {
    Int c;
    if (mode == AdaptMode::sink)
      c = -floor_div(Q.last(i).d, Q.last(i).l);
    else
      c = -ceil_div(Q.first(i).d, Q.first(i).l);
    if (c != 0)
      for (auto& e : Q.arms[i]) e.d += c * e.l;
    log.shifts[i] = c;
    total += c;
  }
  if (total != 0)
    for (auto& e : Q.arms[0]) e.d -= total * e.l;
  return {Q, log};
}

DefiningP negate_last_row(const DefiningP& P) {
  DefiningP Q = P;
  for (auto& arm : Q.arms) {
    for (auto& e : arm) e.d = -e.d;
    std::reverse(arm.begin(), arm.end());
  }
  std::swap(Q.has_vplus, Q.has_vminus);
  return Q;
}

std::vector<std::vector<Int>> p_columns(const DefiningP& P) {
  int r = P.r();
  std::vector<std::vector<Int>> cols;
  for (int i = 0; i <= r; ++i)
    for (const auto& e : P.arms[i]) {
      std::vector<Int> v(r + 1, 0);
      if (i == 0)
        for (int k = 0; k < r; ++k) v[k] = -e.l;
      else
        v[i - 1] = e.l;
      v[r] = e.d;
      cols.push_back(std::move(v));
    }
  if (P.has_vplus) {
    std::vector<Int> v(r + 1, 0);
    v[r] = 1;
    cols.push_back(std::move(v));
  }
  if (P.has_vminus) {
    std::vector<Int> v(r + 1, 0);
    v[r] = -1;
    cols.push_back(std::move(v));
  }
  return cols;
}

ClassGroup class_group(const DefiningP& P) {
  if (!is_valid(P)) throw InvalidInput("class_group: invalid defining data");
  auto cols = p_columns(P);
  size_t N = cols.size(), k = cols[0].size();
  // cokernel of P^T : Z^{r+1} -> Z^N
  IntMat M(N, std::vector<Int>(k));
  for (size_t j = 0; j < N; ++j)
    for (size_t t = 0; t < k; ++t) M[j][t] = cols[j][t];
  auto snf = smith_normal_form(M);
  ClassGroup cg;
  std::vector<size_t> torsion_rows, free_rows;
  for (size_t t = 0; t < N; ++t) {
    Int d = t < snf.diag.size() ? snf.diag[t] : Int(0);
    if (d == 1) continue;
    if (d == 0)
      free_rows.push_back(t);
    else {
      torsion_rows.push_back(t);
      cg.torsion.push_back(d);
    }
  }
  cg.rank = static_cast<int>(free_rows.size());
  // Degrees: image of e_j under x -> U x, expressed in torsion+free coords.
  // Normalize free coordinate signs: first nonzero degree entry positive.
  for (size_t t : free_rows) {
    for (size_t j = 0; j < N; ++j) {
      if (snf.U[t][j] != 0) {
        if (snf.U[t][j] < 0)
          for (auto& x : snf.U[t]) x = -x;
        break;
      }
    }
  }
  for (size_t j = 0; j < N; ++j) {
    std::vector<Int> deg;
    for (size_t ti = 0; ti < torsion_rows.size(); ++ti)
      deg.push_back(emod(snf.U[torsion_rows[ti]][j], cg.torsion[ti]));
    for (size_t t : free_rows) deg.push_back(snf.U[t][j]);
    cg.degrees.push_back(std::move(deg));
  }
  return cg;
}

std::vector<Trinomial> trinomials(const KStarSurface& X) {
  auto diags = validate(X);
  if (!diags.empty()) throw InvalidInput("trinomials: invalid surface data");
  const DefiningP& P = X.P;
  if (P.r() < 2) throw InvalidInput("trinomials: need r >= 2");
  size_t N = p_columns(P).size();
  // column offset of arm i
  std::vector<size_t> off(P.r() + 1, 0);
  for (int i = 1; i <= P.r(); ++i) off[i] = off[i - 1] + P.n(i - 1);
  auto arm_monomial = [&](int i) {
    std::vector<Int> e(N, 0);
    for (int j = 0; j < P.n(i); ++j) e[off[i] + j] = P.arms[i][j].l;
    return e;
  };
  auto det_a = [&](int i, int k) {
    const auto& a = X.A.columns[i];
    const auto& b = X.A.columns[k];
    return a.first * b.second - a.second * b.first;
  };
  std::vector<Trinomial> out;
  for (int i = 0; i + 2 <= P.r(); ++i) {
    Trinomial g;
    g.terms.push_back({det_a(i + 1, i + 2), arm_monomial(i)});
    g.terms.push_back({-det_a(i, i + 2), arm_monomial(i + 1)});
    g.terms.push_back({det_a(i, i + 1), arm_monomial(i + 2)});
    out.push_back(std::move(g));
  }
  return out;
}

KStarSurface random_instance(std::uint64_t seed, const RandomBounds& bounds) {
  if (bounds.max_r < 2)
    throw ToricOnly("random_instance: bounds force r <= 1 (toric)");
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int attempt = 0; attempt < 20000; ++attempt) {
    DefiningP P;
    int r = static_cast<int>(pick(2, bounds.max_r));
    P.arms.resize(r + 1);
    bool bad = false;
    for (int i = 0; i <= r && !bad; ++i) {
      int n = static_cast<int>(pick(1, bounds.max_n));
      std::vector<ArmEntry> entries;
      for (int tries = 0; tries < 64 && static_cast<int>(entries.size()) < n;
           ++tries) {
        ArmEntry e;
        e.l = pick(n == 1 ? 2 : 1, bounds.max_l);  // single arms need l >= 2
        e.d = pick(-bounds.max_d, bounds.max_d);
        if (boost::multiprecision::gcd(e.l, boost::multiprecision::abs(e.d)) != 1)
          continue;
        bool dup = false;
        for (const auto& f : entries)
          if (f.slope() == e.slope()) dup = true;
        if (!dup) entries.push_back(e);
      }
      if (entries.empty()) {
        bad = true;
        break;
      }
      std::sort(entries.begin(), entries.end(),
                [](const ArmEntry& a, const ArmEntry& b) {
                  return a.slope() > b.slope();
                });
      P.arms[i] = std::move(entries);
      if (P.first(i).l * P.n(i) < 2) bad = true;
    }
    if (bad) continue;
    P.has_vplus = rng() % 2 == 0;
    P.has_vminus = rng() % 2 == 0;
    if (!is_valid(P)) {
      // try flag combinations that the cone condition permits
      P.has_vplus = true;
      if (!is_valid(P)) {
        P.has_vminus = true;
        if (!is_valid(P)) continue;
      }
    }
    if (!is_irredundant(P) || is_toric(P)) continue;
    KStarSurface X{P, canonical_A(r + 1)};
    if (!validate(X).empty()) continue;
    return X;
  }
  throw std::runtime_error("random_instance: could not generate an instance");
}

namespace {

nlohmann::json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

Int int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::runtime_error&) {
      throw InvalidInput("expected integer, got: " + j.get<std::string>());
    }
  }
  throw InvalidInput("expected integer");
}

}  // namespace

std::string to_json(const KStarSurface& X) {
  nlohmann::json j;
  j["arms"] = nlohmann::json::array();
  for (const auto& arm : X.P.arms) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : arm)
      a.push_back({int_to_json(e.l), int_to_json(e.d)});
    j["arms"].push_back(a);
  }
  j["vplus"] = X.P.has_vplus;
  j["vminus"] = X.P.has_vminus;
  nlohmann::json A = nlohmann::json::array();
  for (const auto& c : X.A.columns)
    A.push_back({to_string(c.first), to_string(c.second)});
  j["A"] = A;
  return j.dump();
}

KStarSurface surface_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad JSON: ") + e.what());
  }
  KStarSurface X;
  try {
    for (const auto& a : j.at("arms")) {
      Arm arm;
      for (const auto& e : a) arm.push_back({int_from_json(e.at(0)), int_from_json(e.at(1))});
      X.P.arms.push_back(std::move(arm));
    }
    X.P.has_vplus = j.value("vplus", false);
    X.P.has_vminus = j.value("vminus", false);
    if (j.contains("A")) {
      for (const auto& c : j.at("A"))
        X.A.columns.emplace_back(rat_from_string(c.at(0).get<std::string>()),
                                 rat_from_string(c.at(1).get<std::string>()));
    } else {
      X.A = canonical_A(static_cast<int>(X.P.arms.size()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad surface JSON: ") + e.what());
  }
  return X;
}

}  // namespace kstar
