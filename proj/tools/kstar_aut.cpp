// kstar-aut: command-line reports on rational projective K*-surfaces.
//
// Input files are JSON in the library's surface format ({"arms": ...,
// "vplus": ..., "vminus": ..., "A": ...}); the toric subcommands instead
// expect {"rays": [[x, y], ...]} with primitive generators in
// counterclockwise order.  All rationals are rendered as "p" or "p/q"
// strings, never as decimals, and key order is fixed so identical inputs
// produce byte-identical output.
//
// Exit codes: 0 success, 2 invalid input (with diagnostics), 1 internal
// assertion failure (e.g. a closed formula disagreeing with an enumeration).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kstar/aut_group.hpp"
#include "kstar/cox_action.hpp"
#include "kstar/fixed_points.hpp"
#include "kstar/resolution.hpp"
#include "kstar/roots.hpp"
#include "kstar/selftest.hpp"

using json = nlohmann::ordered_json;
using namespace kstar;

namespace {

bool verbose_logging() {
  const char* v = std::getenv("KSTAR_AUT_LOG");
  return v != nullptr && *v != '\0';
}

void log(const std::string& msg) {
  if (verbose_logging()) std::cerr << "[kstar-aut] " << msg << "\n";
}

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(2, "cannot open input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

long long to_ll(const Int& v) { return v.convert_to<long long>(); }

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    return Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw CliError(2, "not a rational \"p/q\": " + text);
  }
}

KStarSurface load_surface(const std::string& path) {
  KStarSurface X;
  try {
    X = surface_from_json(read_file(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(2, std::string("cannot parse surface: ") + e.what());
  }
  auto diags = validate(X);
  if (!diags.empty()) {
    json out;
    out["valid"] = false;
    out["diagnostics"] = json::array();
    for (const auto& d : diags)
      out["diagnostics"].push_back(
          {{"code", d.code}, {"location", d.location}, {"message", d.message}});
    std::cout << out.dump(2) << "\n";
    std::exit(2);
  }
  log("loaded surface from " + path);
  return X;
}

Fan2D load_fan(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(2, std::string("cannot parse fan: ") + e.what());
  }
  if (!j.contains("rays") || !j["rays"].is_array())
    throw CliError(2, "fan input needs a \"rays\" array");
  Fan2D fan;
  for (const auto& ray : j["rays"]) {
    if (!ray.is_array() || ray.size() != 2)
      throw CliError(2, "each ray must be a pair [x, y]");
    fan.generators.push_back(
        {Int(ray[0].get<long long>()), Int(ray[1].get<long long>())});
  }
  return fan;
}

json rat_json(const Rat& r) { return to_string(r); }

json ints_json(const std::vector<Int>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_ll(x));
  return out;
}

json surface_json(const DefiningP& P) {
  json arms = json::array();
  for (const auto& arm : P.arms) {
    json a = json::array();
    for (const auto& e : arm) a.push_back({to_ll(e.l), to_ll(e.d)});
    arms.push_back(a);
  }
  return {{"arms", arms}, {"vplus", P.has_vplus}, {"vminus", P.has_vminus}};
}

json root_json(const PRoot& r) {
  json out;
  out["kind"] = r.kind == PRoot::Kind::horizontal ? "horizontal" : "vertical";
  out["side"] = r.side == Side::plus ? "plus" : "minus";
  if (r.kind == PRoot::Kind::horizontal) {
    out["i0"] = r.i0;
    out["i1"] = r.i1;
  }
  out["u"] = ints_json(r.u);
  out["parameter"] = to_ll(r.parameter);
  return out;
}

json generating_json(const GeneratingRootSet& g) {
  json out;
  switch (g.kind) {
    case GeneratingRootSet::Kind::horizontal:
      out["kind"] = "horizontal";
      break;
    case GeneratingRootSet::Kind::vertical:
      out["kind"] = "vertical";
      break;
    case GeneratingRootSet::Kind::none:
      out["kind"] = "none";
      break;
  }
  out["side"] = g.side == Side::plus ? "plus" : "minus";
  out["negated"] = g.negated;
  out["permutation"] = g.permutation;
  out["prepared"] = surface_json(g.prepared);
  out["roots"] = json::array();
  for (const auto& r : g.roots) out["roots"].push_back(root_json(r));
  return out;
}

int cmd_validate(const std::string& path) {
  KStarSurface X;
  try {
    X = surface_from_json(read_file(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(2, std::string("cannot parse surface: ") + e.what());
  }
  auto diags = validate(X);
  json out;
  out["valid"] = diags.empty();
  out["diagnostics"] = json::array();
  for (const auto& d : diags)
    out["diagnostics"].push_back(
        {{"code", d.code}, {"location", d.location}, {"message", d.message}});
  std::cout << out.dump(2) << "\n";
  return diags.empty() ? 0 : 2;
}

int cmd_scalars(const std::string& path) {
  KStarSurface X = load_surface(path);
  Scalars s = scalars(X.P);
  json out;
  json m = json::array();
  for (const auto& arm : s.m) {
    json a = json::array();
    for (const auto& v : arm) a.push_back(rat_json(v));
    m.push_back(a);
  }
  out["m"] = m;
  out["m_plus"] = rat_json(s.m_plus);
  out["m_minus"] = rat_json(s.m_minus);
  out["l_plus"] = to_ll(s.l_plus);
  out["l_minus"] = to_ll(s.l_minus);
  if (!X.P.has_vplus)
    out["det_sigma_plus"] = to_ll(det_sigma(X.P, Side::plus));
  if (!X.P.has_vminus)
    out["det_sigma_minus"] = to_ll(det_sigma(X.P, Side::minus));
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_intersections(const std::string& path) {
  KStarSurface X = load_surface(path);
  IntersectionTable t = self_intersections(X.P);
  json out;
  out["self"] = json::array();
  for (const auto& [key, val] : t.self)
    out["self"].push_back(
        {{"i", key.first}, {"j", key.second}, {"value", rat_json(val)}});
  out["dplus_sq"] = t.dplus_sq ? rat_json(*t.dplus_sq) : json(nullptr);
  out["dminus_sq"] = t.dminus_sq ? rat_json(*t.dminus_sq) : json(nullptr);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_report(const std::string& path) {
  KStarSurface X = load_surface(path);
  FixedPointReport rep = fixed_point_report(X.P);
  auto elliptic = [](const EllipticReport& e) {
    json out;
    out["quasismooth"] = e.quasismooth;
    out["smooth"] = e.smooth;
    out["simple"] = e.simple;
    if (e.leading_indices)
      out["leading_indices"] = {e.leading_indices->first,
                                e.leading_indices->second};
    if (e.exceptional_index) out["exceptional_index"] = *e.exceptional_index;
    return out;
  };
  json out;
  out["all_smooth"] = rep.all_smooth();
  out["source"] = {{"parabolic", rep.source.exists},
                   {"x_smooth", rep.source.x_smooth}};
  out["sink"] = {{"parabolic", rep.sink.exists},
                 {"x_smooth", rep.sink.x_smooth}};
  if (!rep.source.exists) out["elliptic_plus"] = elliptic(rep.elliptic_plus);
  if (!rep.sink.exists) out["elliptic_minus"] = elliptic(rep.elliptic_minus);
  out["hyperbolic_smooth"] = rep.hyperbolic_smooth;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_resolve(const std::string& path, const std::string& mode) {
  KStarSurface X = load_surface(path);
  ResolutionOutput res =
      mode == "canonical" ? canonical_resolution(X.P) : minimal_resolution(X.P);
  json out;
  out["mode"] = mode;
  out["resolved"] = surface_json(res.resolved);
  out["fibers"] = json::object();
  for (const auto& [point, cols] : res.fibers) {
    json fiber = json::array();
    for (auto [arm, j] : cols) fiber.push_back({arm, j});
    out["fibers"][point] = fiber;
  }
  out["column_map"] = json::array();
  for (const auto& origin : res.column_map) {
    json entry;
    entry["kind"] = origin.kind == ColumnOrigin::Kind::original ? "original"
                                                                : "exceptional";
    if (origin.kind == ColumnOrigin::Kind::original) {
      entry["arm"] = origin.arm;
      entry["index"] = origin.index;
    } else {
      entry["over"] = origin.over;
    }
    out["column_map"].push_back(entry);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_roots(const std::string& path, const std::string& mode) {
  json out;
  out["mode"] = mode;
  if (mode == "toric") {
    Fan2D fan = load_fan(path);
    auto roots = toric_demazure_roots(fan);
    out["per_ray"] = json::object();
    Int total = 0;
    for (const auto& [i, us] : roots) {
      json list = json::array();
      for (const auto& u : us) list.push_back({to_ll(u.x), to_ll(u.y)});
      out["per_ray"][std::to_string(i)] = list;
      total += Int(us.size());
    }
    out["total"] = to_ll(total);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  KStarSurface X = load_surface(path);
  GeneratingRootSet g = generating_root_set(X.P);
  if (mode == "all" || mode == "horizontal") {
    json list = json::array();
    if (g.kind == GeneratingRootSet::Kind::horizontal)
      for (const auto& r : g.roots) list.push_back(root_json(r));
    out["horizontal"] = list;
  }
  if (mode == "all" || mode == "vertical") {
    json list = json::array();
    for (Side side : {Side::plus, Side::minus}) {
      bool exists = side == Side::plus ? X.P.has_vplus : X.P.has_vminus;
      if (!exists) continue;
      for (const auto& r : vertical_p_roots(X.P, side))
        list.push_back(root_json(r));
    }
    out["vertical"] = list;
  }
  if (mode == "all") out["generating"] = generating_json(g);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_act(const std::string& path, const std::string& kind,
            const std::string& side, int i0, int i1,
            const std::vector<long long>& u, const std::string& param,
            const std::vector<std::string>& point) {
  KStarSurface X = load_surface(path);
  PRoot root;
  root.kind =
      kind == "vertical" ? PRoot::Kind::vertical : PRoot::Kind::horizontal;
  root.side = side == "plus" ? Side::plus : Side::minus;
  root.i0 = i0;
  root.i1 = i1;
  for (long long v : u) root.u.push_back(Int(v));
  if (static_cast<int>(root.u.size()) != X.P.r() + 1)
    throw CliError(2, "--u needs r+1 entries (u_1, ..., u_r, u_{r+1})");
  VarTable vt(X.P);
  if (static_cast<int>(point.size()) != vt.ncox())
    throw CliError(2, "--point needs one entry per Cox variable");
  CoxPoint z;
  for (const auto& c : point) z.push_back(parse_rat(c));
  Rat s = parse_rat(param);
  Derivation delta = lnd_of_root(X, root);
  CoxAutomorphism a =
      exponential(delta, Poly::variable(vt.nvars(), vt.s_param()));
  CoxPoint image = apply(a, z, s);
  json out;
  out["root"] = root_json(root);
  out["param"] = to_string(s);
  json zj = json::array(), ij = json::array();
  for (const auto& c : z) zj.push_back(rat_json(c));
  for (const auto& c : image) ij.push_back(rat_json(c));
  out["point"] = zj;
  out["point_on_surface"] = on_xbar(X, z);
  out["image"] = ij;
  out["image_on_surface"] = on_xbar(X, image);
  std::cout << out.dump(2) << "\n";
  return 0;
}

json autgroup_json(const AutStructure& aut) {
  json out;
  switch (aut.kind) {
    case AutStructure::Case::Horizontal:
      out["case"] = "horizontal";
      break;
    case AutStructure::Case::Vertical:
      out["case"] = "vertical";
      break;
    case AutStructure::Case::NoRoots:
      out["case"] = "none";
      break;
  }
  out["rho"] = aut.rho;
  out["zeta"] = aut.zeta;
  out["psi"] = ints_json(aut.psi_exponents);
  out["phi_dim"] = aut.phi ? json(aut.phi->dim) : json(nullptr);
  out["presentation"] = aut.presentation;
  out["generating_roots"] = generating_json(aut.roots);
  out["notes"] = aut.notes;
  return out;
}

int cmd_autgroup(const std::string& path) {
  json head = json::parse(read_file(path), nullptr, false);
  if (!head.is_discarded() && head.contains("rays")) {
    ToricAutReport rep = toric_aut0(load_fan(path));
    json out;
    out["case"] = "toric";
    out["ell"] = rep.ell;
    out["rho"] = to_ll(rep.rho);
    out["b"] = to_ll(rep.b);
    out["structure"] = rep.structure;
    json psi = json::array();
    for (const auto& [a, b] : rep.psi_pairs) psi.push_back({to_ll(a), to_ll(b)});
    out["psi_pairs"] = psi;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  KStarSurface X = load_surface(path);
  std::cout << autgroup_json(aut0_structure(X)).dump(2) << "\n";
  return 0;
}

int cmd_classify(const std::string& path) {
  KStarSurface X = load_surface(path);
  Classification c = classify(X);
  json out;
  out["almost_homogeneous"] = c.almost_homogeneous;
  out["series_one_holds"] = c.series_one_holds;
  out["series_two_holds"] = c.series_two_holds;
  out["groups"] = json::array();
  for (const auto& g : c.groups)
    out["groups"].push_back({{"name", g.name},
                             {"twist_exponent", to_ll(g.twist_exponent)},
                             {"isotropy_order", to_ll(g.isotropy_order)},
                             {"compactification", g.compactification}});
  out["equivariant_compactification_of_K2"] =
      c.equivariant_compactification_of_K2;
  out["additive_action_families"] = c.additive_action_families;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_selftest(std::uint64_t seed, int count, const RandomBounds& bounds) {
  log("selftest: seed " + std::to_string(seed) + ", " + std::to_string(count) +
      " random instances");
  SelftestSummary sum =
      run_property_suite(seed, count, bounds, verbose_logging());
  json out;
  out["instances"] = sum.instances;
  out["passed"] = json::object();
  for (const auto& [name, n] : sum.passed) out["passed"][name] = n;
  out["skipped"] = json::object();
  for (const auto& [name, n] : sum.skipped) out["skipped"][name] = n;
  out["failures"] = sum.failures;
  out["ok"] = sum.ok();
  std::cout << out.dump(2) << "\n";
  return sum.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reports on rational projective K*-surfaces"};
  app.require_subcommand(1);

  std::string path, mode = "minimal", roots_mode = "all";
  std::string kind = "horizontal", side = "minus", param = "1";
  int i0 = 0, i1 = 1;
  std::vector<long long> u;
  std::vector<std::string> point;
  std::uint64_t seed = 7;
  int count = 200;
  RandomBounds bounds;
  bounds.max_r = 4;
  bounds.max_n = 4;
  bounds.max_l = 7;
  bounds.max_d = 9;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", path, "input JSON file")->required();
  };
  add_file(app.add_subcommand("validate", "check defining data"));
  add_file(app.add_subcommand("scalars", "slopes and arm scalars"));
  add_file(app.add_subcommand("intersections", "self-intersection numbers"));
  add_file(app.add_subcommand("report", "fixed-point report"));
  auto* resolve = app.add_subcommand("resolve", "resolution of singularities");
  resolve->add_option("mode", mode, "canonical|minimal")
      ->check(CLI::IsMember({"canonical", "minimal"}))
      ->required();
  add_file(resolve);
  auto* roots = app.add_subcommand("roots", "root enumerations");
  roots->add_option("mode", roots_mode, "horizontal|vertical|toric|all")
      ->check(CLI::IsMember({"horizontal", "vertical", "toric", "all"}))
      ->required();
  add_file(roots);
  auto* act = app.add_subcommand("act", "apply a root-group element");
  add_file(act);
  act->add_option("--kind", kind)->check(
      CLI::IsMember({"horizontal", "vertical"}));
  act->add_option("--side", side)->check(CLI::IsMember({"plus", "minus"}));
  act->add_option("--i0", i0);
  act->add_option("--i1", i1);
  act->add_option("--u", u, "root coordinates u_1,...,u_{r+1}")
      ->required()
      ->delimiter(',');
  act->add_option("--param", param, "group parameter as \"p/q\"");
  act->add_option("--point", point, "Cox coordinates as \"p/q\" list")
      ->required()
      ->delimiter(',');
  add_file(app.add_subcommand("autgroup", "unit component of Aut(X)"));
  add_file(app.add_subcommand("classify", "almost-homogeneity classification"));
  auto* selftest = app.add_subcommand("selftest", "cross-module property suite");
  selftest->add_option("--seed", seed);
  selftest->add_option("--count", count);
  selftest->add_option("--max-r", bounds.max_r);
  selftest->add_option("--max-n", bounds.max_n);
  selftest->add_option("--max-l", bounds.max_l);
  selftest->add_option("--max-d", bounds.max_d);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("validate")) return cmd_validate(path);
    if (app.got_subcommand("scalars")) return cmd_scalars(path);
    if (app.got_subcommand("intersections")) return cmd_intersections(path);
    if (app.got_subcommand("report")) return cmd_report(path);
    if (app.got_subcommand("resolve")) return cmd_resolve(path, mode);
    if (app.got_subcommand("roots")) return cmd_roots(path, roots_mode);
    if (app.got_subcommand("act"))
      return cmd_act(path, kind, side, i0, i1, u, param, point);
    if (app.got_subcommand("autgroup")) return cmd_autgroup(path);
    if (app.got_subcommand("classify")) return cmd_classify(path);
    if (app.got_subcommand("selftest")) return cmd_selftest(seed, count, bounds);
  } catch (const CliError& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return e.code;
  } catch (const InvalidInput& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const ToricInput& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
  return 1;
}
