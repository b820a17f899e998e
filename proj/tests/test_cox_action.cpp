#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstar/cox_action.hpp"
#include "kstar/kstar_data.hpp"
#include "kstar/roots.hpp"

using namespace kstar;

namespace {

KStarSurface running_X() {
  KStarSurface X;
  X.P.arms = {{{7, -4}}, {{2, 1}}, {{1, 1}, {1, 0}}};
  X.P.has_vplus = false;
  X.P.has_vminus = false;
  X.A = canonical_A(3);
  return X;
}

// Deterministic family with a (0,1)-horizontal root supply: the off-pair arm
// keeps an exponent-1 slot so sampling and restrictions stay available.
std::vector<KStarSurface> crafted_pool() {
  std::vector<KStarSurface> out;
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
    X.P.has_vplus = false;
    X.P.has_vminus = false;
    X.A = canonical_A(3);
    if (is_valid(X.P)) out.push_back(std::move(X));
  }
  return out;
}

PRoot flagship_root(const KStarSurface& X) {
  for (const auto& r : horizontal_p_roots(X.P, Side::minus, 0, 1))
    if (r.parameter == 1) return r;
  REQUIRE(false);
  throw std::logic_error("unreachable");
}

Poly mono(const VarTable& vt, std::map<int, Int> exps, const Rat& c) {
  std::vector<Int> e(vt.nvars(), Int(0));
  for (auto [v, k] : exps) e[v] = k;
  return Poly::monomial(vt.nvars(), e, c);
}

}  // namespace

TEST_CASE("beta vectors and their relations") {
  KStarSurface X = running_X();
  CHECK(beta(X.A, 0, 1) == std::vector<Rat>{Rat(0), Rat(1), Rat(-1)});
  CHECK(beta(X.A, 1, 0) == std::vector<Rat>{Rat(1), Rat(0), Rat(-1)});
  CHECK(beta(X.A, 2, 1) == std::vector<Rat>{Rat(-1), Rat(1), Rat(0)});

  // rescaling and difference relations, on a less symmetric A
  DefiningA A;
  A.columns = {{Rat(1), Rat(2)}, {Rat(3), Rat(-1)}, {Rat(0), Rat(1)},
               {Rat(2), Rat(5)}};
  for (int i0 = 0; i0 < 4; ++i0)
    for (int i1 = 0; i1 < 4; ++i1) {
      if (i0 == i1) continue;
      auto b = beta(A, i0, i1);
      CHECK(b[i0] == 0);
      CHECK(b[i1] == 1);
      for (int io = 0; io < 4; ++io) {
        if (io == i0 || io == i1) continue;
        auto b2 = beta(A, i0, io);
        REQUIRE(b2[i1] != 0);
        for (int k = 0; k < 4; ++k) CHECK(b[k] == b2[k] / b2[i1]);
        auto lhs = beta(A, i1, io);
        auto bo = beta(A, io, i1);
        REQUIRE(b[io] != 0);
        for (int k = 0; k < 4; ++k) CHECK(lhs[k] == (b[k] - bo[k]) / b[io]);
      }
    }
}

TEST_CASE("trinomial normal form of the running example") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  CHECK(vt.ncox() == 4);
  CHECK(vt.nvars() == 6);
  CHECK(vt.t_index(0, 1) == 0);
  CHECK(vt.t_index(1, 1) == 1);
  CHECK(vt.t_index(2, 1) == 2);
  CHECK(vt.t_index(2, 2) == 3);
  Poly g = trinomial_normal_form(X, vt, 0, 1, 2);
  Poly expected = mono(vt, {{2, Int(1)}, {3, Int(1)}}, Rat(1)) +
                  mono(vt, {{0, Int(7)}}, Rat(1)) +
                  mono(vt, {{1, Int(2)}}, Rat(1));
  CHECK(g == expected);
  CHECK(all_trinomials(X, vt).size() == 1);
}

TEST_CASE("derivation of the flagship root") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  PRoot kappa = flagship_root(X);
  CHECK(kappa.u == std::vector<Int>{-1, 0, 1});
  Derivation d = lnd_of_root(X, kappa);
  CHECK(d.images[0].is_zero());
  CHECK(d.images[1] == mono(vt, {{0, Int(3)}, {2, Int(1)}}, Rat(1)));
  CHECK(d.images[2].is_zero());
  CHECK(d.images[3] == mono(vt, {{0, Int(3)}, {1, Int(1)}}, Rat(-2)));
  CHECK(lnd_preserves_ideal(X, d));
}

TEST_CASE("comorphism of the flagship root group") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  Poly s = Poly::variable(vt.nvars(), vt.s_param());
  CoxAutomorphism a = exponential(lnd_of_root(X, flagship_root(X)), s);
  CHECK(a.images[0] == Poly::variable(vt.nvars(), 0));
  CHECK(a.images[1] == Poly::variable(vt.nvars(), 1) +
                           mono(vt, {{0, Int(3)}, {2, Int(1)}, {4, Int(1)}},
                                Rat(1)));
  CHECK(a.images[2] == Poly::variable(vt.nvars(), 2));
  CHECK(a.images[3] ==
        Poly::variable(vt.nvars(), 3) +
            mono(vt, {{0, Int(3)}, {1, Int(1)}, {4, Int(1)}}, Rat(-2)) +
            mono(vt, {{0, Int(6)}, {2, Int(1)}, {4, Int(2)}}, Rat(-1)));
}

TEST_CASE("ambient root group and point map") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  PRoot kappa = flagship_root(X);
  Poly s = Poly::variable(vt.nvars(), vt.s_param());
  CoxAutomorphism lam_u = exponential(ambient_toric_lnd(X, kappa.u), s);
  // only the T11 coordinate moves
  CHECK(lam_u.images[1] ==
        Poly::variable(vt.nvars(), 1) +
            mono(vt, {{0, Int(3)}, {2, Int(1)}, {4, Int(1)}}, Rat(1)));
  CHECK(lam_u.images[3] == Poly::variable(vt.nvars(), 3));

  CoxPoint x = {Rat(1), Rat(0), Rat(-1), Rat(1)};
  REQUIRE(on_xbar(X, x));
  CoxPoint y = apply(lam_u, x, Rat(1));
  CHECK(y == CoxPoint{Rat(1), Rat(-1), Rat(-1), Rat(1)});
  CHECK(!on_xbar(X, y));
  // the full root group does leave the surface invariant there
  CoxAutomorphism lam_kappa = exponential(lnd_of_root(X, kappa), s);
  CHECK(on_xbar(X, apply(lam_kappa, x, Rat(1))));
}

TEST_CASE("restriction presentation of the flagship root") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  PRoot kappa = flagship_root(X);
  RestrictionPresentation pres = restriction_presentation(X, kappa);
  REQUIRE(pres.ambient_factors.size() == 2);
  CHECK(pres.ambient_factors[0].u_nu_iota == std::vector<Int>{0, -1, 1});
  CHECK(pres.ambient_factors[0].nu == 1);
  CHECK(pres.ambient_factors[0].iota == 2);
  CHECK(pres.ambient_factors[0].coefficient ==
        mono(vt, {{4, Int(1)}}, Rat(-2)));
  CHECK(pres.ambient_factors[1].u_nu_iota == std::vector<Int>{-1, -1, 2});
  CHECK(pres.ambient_factors[1].nu == 2);
  CHECK(pres.ambient_factors[1].coefficient ==
        mono(vt, {{4, Int(2)}}, Rat(-1)));
  CHECK(pres.equality_holds);
  // the two ambient factor derivations annihilate each other's images
  Derivation d1 = ambient_toric_lnd(X, pres.ambient_factors[0].u_nu_iota);
  Derivation d2 = ambient_toric_lnd(X, pres.ambient_factors[1].u_nu_iota);
  for (const Poly& img : d2.images) CHECK(d1.apply(img).is_zero());
  for (const Poly& img : d1.images) CHECK(d2.apply(img).is_zero());
}

TEST_CASE("sampling, ideal invariance and grading") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  auto pts = sample_points(X, 12, 7);
  CHECK(pts.size() == 12);
  for (const auto& z : pts) {
    CHECK(on_xbar(X, z));
    for (const Rat& c : z) CHECK(c != 0);
  }
  Poly s = Poly::variable(vt.nvars(), vt.s_param());
  CoxAutomorphism lam_kappa = exponential(lnd_of_root(X, flagship_root(X)), s);
  CHECK(ideal_invariance(X, lam_kappa, 10, Rat(1)));
  CHECK(ideal_invariance(X, lam_kappa, 10, Rat(-3, 2)));
  CoxAutomorphism lam_u =
      exponential(ambient_toric_lnd(X, flagship_root(X).u), s);
  CHECK(!ideal_invariance(X, lam_u, 10, Rat(1)));

  CHECK(preserves_grading(X, lam_kappa));
  CHECK(preserves_grading(X, lam_u));
  // adding mixed-degree terms breaks homogeneity
  CoxAutomorphism bad = identity_automorphism(vt);
  bad.images[1] = bad.images[1] + Poly::variable(vt.nvars(), 0);
  CHECK(!preserves_grading(X, bad));
}

TEST_CASE("one-parameter group law") {
  KStarSurface X = running_X();
  VarTable vt(X.P);
  Poly s = Poly::variable(vt.nvars(), vt.s_param());
  Poly q = Poly::variable(vt.nvars(), vt.q_param());
  Derivation d = lnd_of_root(X, flagship_root(X));
  CHECK(compose(exponential(d, s), exponential(d, q)).images ==
        exponential(d, s + q).images);
  CHECK(compose(exponential(d, s), exponential(d, -s)).images ==
        identity_automorphism(vt).images);
}

TEST_CASE("toric surface root relations") {
  // P^2: u at v1, the ladder u_mu = u_1 + (1 - mu) u at v2.
  Fan2D p2{{{1, 0}, {0, 1}, {-1, -1}}};
  const int nv = 5;
  Poly s = Poly::variable(nv, 3);
  Poly q = Poly::variable(nv, 4);
  Derivation du = toric_surface_lnd(p2, {-1, 0});
  Derivation d0 = toric_surface_lnd(p2, {0, -1});
  Derivation d1 = toric_surface_lnd(p2, {1, -1});
  // same-ray products vanish
  for (const Poly& img : d1.images) CHECK(d0.apply(img).is_zero());
  CoxAutomorphism lhs = compose(exponential(d1, s), exponential(du, q));
  CoxAutomorphism rhs = compose(
      compose(exponential(du, q), exponential(d0, s * q)), exponential(d1, s));
  CHECK(lhs.images == rhs.images);

  // P_{1,1,b}: lambda_{u_xi}(r) lambda_u(s) lambda_{u'}(s') equals the
  // braided product with binomial coefficients, for each fixed r.
  for (long b = 2; b <= 3; ++b) {
    Fan2D fan{{{1, 0}, {Int(b - 1), Int(b)}, {-1, -1}}};
    Derivation dplus = toric_surface_lnd(fan, {-1, 1});
    Derivation dminus = toric_surface_lnd(fan, {1, -1});
    std::vector<Derivation> ladder;
    for (long xi = 0; xi <= b; ++xi)
      ladder.push_back(toric_surface_lnd(fan, {Int(xi), Int(1 - xi)}));
    for (long xi = 0; xi <= b; ++xi) {
      for (Rat r : {Rat(1), Rat(-1, 2)}) {
        CoxAutomorphism left = compose(
            compose(exponential(ladder[xi], Poly::constant(nv, r)),
                    exponential(dplus, s)),
            exponential(dminus, q));
        CoxAutomorphism right =
            compose(exponential(dplus, s), exponential(dminus, q));
        for (long nu = 0; nu <= b; ++nu) {
          Poly coeff(nv);
          for (long mu = 0; mu <= std::min(nu, xi); ++mu) {
            Poly term = Poly::constant(
                nv, Rat(r * binomial(Int(xi), Int(mu)) *
                        binomial(Int(b - mu), Int(b - nu))));
            term = term * s.pow(Int(xi - mu)) * q.pow(Int(nu - mu));
            coeff = coeff + term;
          }
          right = compose(right, exponential(ladder[nu], coeff));
        }
        CHECK(left.images == right.images);
      }
    }
  }
}

TEST_CASE("relation suite over fixed and random instances") {
  int with_restriction = 0;
  int with_vertical = 0;
  auto run = [&](const KStarSurface& X) {
    RelationReport rep = relation_suite(X);
    CHECK(rep.failed.empty());
    for (const auto& name : rep.verified) {
      if (name == "restriction presentation") ++with_restriction;
      if (name == "vertical root split") ++with_vertical;
    }
  };
  run(running_X());
  for (const auto& X : crafted_pool()) run(X);
  RandomBounds bounds;
  bounds.max_r = 3;
  bounds.max_n = 3;
  bounds.max_l = 4;
  bounds.max_d = 5;
  for (std::uint64_t seed = 500; seed < 540; ++seed)
    run(random_instance(seed, bounds));
  CHECK(with_restriction >= 2);
}

TEST_CASE("malformed inputs are rejected") {
  KStarSurface X = running_X();
  PRoot kappa = flagship_root(X);
  PRoot broken = kappa;
  broken.u = {5, 5, 5};
  CHECK_THROWS_AS(lnd_of_root(X, broken), MalformedRoot);
  CHECK_THROWS_AS(ambient_toric_lnd(X, {5, 5, 5}), MalformedRoot);
  // a derivation that is not locally nilpotent
  VarTable vt(X.P);
  Derivation d(vt);
  d.images[0] = Poly::variable(vt.nvars(), 0, 2);
  CHECK_THROWS_AS(exponential(d, Poly::variable(vt.nvars(), vt.s_param())),
                  NotNilpotent);
}
