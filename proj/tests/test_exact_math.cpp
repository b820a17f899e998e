#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstar/exact_math.hpp"

using namespace kstar;

TEST_CASE("floor/ceil division and euclidean remainder") {
  CHECK(floor_div(7, 2) == 4 - 1);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(ceil_div(7, 2) == 4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(emod(-1, 7) == 6);
  CHECK(emod(14, 7) == 0);
  CHECK(rat_floor(Rat(-1, 14)) == -1);
  CHECK(rat_ceil(Rat(-1, 14)) == 0);
  CHECK(rat_floor(Rat(13, 14)) == 0);
}

TEST_CASE("det2 basics") {
  CHECK(det2({1, 0}, {0, 1}) == 1);
  CHECK(det2({1, 0}, {1, 3}) == 3);
  CHECK(det2({-7, -4}, {2, 1}) == 1);
}

TEST_CASE("is_primitive") {
  CHECK(is_primitive({2, 1}));
  CHECK(is_primitive({0, 1}));
  CHECK_FALSE(is_primitive({2, 4}));
  CHECK_FALSE(is_primitive({0, 2}));
}

TEST_CASE("continued fractions evaluated from the tail") {
  CHECK(cf_eval({Rat(5)}) == Rat(5));
  CHECK(cf_eval({Rat(2), Rat(2)}) == Rat(3, 2));
  CHECK(cf_eval({Rat(2), Rat(2), Rat(2)}) == Rat(4, 3));
  // chain of k twos evaluates to (k+1)/k
  std::vector<Rat> twos(6, Rat(2));
  CHECK(cf_eval(twos) == Rat(7, 6));
  CHECK(cf_eval({Rat(1), Rat(1)}) == 0);  // trailing zero is a value, not an error
  CHECK_THROWS_AS(cf_eval({Rat(2), Rat(1), Rat(1)}), DivisionByZero);
}

TEST_CASE("hilbert basis of planar cones") {
  SUBCASE("unimodular cone has no interior generators") {
    auto hb = hilbert_basis_2d({1, 0}, {0, 1});
    REQUIRE(hb.size() == 2);
    CHECK(hb.front() == LatticeVec2{1, 0});
    CHECK(hb.back() == LatticeVec2{0, 1});
  }
  SUBCASE("cone((1,0),(1,3)) fills in the column") {
    auto hb = hilbert_basis_2d({1, 0}, {1, 3});
    REQUIRE(hb.size() == 4);
    CHECK(hb[1] == LatticeVec2{1, 1});
    CHECK(hb[2] == LatticeVec2{1, 2});
  }
  SUBCASE("chain relations v'_{i-1}+v'_{i+1} = c_i v'_i with c_i >= 2") {
    auto hb = hilbert_basis_2d({2, -1}, {1, 3});
    REQUIRE(hb.size() >= 2);
    for (size_t i = 0; i + 1 < hb.size(); ++i)
      CHECK(det2(hb[i], hb[i + 1]) == 1);
    for (size_t i = 1; i + 1 < hb.size(); ++i) {
      LatticeVec2 s{hb[i - 1].x + hb[i + 1].x, hb[i - 1].y + hb[i + 1].y};
      // s = c * hb[i] with integer c >= 2
      Int c = hb[i].x != 0 ? s.x / hb[i].x : s.y / hb[i].y;
      CHECK(c >= 2);
      CHECK(s.x == c * hb[i].x);
      CHECK(s.y == c * hb[i].y);
    }
  }
  SUBCASE("rejects degenerate or misordered input") {
    CHECK_THROWS_AS(hilbert_basis_2d({1, 0}, {2, 0}), InvalidCone);
    CHECK_THROWS_AS(hilbert_basis_2d({0, 1}, {1, 0}), InvalidCone);
    CHECK_THROWS_AS(hilbert_basis_2d({2, 0}, {0, 1}), InvalidCone);
  }
}

TEST_CASE("smith normal form") {
  auto check_snf = [](const IntMat& M) {
    auto s = smith_normal_form(M);
    size_t rows = M.size(), cols = M[0].size();
    // D = U M V
    IntMat UM(rows, std::vector<Int>(cols, 0));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        for (size_t t = 0; t < rows; ++t) UM[i][j] += s.U[i][t] * M[t][j];
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) {
        Int v = 0;
        for (size_t t = 0; t < cols; ++t) v += UM[i][t] * s.V[t][j];
        Int want = (i == j && i < s.diag.size()) ? s.diag[i] : Int(0);
        CHECK(v == want);
      }
    for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
      CHECK(s.diag[i] >= 0);
      if (s.diag[i] != 0) CHECK(s.diag[i + 1] % s.diag[i] == 0);
      if (s.diag[i] == 0) CHECK(s.diag[i + 1] == 0);
    }
    return s;
  };
  SUBCASE("diagonal example with divisibility fix") {
    auto s = check_snf({{2, 0}, {0, 3}});
    CHECK(s.diag == std::vector<Int>{1, 6});
  }
  SUBCASE("rank-deficient") {
    auto s = check_snf({{1, 2}, {2, 4}});
    CHECK(s.diag == std::vector<Int>{1, 0});
  }
  SUBCASE("rectangular") {
    auto s = check_snf({{-7, -7, -4}, {2, 0, 1}, {0, 1, 1}, {0, 1, 0}});
    CHECK(s.diag == std::vector<Int>{1, 1, 1});
  }
  SUBCASE("torsion") {
    auto s = check_snf({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    CHECK(s.diag == std::vector<Int>{2, 6, 12});
  }
}

TEST_CASE("bounded residue enumeration") {
  auto got = integers_in_interval_with_residue(Rat(-5), Rat(5), 1, 3);
  CHECK(got == std::vector<Int>{-5, -2, 1, 4});
  CHECK(integers_in_interval_with_residue(Rat(1, 2), Rat(3, 4), 0, 1).empty());
  CHECK(integers_in_interval_with_residue(Rat(3), Rat(3), 0, 3) ==
        std::vector<Int>{3});
  CHECK(integers_in_interval_with_residue(Rat(5), Rat(-5), 0, 1).empty());
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(40, 20) == Int("137846528820"));
}

TEST_CASE("rational string round trips") {
  CHECK(to_string(Rat(3)) == "3");
  CHECK(to_string(Rat(-1, 14)) == "-1/14");
  CHECK(rat_from_string("13/14") == Rat(13, 14));
  CHECK(rat_from_string("-7") == Rat(-7));
  CHECK(rat_from_string(to_string(Rat(22, 4))) == Rat(11, 2));
}
