#include "doctest.h"

#include <random>

#include "germforge/linalg.hpp"

using namespace germforge;

namespace {

ParamScalar L() { return ParamScalar::param(); }

ParamScalar lin(long a, long b) { return ParamScalar(UniPoly(std::vector<Rat>{Rat(a), Rat(b)})); }

template <class K>
Mat<K> random_mat(std::mt19937& rng, std::size_t r, std::size_t c, int density) {
  std::uniform_int_distribution<int> coef(-3, 3), keep(0, 9);
  Mat<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (keep(rng) < density) {
        if constexpr (std::is_same_v<K, Rat>) m(i, j) = coef(rng);
        else m(i, j) = lin(coef(rng), coef(rng));
      }
  return m;
}

}  // namespace

TEST_CASE("solve examples") {
  auto r = rank_and_solve(Mat<Rat>::identity(3), Mat<Rat>::from_rows({{1}, {2}, {3}}));
  CHECK(r.rank == 3);
  REQUIRE(r.solution);
  CHECK(*r.solution == Mat<Rat>::from_rows({{1}, {2}, {3}}));

  auto a = Mat<ParamScalar>::from_rows({{L(), 0}, {0, L()}});
  auto s = rank_and_solve(a, Mat<ParamScalar>::from_rows({{L()}, {L() * L()}}));
  REQUIRE(s.solution);
  CHECK((*s.solution)(0, 0) == ParamScalar(1));
  CHECK((*s.solution)(1, 0) == L());

  auto none = rank_and_solve(Mat<Rat>::from_rows({{1, 1}, {1, 1}}), Mat<Rat>::from_rows({{0}, {1}}));
  CHECK_FALSE(none.solution.has_value());
}

TEST_CASE("nullspace examples") {
  CHECK(nullspace(Mat<Rat>::identity(3)).cols() == 0);
  auto n = nullspace(Mat<Rat>::from_rows({{1, 1}}));
  REQUIRE(n.cols() == 1);
  CHECK(n(0, 0) == -n(1, 0));
  CHECK(sgn(n(0, 0)) != 0);
}

TEST_CASE("determinant") {
  CHECK(determinant(Mat<Rat>::from_rows({{1, 2}, {3, 4}})) == -2);
  auto d = determinant(Mat<ParamScalar>::from_rows({{1, L()}, {L(), 1}}));
  CHECK(d == ParamScalar(UniPoly(std::vector<Rat>{Rat(1), Rat(0), Rat(-1)})));
}

TEST_CASE("rank drop locus examples") {
  auto r = rank_drop_locus(Mat<ParamScalar>::from_rows({{L(), 0}, {0, 1}}));
  CHECK(r.generic_rank == 2);
  CHECK(r.rational_drop_values == std::vector<Rat>{Rat(0)});

  r = rank_drop_locus(Mat<ParamScalar>::from_rows({{1, L()}, {L(), 1}}));
  CHECK(r.generic_rank == 2);
  CHECK(r.rational_drop_values == std::vector<Rat>{Rat(-1), Rat(1)});
  CHECK(r.drop_polynomial == UniPoly(std::vector<Rat>{Rat(-1), Rat(0), Rat(1)}));

  // L^3 + 27 has one rational root; the quadratic cofactor is residual.
  ParamScalar c = ParamScalar(UniPoly(std::vector<Rat>{Rat(27), Rat(0), Rat(0), Rat(1)}));
  r = rank_drop_locus(Mat<ParamScalar>::from_rows({{c, 0}, {0, 1}}));
  CHECK(r.rational_drop_values == std::vector<Rat>{Rat(-3)});
  CHECK(r.residual_factor == UniPoly(std::vector<Rat>{Rat(9), Rat(-3), Rat(1)}));

  CHECK_THROWS_AS(rank_drop_locus(Mat<ParamScalar>(2, 2)), Error);
}

TEST_CASE("property: solutions and nullspaces are exact over Q") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    auto a = random_mat<Rat>(rng, r, c, 5);
    auto x0 = random_mat<Rat>(rng, c, 1, 8);
    auto b = a * x0;
    auto res = rank_and_solve(a, b);
    REQUIRE(res.solution);
    CHECK(a * *res.solution == b);
    auto ns = nullspace(a);
    CHECK(res.rank + ns.cols() == c);
    if (ns.cols() > 0) CHECK((a * ns).is_zero());
  }
}

TEST_CASE("property: parametric rank bounds specialized ranks") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dim(2, 5), val(-50, 50);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    auto a = random_mat<ParamScalar>(rng, r, c, 6);
    if (a.is_zero()) continue;
    auto rep = rank_drop_locus(a);
    CHECK(rank_and_solve(a).rank == rep.generic_rank);
    for (int k = 0; k < 5; ++k) {
      Rat v(val(rng), 7);
      v.canonicalize();
      const auto rv = rank_and_solve(specialize(a, v)).rank;
      CHECK(rv <= rep.generic_rank);
      if (sgn(rep.drop_polynomial.eval(v)) != 0) CHECK(rv == rep.generic_rank);
    }
    for (const auto& v : rep.rational_drop_values) CHECK(rank_and_solve(specialize(a, v)).rank < rep.generic_rank);
    auto x0 = random_mat<ParamScalar>(rng, c, 1, 8);
    auto b = a * x0;
    auto sol = rank_and_solve(a, b);
    REQUIRE(sol.solution);
    CHECK(a * *sol.solution == b);
  }
}
