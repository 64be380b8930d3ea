#include "doctest.h"

#include <random>

#include "germforge/poly.hpp"

using namespace germforge;

namespace {

const std::vector<std::string> xyz{"x", "y", "z"};

ParamPoly var(std::size_t n, std::size_t i) { return ParamPoly::variable(Weights::uniform(n), i); }
ParamPoly cst(std::size_t n, const ParamScalar& c) { return ParamPoly::constant(Weights::uniform(n), c); }

Germ f_lambda() {
  auto x = var(3, 0), y = var(3, 1), z = var(3, 2), L = cst(3, ParamScalar::param());
  return Germ(xyz, Weights::uniform(3), {x * x + L * y * z, y * y + L * z * x, z * z + L * x * y});
}

}  // namespace

TEST_CASE("arithmetic") {
  Germ f = f_lambda();
  CHECK(f.comps[0].partial(0).to_string(xyz) == "2*x");
  CHECK((f.comps[0] * f.comps[1]).to_string(xyz) == "L*x^3*z + L*y^3*z + x^2*y^2 + L^2*x*y*z^2");
  auto xyzm = var(3, 0) * var(3, 1) * var(3, 2);
  ParamScalar c = ParamScalar(UniPoly::monomial(Rat(-2), 2));
  CHECK(xyzm.scale(c).to_string(xyz) == "-2*L^2*x*y*z");
  CHECK_THROWS_AS(var(3, 0) + var(2, 0), Error);
}

TEST_CASE("param derivative") {
  Germ f = f_lambda();
  CHECK(param_derivative(f.comps[0]).to_string(xyz) == "y*z");
  auto x = var(2, 0), y = var(2, 1), L = cst(2, ParamScalar::param());
  std::vector<std::string> xy{"x", "y"};
  CHECK(param_derivative(x * x * x * x + y * y * y * y + L * x * x * y * y).to_string(xy) == "x^2*y^2");
  ParamPoly bad = x.scale(ParamScalar(UniPoly(Rat(1)), UniPoly::param()));
  CHECK_THROWS_AS(param_derivative(bad), Error);
}

TEST_CASE("graded pieces") {
  auto x = var(1, 0);
  CHECK(((x * x) + (x * x * x)).graded_piece(3) == x * x * x);
  Weights w({3, 2});
  auto W = ParamPoly::variable(w, 0), X = ParamPoly::variable(w, 1);
  auto g = W * W + X * X * X;
  CHECK(g.graded_piece(6) == g);
  CHECK(g.homogeneous_degree() == 6);
}

TEST_CASE("canonical order gives the expected leading terms") {
  Weights w = Weights::uniform(3);
  auto deg2 = monomials_of_degree(w, 2);
  REQUIRE(deg2.size() == 6);
  // Squarefree products come before pure powers.
  CHECK(deg2.front() == Monomial({0, 1, 1}));
  CHECK(deg2.back() == Monomial({2, 0, 0}));
}

TEST_CASE("detect weights") {
  auto x = var(4, 0), y = var(4, 1), z = var(4, 2), w = var(4, 3), L = cst(4, ParamScalar::param());
  Germ a({"x", "y", "z", "w"}, Weights::uniform(4), {x * x + y * y + z * z, y * y + L * z * z + w * w});
  CHECK(detect_weights(a)->w == std::vector<int>{1, 1, 1, 1});

  auto W0 = var(4, 0), X = var(4, 1), Y = var(4, 2), Z = var(4, 3);
  Germ b({"w0", "x", "y", "z"}, Weights::uniform(4),
         {W0 * W0 + X * X * X + Y * Y * Y + Z * Z * Z + L * X * Y * Z});
  CHECK(detect_weights(b)->w == std::vector<int>{3, 2, 2, 2});

  auto p = var(2, 0), q = var(2, 1);
  Germ c({"x", "y"}, Weights::uniform(2), {p * p + q * q * q + p * q});
  CHECK_FALSE(detect_weights(c).has_value());
}

TEST_CASE("jacobian and minors") {
  auto x = var(4, 0), y = var(4, 1), z = var(4, 2), w = var(4, 3), L = cst(4, ParamScalar::param());
  std::vector<std::string> names{"x", "y", "z", "w"};
  Germ g(names, Weights::uniform(4), {x * x + y * y + z * z, y * y + L * z * z + w * w});
  auto jm = jacobian_and_minors(g);
  CHECK(jm.matrix[0][0].to_string(names) == "2*x");
  CHECK(jm.matrix[0][3].is_zero());
  CHECK(jm.matrix[1][2].to_string(names) == "2*L*z");
  std::vector<std::string> got;
  for (const auto& m : jm.minors) got.push_back(m.to_string(names));
  CHECK(got == std::vector<std::string>{"x*y", "L*x*z", "x*w", "(L-1)*y*z", "y*w", "z*w"});

  Germ f = f_lambda();
  CHECK(jacobian_determinant(f).to_string(xyz) ==
        "-2*L^2*x^3 - 2*L^2*y^3 - 2*L^2*z^3 + (2*L^3+8)*x*y*z");
}

TEST_CASE("germ validation") {
  auto x = var(2, 0), one = cst(2, ParamScalar(1));
  CHECK_THROWS_AS(Germ({"x", "y"}, Weights::uniform(2), {x * x + one}), Error);
}

TEST_CASE("property: graded pieces sum back and param derivative commutes with specialization") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> e(0, 3), c(-4, 4);
  Weights w({1, 2, 3});
  for (int trial = 0; trial < 100; ++trial) {
    ParamPoly p(w);
    for (int k = 0; k < 6; ++k) {
      Monomial m({e(rng), e(rng), e(rng)});
      p.add_term(m, ParamScalar(UniPoly(std::vector<Rat>{Rat(c(rng)), Rat(c(rng)), Rat(c(rng))})));
    }
    ParamPoly sum(w);
    for (int d = 0; d <= p.max_degree(); ++d) {
      auto piece = p.graded_piece(d);
      if (!piece.is_zero()) CHECK(piece.homogeneous_degree() == d);
      sum += piece;
    }
    CHECK(sum == p);
    // Coefficients are quadratic in L, so the derivative is determined by
    // three specializations.
    auto dp = param_derivative(p);
    for (const auto& [m, s] : p.terms()) {
      const Rat a0 = s.specialize(0), a1 = s.specialize(1), am = s.specialize(-1);
      const Rat deriv_at_0 = (a1 - am) / 2;
      CHECK(dp.coeff(m).specialize(0) == deriv_at_0);
      (void)a0;
    }
  }
}
