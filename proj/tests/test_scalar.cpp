#include "doctest.h"

#include <random>

#include "germforge/scalar.hpp"

using namespace germforge;

namespace {

ParamScalar L() { return ParamScalar::param(); }

UniPoly poly(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return UniPoly(v);
}

// Random element of Q(L) with small degrees and coefficients.
ParamScalar random_scalar(std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(0, 2), coef(-5, 5);
  auto rp = [&] {
    std::vector<Rat> c(deg(rng) + 1);
    for (auto& x : c) x = coef(rng);
    return UniPoly(c);
  };
  UniPoly den = rp();
  while (den.is_zero()) den = rp();
  return ParamScalar(rp(), den);
}

}  // namespace

TEST_CASE("field operations normalize") {
  CHECK(L() * L() == ParamScalar(UniPoly::monomial(Rat(1), 2)));
  CHECK((ParamScalar(poly({-1, 0, 1})) / ParamScalar(poly({-1, 1}))) == ParamScalar(poly({1, 1})));
  ParamScalar a = ParamScalar(poly({8, 1}), poly({0, 1}));
  ParamScalar b = ParamScalar(poly({1}), poly({0, 1}));
  CHECK((a - b) == ParamScalar(poly({7, 1}), poly({0, 1})));
  CHECK_THROWS_AS(L() / ParamScalar(0), Error);
}

TEST_CASE("specialize and poles") {
  ParamScalar s(poly({1}), poly({-1, 1}));
  CHECK(s.specialize(Rat(2)) == 1);
  try {
    s.specialize(Rat(1));
    FAIL("expected pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtParameter);
  }
  CHECK(ParamScalar(poly({0, -8, 7, 1})).specialize(Rat(-8)) == 0);
}

TEST_CASE("rational roots") {
  auto r = rational_roots(poly({27, 0, 0, 1}));
  REQUIRE(r.roots.size() == 1);
  CHECK(r.roots[0] == -3);
  CHECK(r.residual == poly({9, -3, 1}));
  r = rational_roots(poly({0, -8, 7, 1}));
  CHECK(r.roots == std::vector<Rat>{Rat(-8), Rat(0), Rat(1)});
  CHECK(r.residual.is_one());
  r = rational_roots(poly({1, 0, 1}));
  CHECK(r.roots.empty());
  CHECK(r.residual == poly({1, 0, 1}));
  CHECK_THROWS_AS(rational_roots(UniPoly()), Error);
  r = rational_roots(poly({-1, 0, 4}));
  CHECK(r.roots == std::vector<Rat>{Rat(-1, 2), Rat(1, 2)});
}

TEST_CASE("gcd and squarefree part") {
  UniPoly a = poly({-1, 1}) * poly({-1, 1}) * poly({2, 1});
  UniPoly b = poly({-1, 1}) * poly({3, 1});
  CHECK(gcd(a, b) == poly({-1, 1}));
  CHECK(squarefree_part(a) == (poly({-1, 1}) * poly({2, 1})).monic());
}

TEST_CASE("textual form") {
  CHECK(ParamScalar(poly({-1, 0, 1}), poly({8, 1})).to_string() == "(L^2-1)/(L+8)");
  CHECK(L().to_string() == "L");
  CHECK(ParamScalar(Rat(-3, 2)).to_string() == "-3/2");
}

TEST_CASE("property: specialization is a ring homomorphism") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-20, 20);
  for (int trial = 0; trial < 300; ++trial) {
    ParamScalar a = random_scalar(rng), b = random_scalar(rng);
    Rat v(val(rng), 3);
    v.canonicalize();
    auto safe = [&](const ParamScalar& s) { return sgn(s.den().eval(v)) != 0; };
    if (!safe(a) || !safe(b)) continue;
    const Rat av = a.specialize(v), bv = b.specialize(v);
    CHECK((a + b).specialize(v) == av + bv);
    CHECK((a - b).specialize(v) == av - bv);
    CHECK((a * b).specialize(v) == av * bv);
    if (!b.is_zero() && sgn(bv) != 0) CHECK((a / b).specialize(v) == av / bv);
    CHECK((a - a).is_zero());
    if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
  }
}

TEST_CASE("property: rational roots agree with brute force") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> root(-6, 6), den(1, 3), extra(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    UniPoly p(Rat(1));
    std::vector<Rat> expected;
    for (int k = 0; k < 3; ++k) {
      Rat r(root(rng), den(rng));
      r.canonicalize();
      p *= UniPoly(std::vector<Rat>{-r, Rat(1)});
      expected.push_back(r);
    }
    if (extra(rng)) p *= poly({2, 0, 1});
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    auto rep = rational_roots(p.scaled(Rat(6)));
    CHECK(rep.roots == expected);
    for (const auto& r : rep.roots) CHECK(sgn(p.eval(r)) == 0);
  }
}
