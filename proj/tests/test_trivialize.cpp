#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "germforge/dims.hpp"
#include "germforge/trivialize.hpp"

using namespace germforge;

namespace {

bool subset(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  return std::all_of(a.begin(), a.end(), [&](const Rat& r) { return std::find(b.begin(), b.end(), r) != b.end(); });
}

bool entries_of_degree(const PolyMatrix<ParamScalar>& A, int d) {
  for (const auto& row : A)
    for (const auto& e : row)
      if (!e.is_zero() && e.homogeneous_degree() != std::optional<int>(d)) return false;
  return true;
}

ParamPoly xyz(const Germ& f) { return ParamPoly::term(f.weights, Monomial(std::vector<int>{1, 1, 1}), ParamScalar(1)); }

const CTrivCert& base_99() {
  static const CTrivCert cert = [] {
    const Germ f = core_f_lambda();
    return *solve_c_certificate(f, component_squares(f)).cert;
  }();
  return cert;
}

}  // namespace

TEST_CASE("controls") {
  const Germ f = core_f_lambda();
  const auto c = component_squares(f);
  CHECK(c.degree() == 4);
  CHECK(c.mode == ControlMode::ComponentSquares);
  const auto m = components_plus_minors(core_8_6());
  CHECK(m.degree() == 4);
  CHECK(parse_control_mode("minors") == ControlMode::ComponentsPlusMinors);
  CHECK_THROWS_AS(parse_control_mode("cubes"), Error);
  // X9: F^2 has degree 8 and the squared partials degree 6.
  CHECK(components_plus_minors(core_x9()).degree() == 24);
}

TEST_CASE("C-certificate for f_lambda") {
  const CTrivCert& cert = base_99();
  CHECK(cert.A.size() == 3);
  CHECK(entries_of_degree(cert.A, 4));
  CHECK(subset(cert.pole_set, {Rat(0), Rat(-8), Rat(1)}));
  CHECK(verify_certificate(cert).valid);
}

TEST_CASE("C-certificate for the quadric family") {
  const Germ q = core_quadrics(0);
  const auto out = solve_c_certificate(q, component_squares(q));
  REQUIRE(out.cert);
  CHECK(out.cert->A.size() == 8);
  CHECK(out.cert->A[0].size() == 8);
  CHECK(entries_of_degree(out.cert->A, 4));
  CHECK(verify_certificate(*out.cert).valid);
}

TEST_CASE("forced degree zero has no solution") {
  const Germ f = core_f_lambda();
  const auto one = custom_control(ParamPoly::constant(f.weights, ParamScalar(1)));
  const auto out = solve_c_certificate(f, one, {ParamMode::rational(), 0});
  CHECK_FALSE(out.cert);
  REQUIRE(out.attempts.size() == 1);
  CHECK_FALSE(out.attempts[0].success);

  const auto esc = solve_c_certificate(f, one, {ParamMode::rational(), 2});
  REQUIRE(esc.cert);
  CHECK(esc.attempts.size() == 2);
  CHECK(esc.cert->control.escalation == 1);
  CHECK(esc.cert->control.degree() == 4);
}

TEST_CASE("polynomial mode is pole-free") {
  const Germ f = core_f_lambda();
  const auto out = solve_c_certificate(f, component_squares(f), {ParamMode::poly(2), 0});
  REQUIRE(out.cert);
  CHECK(out.cert->pole_set.empty());
  for (const auto& row : out.cert->A)
    for (const auto& e : row)
      for (const auto& [m, c] : e.terms()) CHECK(c.is_polynomial());
  CHECK(verify_certificate(*out.cert).valid);
  CHECK(verify_certificate(specialize(*out.cert, Rat(0))).valid);

  Germ g = f;
  g.comps[0] = g.comps[0].scale(ParamScalar(UniPoly(Rat(1)), UniPoly({Rat(1), Rat(1)})));
  CHECK_THROWS_AS(solve_c_certificate(g, component_squares(g), {ParamMode::poly(2), 0}), Error);
}

TEST_CASE("specialization coherence") {
  const CTrivCert& cert = base_99();
  for (long v : {2, 3, 5, -2}) CHECK(verify_certificate(specialize(cert, Rat(v))).valid);
  try {
    specialize(cert, Rat(0));
    FAIL("expected a pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtParameter);
  }
}

TEST_CASE("corrupted certificates fail verification") {
  CTrivCert bad = base_99();
  bad.A[1][2] += ParamPoly::term(bad.family.weights, Monomial(std::vector<int>{4, 0, 0}), ParamScalar(1));
  const auto v = verify_certificate(bad);
  CHECK_FALSE(v.valid);
  CHECK_FALSE(v.residual[1].is_zero());
  CHECK(v.residual[0].is_zero());

  CTrivCert missing = base_99();
  missing.pole_set.clear();
  if (!base_99().pole_set.empty()) {
    const auto w = verify_certificate(missing);
    CHECK_FALSE(w.poles_ok);
    CHECK_FALSE(w.valid);
  }
}

TEST_CASE("block certificate for (f_lambda, xyz)") {
  const Germ f = core_f_lambda();
  const auto socle = serre_berger(f);
  const CTrivCert blk = assemble_block_certificate(base_99(), socle, xyz(f));
  CHECK(blk.family.p() == 4);
  CHECK(verify_certificate(blk).valid);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(blk.A[i][j] == base_99().A[i][j]);
    CHECK(blk.A[i][3].is_zero());
  }
  // Row 4 is the socle identity rewritten for g4 = xyz: sum c'_i f_i + g4^2 = 0.
  ParamPoly row4 = blk.A[3][3] * xyz(f);
  for (std::size_t j = 0; j < 3; ++j) row4 += blk.A[3][j] * f.comps[j];
  CHECK(row4.is_zero());
  CHECK(blk.A[3][3] == xyz(f));
  // J = 8(1 + L^3) xyz modulo the ideal, so -1 is the only new pole.
  CHECK(std::find(blk.pole_set.begin(), blk.pole_set.end(), Rat(-1)) != blk.pole_set.end());

  auto tampered = socle;
  tampered.coefficients[0] += ParamPoly::term(f.weights, Monomial(std::vector<int>{0, 4, 0}), ParamScalar(1));
  CHECK_FALSE(verify_certificate(assemble_block_certificate(base_99(), tampered, xyz(f))).valid);

  const auto xy = ParamPoly::term(f.weights, Monomial(std::vector<int>{1, 1, 0}), ParamScalar(1));
  try {
    assemble_block_certificate(base_99(), socle, xy);
    FAIL("expected a mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BlockMismatch);
  }
  CHECK_THROWS_AS(assemble_block_certificate(base_99(), socle, xyz(f).scale(ParamScalar::param())), Error);
}

TEST_CASE("K-certificate for the (8,6) core") {
  const Germ g = core_8_6();
  const auto keq = keq_check(g, 5);
  CHECK(keq.degree == 6);
  CHECK(keq.ambient == 168);
  CHECK(keq.holds);

  const auto out = solve_k_certificate(g, components_plus_minors(g));
  REQUIRE(out.cert);
  const auto& c = *out.cert;
  CHECK(c.control.degree() == 4);
  for (const auto& x : c.X)
    if (!x.is_zero()) CHECK(x.homogeneous_degree() == std::optional<int>(5));
  CHECK(entries_of_degree(c.A, 4));
  CHECK(c.x_vanishing_order == 5);
  CHECK(verify_certificate(c).valid);
  CHECK(verify_certificate(specialize(c, Rat(3))).valid);

  KTrivCert bad = c;
  bad.X[0] = bad.X[0] + ParamPoly::term(g.weights, Monomial(std::vector<int>{5, 0, 0, 0}), ParamScalar(1));
  CHECK_FALSE(verify_certificate(bad).valid);
}

TEST_CASE("exploratory solves report every attempt") {
  for (const Germ& g : {core_x9(), core_10k_7(0)}) {
    const auto out = solve_k_certificate(g, components_plus_minors(g));
    CHECK_FALSE(out.attempts.empty());
    if (out.cert) CHECK(verify_certificate(*out.cert).valid);
  }
  const auto r = k_codim(core_10k_7(0));
  REQUIRE(r.exceptional);
  CHECK(r.exceptional->rational_drop_values == std::vector<Rat>{Rat(-3)});
}

TEST_CASE("control bounds") {
  const Germ f = core_f_lambda();
  const auto c = component_squares(f);
  const auto [lo, hi] = control_bounds(c, Rat(2), 10000);
  CHECK(lo > 0);
  CHECK(lo <= hi);
  // The three quadrics share a real zero exactly when L^3 = -1.
  try {
    control_bounds(c, Rat(-1), 10000);
    FAIL("expected a degenerate control");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateControl);
  }
  CHECK(control_bounds(c, Rat(1), 10000).first > 0);

  fixtures::Vars v(2);
  const auto q = v[0] * v[0] + v[1] * v[1];
  const Germ toy({"x", "y"}, v.w, {q, q});
  const auto [a, b] = control_bounds(component_squares(toy), Rat(0), 1000);
  CHECK(a.get_d() == doctest::Approx(2.0));
  CHECK(b.get_d() == doctest::Approx(2.0));
}
