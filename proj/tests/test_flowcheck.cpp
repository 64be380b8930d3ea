#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "germforge/dims.hpp"
#include "germforge/flowcheck.hpp"

using namespace germforge;

namespace {

const CTrivCert& cert_99() {
  static const CTrivCert c = [] {
    const Germ f = core_f_lambda();
    return *solve_c_certificate(f, component_squares(f)).cert;
  }();
  return c;
}

const KTrivCert& cert_86() {
  static const KTrivCert c = [] {
    const Germ g = core_8_6();
    return *solve_k_certificate(g, components_plus_minors(g)).cert;
  }();
  return c;
}

double nrm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("cone bump") {
  const ConeBump b = ConeBump::make(1.0, 3.0);
  CHECK_THROWS_AS(ConeBump::make(2.0, 1.0), Error);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int s = 0; s < 500; ++s) {
    std::vector<double> xt{u(rng), u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)};
    const double base = nrm(xt), ny = nrm(y);
    const double p = b.value(xt, y);
    if (ny <= b.C1 * base) CHECK(p == 1.0);
    else if (ny >= b.C2 * base) CHECK(p == 0.0);
    else {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  }
  // Finite-difference gradient of p(x,t,Y) Y stays below K.
  double worst = 0;
  for (int s = 0; s < 2000; ++s) {
    std::vector<double> z{u(rng), u(rng), u(rng), u(rng), 2 * u(rng), 2 * u(rng)};
    auto g = [&](const std::vector<double>& w) {
      std::vector<double> xt(w.begin(), w.begin() + 4), y(w.begin() + 4, w.end());
      const double p = b.value(xt, y);
      for (double& c : y) c *= p;
      return y;
    };
    std::vector<double> d{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double dn = nrm(d);
    std::vector<double> z2(z);
    for (std::size_t i = 0; i < z.size(); ++i) z2[i] += 1e-6 * d[i] / dn;
    const auto a = g(z), c = g(z2);
    std::vector<double> diff{a[0] - c[0], a[1] - c[1]};
    worst = std::max(worst, nrm(diff) / 1e-6);
  }
  CHECK(worst <= b.K);
}

TEST_CASE("field evaluation") {
  const Germ f = core_f_lambda();
  const FieldSpec v(cert_99(), FieldKind::ProductV, std::nullopt, 2.0);
  const std::vector<double> x{1, 0, 0};
  const auto y = v.family(x, 2.0);
  CHECK(y == std::vector<double>{1, 0, 0});
  const auto val = v({2.0, 1, 0, 0, y[0], y[1], y[2]});
  REQUIRE(val.size() == 7);
  CHECK(val[0] == 1.0);
  for (double c : val) CHECK(std::isfinite(c));
  // On the graph the target components equal dF/dL = (yz, zx, xy) = 0 here.
  CHECK(std::abs(val[4]) < 1e-12);

  const ConeBump b = ConeBump::make(1.0, 2.0);
  const FieldSpec vp(cert_99(), FieldKind::ModifiedVPrime, b, 2.0);
  const auto d2 = vp({2.0, 0.1, 0, 0, 5, 5, 5});
  for (double c : d2) CHECK(c == 0.0);
  CHECK_THROWS_AS(FieldSpec(cert_99(), FieldKind::ModifiedVPrime, std::nullopt, 2.0), Error);

  REQUIRE(!cert_99().pole_set.empty());
  const double pole = cert_99().pole_set.front().get_d();
  try {
    v({pole, 1, 0, 0, 1, 0, 0});
    FAIL("expected a pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleOnRequest);
  }

  const FieldSpec w(cert_86(), FieldKind::SourceX, std::nullopt, 2.0);
  const auto sx = w({2.0, 1, 0.5, 0, 0, 1, 2});
  CHECK(sx[5] == 0.0);
  CHECK(sx[6] == 0.0);
}

TEST_CASE("Lipschitz estimates") {
  const FieldSpec c = FieldSpec::constant(2, 1, {1, 2, 3, 4});
  for (double e : lipschitz_estimate(c, {ProbeKind::ConeShell, 1.0})) CHECK(e == 0.0);

  const Germ f = core_f_lambda();
  const double C = cone_constant(f, 2, 3, 2000, 2);
  const ConeBump b = ConeBump::make(2 * C, 4 * C);
  const FieldSpec vp(cert_99(), FieldKind::ModifiedVPrime, b, 2.5);
  const auto stable = lipschitz_estimate(vp, {ProbeKind::ConeShell});
  for (std::size_t i = 1; i < stable.size(); ++i) CHECK(stable[i] / stable[i - 1] <= 1.1);

  const FieldSpec v(cert_99(), FieldKind::ProductV, std::nullopt, 2.5);
  const auto quad = lipschitz_estimate(v, {ProbeKind::QuadraticRays, 1.0});
  for (std::size_t i = 1; i < quad.size(); ++i) CHECK(quad[i] / quad[i - 1] <= 1.1);
  const auto grow = lipschitz_estimate(v, {ProbeKind::FixedOffsetRays, 1.0, 0.5});
  for (std::size_t i = 1; i < grow.size(); ++i) CHECK(grow[i] / grow[i - 1] > 1.5);

  const FieldSpec at_pole(cert_99(), FieldKind::ProductV, std::nullopt, cert_99().pole_set.front().get_d());
  try {
    lipschitz_estimate(at_pole, {ProbeKind::QuadraticRays});
    FAIL("expected a pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RegionAtPole);
  }
}

TEST_CASE("flow of the (9,9) certificate") {
  const auto pts = sphere_points(3, 100);
  FlowOptions opt;
  const double C = cone_constant(cert_99().family, 2, 3, 2000, 2);
  opt.bump = ConeBump::make(2 * C, 4 * C);
  const auto rep = integrate_and_check(cert_99(), 2, 3, pts, 1e-3, opt);
  CHECK(rep.max_rel_error <= 1e-6);
  CHECK(rep.max_defect <= 1e-6);
  CHECK(rep.endpoints.size() == 100);
  CHECK(rep.left_cone == 0);
  CHECK_FALSE(rep.distortion);
  // The family is linear in L and x is fixed, so every RK4 stage lies on the
  // graph and even a coarse step is exact up to roundoff.
  const auto coarse = integrate_and_check(cert_99(), 2, 3, pts, 0.5);
  CHECK(coarse.max_rel_error < 1e-12);

  FlowOptions strict;
  strict.tolerance = 1e-30;
  try {
    integrate_and_check(cert_99(), 2, 3, pts, 0.5, strict);
    FAIL("expected a rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepRejected);
  }
  CHECK_THROWS_AS(integrate_and_check(cert_99(), -1, 1, pts, 0.1), Error);
}

TEST_CASE("constant family keeps its endpoints") {
  fixtures::Vars v(2);
  const Germ g({"x", "y"}, v.w, {v[0] * v[0] + v[1] * v[1], v[0] * v[1]});
  CTrivCert c;
  c.family = g;
  c.control = component_squares(g);
  c.A = PolyMatrix<ParamScalar>(2, std::vector<ParamPoly>(2, ParamPoly(g.weights)));
  REQUIRE(verify_certificate(c).valid);
  const auto pts = sphere_points(2, 10);
  const auto rep = integrate_and_check(c, 0, 1, pts, 0.01);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(rep.endpoints[k][0] == pts[k][0]);
    CHECK(rep.endpoints[k][1] == pts[k][1]);
  }
  CHECK(rep.max_rel_error < 1e-15);
}

TEST_CASE("K-mode flow has fourth-order convergence") {
  const auto pts = sphere_points(4, 20);
  const auto rep = integrate_and_check(cert_86(), 2, 3, pts, 1e-2);
  CHECK(rep.max_rel_error <= 1e-6);
  REQUIRE(rep.distortion);
  CHECK(rep.distortion->first > 0);
  const auto conv = convergence_ratio(cert_86(), 2, 3, pts, 0.25);
  CHECK(conv.order >= 3.5);
  CHECK(conv.order <= 4.5);
  CHECK(conv.ratio >= 8);
  CHECK(conv.ratio <= 32);
}

TEST_CASE("graphs of degree-2 families sit in the cone near the origin") {
  for (const Germ& g : {core_f_lambda(), core_quadrics(0), core_8_6()}) {
    const double C1 = 2 * cone_constant(g, 0.5, 4, 500, 2);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (double lambda : {0.5, 1.5, 2.5, 3.0, 4.0}) {
      std::vector<CompiledPoly> comps(g.comps.begin(), g.comps.end());
      for (const auto& x0 : sphere_points(g.n(), 50, 4)) {
        const double r = u(rng);
        std::vector<double> x(x0);
        for (double& c : x) c *= r;
        double s = 0;
        for (const auto& c : comps) s += std::pow(c(x.data(), lambda), 2);
        CHECK(std::sqrt(s) <= C1 * r + 1e-15);
      }
    }
  }
}
