#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "germforge/trivialize.hpp"

namespace germforge {

// p = 1 - S(s), S the quintic smoothstep, s = (|Y|/|(x,t)| - C1)/(C2 - C1).
struct ConeBump {
  double C1 = 1.0;
  double C2 = 2.0;
  double K = 0.0;  // bound for the gradient of p(x,t,Y) Y

  static ConeBump make(double c1, double c2);
  double profile(double ratio) const;
  double value(const std::vector<double>& xt, const std::vector<double>& y) const;
};

enum class FieldKind { TargetW, SourceX, ProductV, ModifiedVPrime };

// Polynomial with coefficients in Q(L), prepared for float evaluation.
class CompiledPoly {
public:
  CompiledPoly() = default;
  explicit CompiledPoly(const ParamPoly& p);
  double operator()(const double* x, double lambda) const;

private:
  struct Term {
    std::vector<int> e;
    std::vector<double> num, den;
  };
  std::vector<Term> terms_;
};

// State layout: (L, x_1..x_n, Y_1..Y_p). Values are the components of
//   C-mode: dL + sum_i (sum_j a_ij Y_j / control) dY_i
//   K-mode: adds -X_j / control on dx_j, so that Y = F(x, L) is invariant.
// The modified field multiplies every component by the bump, with t = L - lambda0.
class FieldSpec {
public:
  FieldSpec(const CTrivCert& cert, FieldKind kind, std::optional<ConeBump> bump, double lambda0);
  FieldSpec(const KTrivCert& cert, FieldKind kind, std::optional<ConeBump> bump, double lambda0);
  // Constant field for testing.
  static FieldSpec constant(std::size_t n, std::size_t p, std::vector<double> value);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  std::size_t dim() const { return 1 + n_ + p_; }
  FieldKind kind() const { return kind_; }
  const std::optional<ConeBump>& bump() const { return bump_; }
  double lambda0() const { return lambda0_; }

  // Throws PoleOnRequest at a pole of the certificate.
  std::vector<double> operator()(const std::vector<double>& state) const;
  std::vector<double> family(const std::vector<double>& x, double lambda) const;

private:
  FieldSpec() = default;
  void init(const Germ& f, const ParamPoly& control, const PolyMatrix<ParamScalar>& A,
            const std::vector<ParamPoly>& X, const std::vector<Rat>& poles);

  std::size_t n_ = 0, p_ = 0;
  FieldKind kind_ = FieldKind::ProductV;
  std::optional<ConeBump> bump_;
  double lambda0_ = 0.0;
  std::vector<double> poles_;
  std::vector<CompiledPoly> F_, X_;
  std::vector<std::vector<CompiledPoly>> A_;
  CompiledPoly control_;
  std::optional<std::vector<double>> constant_;
};

enum class ProbeKind {
  ConeShell,        // |x| ~ r, |t| <= |x|, |Y| up to 1.2 C2 |(x,t)|
  QuadraticRays,    // t = 0, |Y| = c |x|^2
  LinearRays,       // t = 0, |Y| = c |x|
  FixedOffsetRays,  // t = t0 fixed, |Y| = |(x, t0)|
};

struct Probe {
  ProbeKind kind = ProbeKind::ConeShell;
  double c = 1.0;
  double t0 = 0.5;
};

struct LipschitzOptions {
  std::size_t samples = 200;
  std::size_t refinements = 5;
  double r0 = 0.5;
  double shrink = 0.5;
  double pair_scale = 0.05;      // pair distance relative to the level radius
  bool transverse_only = true;   // ignore the dL component of the field
  std::uint64_t seed = 7;
};

// One estimate per refinement level; level k samples radius r0 * shrink^k.
// Throws RegionAtPole when lambda0 is a pole.
std::vector<double> lipschitz_estimate(const FieldSpec& field, const Probe& probe, const LipschitzOptions& opt = {});

struct FlowOptions {
  double tolerance = 1e-6;
  double min_step = 0.0;       // smallest step tried before StepRejected; 0 means step / 16
  double floor = 1e-12;
  std::optional<ConeBump> bump;  // counts trajectories leaving D1
};

struct FlowReport {
  double lambda_from = 0, lambda_to = 0, step = 0;
  std::size_t samples = 0;
  double max_rel_error = 0;    // at lambda_to
  double max_defect = 0;       // relative, over every step
  std::size_t left_cone = 0;
  std::vector<std::vector<double>> endpoints;  // (x, Y) at lambda_to
  std::optional<std::pair<double, double>> distortion;  // K-mode: min and max of |phi(a)-phi(b)|/|a-b|
};

FlowReport integrate_and_check(const CTrivCert& cert, double from, double to,
                               const std::vector<std::vector<double>>& points, double step,
                               const FlowOptions& opt = {});
FlowReport integrate_and_check(const KTrivCert& cert, double from, double to,
                               const std::vector<std::vector<double>>& points, double step,
                               const FlowOptions& opt = {});

struct Convergence {
  double coarse_error = 0, fine_error = 0, ratio = 0, order = 0;
};

// Errors at step h and h/2 with no tolerance enforced.
Convergence convergence_ratio(const CTrivCert& cert, double from, double to,
                              const std::vector<std::vector<double>>& points, double h);
Convergence convergence_ratio(const KTrivCert& cert, double from, double to,
                              const std::vector<std::vector<double>>& points, double h);

std::vector<std::vector<double>> sphere_points(std::size_t n, std::size_t count, std::uint64_t seed = 11);

// Sampled max of |F(x, L)| / |x|^d over the unit sphere and a grid of L.
double cone_constant(const Germ& f, double from, double to, std::size_t samples, int d);

}  // namespace germforge
