#include "germforge/flowcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "germforge/parallel.hpp"

namespace germforge {

namespace {

double norm(const std::vector<double>& v, std::size_t from = 0) {
  double s = 0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double smoothstep(double s) {
  if (s <= 0) return 0;
  if (s >= 1) return 1;
  return s * s * s * (10 - 15 * s + 6 * s * s);
}

std::vector<double> to_doubles(const UniPoly& p) {
  std::vector<double> out;
  for (const auto& c : p.coeffs()) out.push_back(c.get_d());
  return out;
}

double horner(const std::vector<double>& c, double v) {
  double r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * v + *it;
  return r;
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  double r = 0;
  while (r == 0) {
    for (double& v : x) v = g(rng);
    r = norm(x);
  }
  for (double& v : x) v /= r;
  return x;
}

}  // namespace

ConeBump ConeBump::make(double c1, double c2) {
  if (!(c1 > 0) || !(c2 > c1)) throw Error(ErrorKind::InvalidInput, "cone bump needs 0 < C1 < C2");
  ConeBump b;
  b.C1 = c1;
  b.C2 = c2;
  // |d(pY)/dY| <= 1 + (15/8) C2/(C2-C1) and |d(pY)/d(x,t)| <= (15/8) C2^2/(C2-C1).
  b.K = 1 + 15.0 / 8.0 * c2 * (1 + c2) / (c2 - c1);
  return b;
}

double ConeBump::profile(double ratio) const { return 1 - smoothstep((ratio - C1) / (C2 - C1)); }

double ConeBump::value(const std::vector<double>& xt, const std::vector<double>& y) const {
  const double base = norm(xt);
  const double ny = norm(y);
  if (base == 0) return ny == 0 ? 1 : 0;
  return profile(ny / base);
}

CompiledPoly::CompiledPoly(const ParamPoly& p) {
  for (const auto& [m, c] : p.terms()) terms_.push_back({m.e, to_doubles(c.num()), to_doubles(c.den())});
}

double CompiledPoly::operator()(const double* x, double lambda) const {
  double s = 0;
  for (const auto& t : terms_) {
    const double den = horner(t.den, lambda);
    if (den == 0) throw Error(ErrorKind::PoleOnRequest, "coefficient has a pole at L = " + std::to_string(lambda));
    double v = horner(t.num, lambda) / den;
    for (std::size_t i = 0; i < t.e.size(); ++i)
      for (int k = 0; k < t.e[i]; ++k) v *= x[i];
    s += v;
  }
  return s;
}

void FieldSpec::init(const Germ& f, const ParamPoly& control, const PolyMatrix<ParamScalar>& A,
                     const std::vector<ParamPoly>& X, const std::vector<Rat>& poles) {
  n_ = f.n();
  p_ = f.p();
  for (const auto& c : f.comps) F_.emplace_back(c);
  for (const auto& x : X) X_.emplace_back(x);
  for (const auto& row : A) {
    std::vector<CompiledPoly> r;
    for (const auto& e : row) r.emplace_back(e);
    A_.push_back(std::move(r));
  }
  control_ = CompiledPoly(control);
  for (const auto& r : poles) poles_.push_back(r.get_d());
  if (kind_ == FieldKind::ModifiedVPrime && !bump_)
    throw Error(ErrorKind::InvalidInput, "the modified field needs a cone bump");
}

FieldSpec::FieldSpec(const CTrivCert& cert, FieldKind kind, std::optional<ConeBump> bump, double lambda0)
    : kind_(kind), bump_(bump), lambda0_(lambda0) {
  init(cert.family, cert.control.square, cert.A, {}, cert.pole_set);
}

FieldSpec::FieldSpec(const KTrivCert& cert, FieldKind kind, std::optional<ConeBump> bump, double lambda0)
    : kind_(kind), bump_(bump), lambda0_(lambda0) {
  init(cert.family, cert.control.square, cert.A, cert.X, cert.pole_set);
}

FieldSpec FieldSpec::constant(std::size_t n, std::size_t p, std::vector<double> value) {
  if (value.size() != 1 + n + p) throw Error(ErrorKind::InvalidInput, "constant field has the wrong length");
  FieldSpec f;
  f.n_ = n;
  f.p_ = p;
  f.constant_ = std::move(value);
  return f;
}

std::vector<double> FieldSpec::family(const std::vector<double>& x, double lambda) const {
  std::vector<double> out;
  for (const auto& c : F_) out.push_back(c(x.data(), lambda));
  return out;
}

std::vector<double> FieldSpec::operator()(const std::vector<double>& s) const {
  if (s.size() != dim()) throw Error(ErrorKind::InvalidInput, "field state has the wrong length");
  if (constant_) return *constant_;
  const double lambda = s[0];
  for (double q : poles_)
    if (std::abs(lambda - q) < 1e-12)
      throw Error(ErrorKind::PoleOnRequest, "L = " + std::to_string(lambda) + " is a pole of the certificate");
  const double* x = s.data() + 1;
  const double* y = s.data() + 1 + n_;
  std::vector<double> v(dim(), 0.0);
  v[0] = 1.0;
  const double rho = control_(x, lambda);
  if (rho != 0) {
    if (kind_ != FieldKind::TargetW)
      for (std::size_t j = 0; j < X_.size(); ++j) v[1 + j] = -X_[j](x, lambda) / rho;
    if (kind_ != FieldKind::SourceX)
      for (std::size_t i = 0; i < p_; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < p_; ++j)
          if (y[j] != 0) acc += A_[i][j](x, lambda) * y[j];
        v[1 + n_ + i] = acc / rho;
      }
  }
  if (kind_ == FieldKind::ModifiedVPrime) {
    std::vector<double> xt(x, x + n_);
    xt.push_back(lambda - lambda0_);
    const double pb = bump_->value(xt, std::vector<double>(y, y + p_));
    for (double& c : v) c *= pb;
  }
  return v;
}

std::vector<double> lipschitz_estimate(const FieldSpec& field, const Probe& probe, const LipschitzOptions& opt) {
  const std::size_t n = field.n(), p = field.p();
  const double c2 = field.bump() ? field.bump()->C2 : probe.c;
  try {
    std::vector<double> at(field.dim(), 0.0);
    at[0] = field.lambda0() + (probe.kind == ProbeKind::FixedOffsetRays ? probe.t0 : 0.0);
    field(at);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PoleOnRequest) throw Error(ErrorKind::RegionAtPole, e.what());
    throw;
  }
  std::vector<double> out;
  double r = opt.r0;
  for (std::size_t level = 0; level < opt.refinements; ++level, r *= opt.shrink) {
    // Same normalized samples on every level, so levels differ only in scale.
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double best = 0;
    for (std::size_t s = 0; s < opt.samples; ++s) {
      const auto u = random_unit(rng, n);
      const double rx = r * (0.5 + 0.5 * uni(rng));
      double t = 0;
      double ny = 0;
      const double tau = 2 * uni(rng) - 1, sigma = uni(rng);
      switch (probe.kind) {
        case ProbeKind::ConeShell:
          t = tau * rx;
          ny = sigma * 1.2 * c2 * std::hypot(rx, t);
          break;
        case ProbeKind::QuadraticRays: ny = probe.c * rx * rx; break;
        case ProbeKind::LinearRays: ny = probe.c * rx; break;
        case ProbeKind::FixedOffsetRays:
          t = probe.t0;
          ny = std::hypot(rx, t);
          break;
      }
      const auto v = random_unit(rng, p);
      std::vector<double> a(field.dim());
      a[0] = field.lambda0() + t;
      for (std::size_t i = 0; i < n; ++i) a[1 + i] = rx * u[i];
      for (std::size_t i = 0; i < p; ++i) a[1 + n + i] = ny * v[i];
      auto d = random_unit(rng, field.dim());
      if (probe.kind != ProbeKind::ConeShell) d[0] = 0;
      const double dn = norm(d);
      std::vector<double> b(a);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] += opt.pair_scale * r * d[i] / dn;
      const auto fa = field(a), fb = field(b);
      std::vector<double> diff(fa.size()), step(a.size());
      for (std::size_t i = 0; i < fa.size(); ++i) diff[i] = fa[i] - fb[i];
      for (std::size_t i = 0; i < a.size(); ++i) step[i] = a[i] - b[i];
      best = std::max(best, norm(diff, opt.transverse_only ? 1 : 0) / norm(step));
    }
    out.push_back(best);
  }
  return out;
}

namespace {

template <class Cert>
FlowReport integrate(const Cert& cert, bool k_mode, double from, double to,
                     const std::vector<std::vector<double>>& points, double step, const FlowOptions& opt) {
  if (!(step > 0)) throw Error(ErrorKind::InvalidInput, "step must be positive");
  for (const auto& q : cert.pole_set) {
    const double v = q.get_d();
    if (v >= std::min(from, to) && v <= std::max(from, to))
      throw Error(ErrorKind::PoleOnRequest, "parameter interval contains the pole " + to_string(q));
  }
  const FieldSpec field(cert, FieldKind::ProductV, std::nullopt, from);
  const std::size_t n = field.n(), p = field.p();
  for (const auto& x : points)
    if (x.size() != n) throw Error(ErrorKind::InvalidInput, "initial point has the wrong length");

  const double min_step = opt.min_step > 0 ? opt.min_step : step / 16;
  for (double h0 = step;; h0 /= 2) {
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::abs(to - from) / h0)));
    const double h = (to - from) / static_cast<double>(steps);
    FlowReport rep;
    rep.lambda_from = from;
    rep.lambda_to = to;
    rep.step = std::abs(h);
    rep.samples = points.size();
    rep.endpoints.resize(points.size());
    std::vector<double> err(points.size()), defect(points.size());
    std::vector<int> left(points.size(), 0);
    parallel_for(points.size(), [&](std::size_t k) {
      std::vector<double> s(1 + n + p);
      s[0] = from;
      std::copy(points[k].begin(), points[k].end(), s.begin() + 1);
      const auto y0 = field.family(points[k], from);
      std::copy(y0.begin(), y0.end(), s.begin() + 1 + static_cast<std::ptrdiff_t>(n));
      auto rel = [&](const std::vector<double>& st) {
        const std::vector<double> x(st.begin() + 1, st.begin() + 1 + static_cast<std::ptrdiff_t>(n));
        const auto fy = field.family(x, st[0]);
        double d = 0;
        for (std::size_t i = 0; i < p; ++i) d += std::pow(st[1 + n + i] - fy[i], 2);
        return std::sqrt(d) / std::max(norm(fy), opt.floor);
      };
      auto axpy = [](const std::vector<double>& a, double c, const std::vector<double>& b) {
        std::vector<double> r(a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * b[i];
        return r;
      };
      for (std::size_t it = 0; it < steps; ++it) {
        const auto k1 = field(s);
        const auto k2 = field(axpy(s, h / 2, k1));
        const auto k3 = field(axpy(s, h / 2, k2));
        const auto k4 = field(axpy(s, h, k3));
        for (std::size_t i = 1; i < s.size(); ++i) s[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        s[0] = from + h * static_cast<double>(it + 1);
        defect[k] = std::max(defect[k], rel(s));
        if (opt.bump) {
          std::vector<double> xt(s.begin() + 1, s.begin() + 1 + static_cast<std::ptrdiff_t>(n));
          xt.push_back(s[0] - from);
          if (opt.bump->value(xt, std::vector<double>(s.begin() + 1 + static_cast<std::ptrdiff_t>(n), s.end())) < 1)
            left[k] = 1;
        }
      }
      err[k] = rel(s);
      rep.endpoints[k].assign(s.begin() + 1, s.end());
    });
    rep.max_rel_error = *std::max_element(err.begin(), err.end());
    rep.max_defect = *std::max_element(defect.begin(), defect.end());
    rep.left_cone = static_cast<std::size_t>(std::count(left.begin(), left.end(), 1));
    if (k_mode && points.size() >= 2) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b) {
          double num = 0, den = 0;
          for (std::size_t i = 0; i < n; ++i) {
            num += std::pow(rep.endpoints[a][i] - rep.endpoints[b][i], 2);
            den += std::pow(points[a][i] - points[b][i], 2);
          }
          if (den == 0) continue;
          const double q = std::sqrt(num / den);
          lo = std::min(lo, q);
          hi = std::max(hi, q);
        }
      if (hi > 0) rep.distortion = std::make_pair(lo, hi);
    }
    if (rep.max_rel_error <= opt.tolerance) return rep;
    if (h0 / 2 < min_step)
      throw Error(ErrorKind::StepRejected, "relative error " + std::to_string(rep.max_rel_error) +
                                               " exceeds the tolerance at the smallest step");
  }
}

}  // namespace

FlowReport integrate_and_check(const CTrivCert& cert, double from, double to,
                               const std::vector<std::vector<double>>& points, double step, const FlowOptions& opt) {
  return integrate(cert, false, from, to, points, step, opt);
}

FlowReport integrate_and_check(const KTrivCert& cert, double from, double to,
                               const std::vector<std::vector<double>>& points, double step, const FlowOptions& opt) {
  return integrate(cert, true, from, to, points, step, opt);
}

namespace {

template <class Cert>
Convergence convergence_of(const Cert& cert, double from, double to, const std::vector<std::vector<double>>& points,
                           double h) {
  FlowOptions opt;
  opt.tolerance = std::numeric_limits<double>::infinity();
  Convergence c;
  c.coarse_error = integrate_and_check(cert, from, to, points, h, opt).max_rel_error;
  c.fine_error = integrate_and_check(cert, from, to, points, h / 2, opt).max_rel_error;
  c.ratio = c.coarse_error / c.fine_error;
  c.order = std::log2(c.ratio);
  return c;
}

}  // namespace

Convergence convergence_ratio(const CTrivCert& cert, double from, double to,
                              const std::vector<std::vector<double>>& points, double h) {
  return convergence_of(cert, from, to, points, h);
}

Convergence convergence_ratio(const KTrivCert& cert, double from, double to,
                              const std::vector<std::vector<double>>& points, double h) {
  return convergence_of(cert, from, to, points, h);
}

std::vector<std::vector<double>> sphere_points(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_unit(rng, n));
  return out;
}

double cone_constant(const Germ& f, double from, double to, std::size_t samples, int d) {
  std::vector<CompiledPoly> comps;
  for (const auto& c : f.comps) comps.emplace_back(c);
  double best = 0;
  const auto pts = sphere_points(f.n(), samples, 3);
  for (int g = 0; g <= 10; ++g) {
    const double lambda = from + (to - from) * g / 10.0;
    for (const auto& x : pts) {
      double s = 0;
      for (const auto& c : comps) s += std::pow(c(x.data(), lambda), 2);
      best = std::max(best, std::sqrt(s) / std::pow(norm(x), d));
    }
  }
  return best;
}

}  // namespace germforge
