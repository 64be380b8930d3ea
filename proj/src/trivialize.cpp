#include "germforge/trivialize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "germforge/ansatz.hpp"
#include "germforge/parallel.hpp"

namespace germforge {

std::string_view to_string(ControlMode m) {
  switch (m) {
    case ControlMode::ComponentSquares: return "sum_of_component_squares";
    case ControlMode::ComponentsPlusMinors: return "components_plus_minors";
    case ControlMode::Custom: return "custom";
  }
  return "custom";
}

ControlMode parse_control_mode(std::string_view s) {
  if (s == "sum_of_component_squares" || s == "squares") return ControlMode::ComponentSquares;
  if (s == "components_plus_minors" || s == "minors") return ControlMode::ComponentsPlusMinors;
  if (s == "custom") return ControlMode::Custom;
  throw Error(ErrorKind::InvalidInput, "unknown control mode '" + std::string(s) + "'");
}

int ControlFunction::degree() const {
  const auto d = square.homogeneous_degree();
  if (!d) throw Error(ErrorKind::InhomogeneousGenerator, "control is zero or not weighted-homogeneous");
  return *d;
}

std::string ParamMode::to_string() const {
  return polynomial ? "polynomial(" + std::to_string(degree) + ")" : "rational";
}

namespace {

ParamPoly power(const ParamPoly& p, int e) {
  ParamPoly r = ParamPoly::constant(p.weights(), ParamScalar(1));
  for (int i = 0; i < e; ++i) r = r * p;
  return r;
}

ParamPoly homogenized_squares(const Weights& w, const std::vector<ParamPoly>& parts) {
  std::vector<std::pair<ParamPoly, int>> squares;
  int l = 1;
  for (const auto& q : parts) {
    if (q.is_zero()) continue;
    ParamPoly s = q * q;
    const auto d = s.homogeneous_degree();
    if (!d) throw Error(ErrorKind::InhomogeneousGerm, "control ingredient is not weighted-homogeneous");
    l = std::lcm(l, *d);
    squares.emplace_back(std::move(s), *d);
  }
  if (squares.empty()) throw Error(ErrorKind::DegenerateControl, "all control ingredients vanish");
  ParamPoly sum(w);
  for (const auto& [s, d] : squares) sum += power(s, l / d);
  return sum;
}

std::vector<ParamPoly> derivative_of(const Germ& f) { return param_derivative(f).comps; }

// deg(dF_i/dL) - deg(F_i) must agree across the nonzero rows.
int derivative_shift(const Germ& f, const std::vector<ParamPoly>& df) {
  std::optional<int> shift;
  for (std::size_t i = 0; i < f.p(); ++i) {
    if (df[i].is_zero()) continue;
    const auto a = df[i].homogeneous_degree();
    const auto b = f.component_degree(i);
    if (!a || !b) throw Error(ErrorKind::InhomogeneousGerm, "component or its L-derivative is not homogeneous");
    if (shift && *shift != *a - *b)
      throw Error(ErrorKind::InhomogeneousGerm, "L-derivative shifts component degrees unevenly");
    shift = *a - *b;
  }
  return shift.value_or(0);
}

std::optional<std::vector<Poly<ParamScalar>>> run_ansatz(const Ansatz<ParamScalar>& a, const ParamMode& mode) {
  return mode.polynomial ? solve_ansatz_polynomial(a, mode.degree) : solve_ansatz(a);
}

void check_degree(const ParamPoly& e, int forced) {
  if (e.is_zero()) return;
  const auto d = e.homogeneous_degree();
  if (!d || *d != forced)
    throw Error(ErrorKind::InvalidInput, "certificate entry is not homogeneous of the forced degree");
}

std::vector<ParamPoly> all_entries(const PolyMatrix<ParamScalar>& a, const std::vector<ParamPoly>& x = {}) {
  std::vector<ParamPoly> out(x);
  for (const auto& row : a) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::optional<PolyMatrix<ParamScalar>> solve_c_once(const Germ& f, const std::vector<ParamPoly>& df,
                                                   const ParamPoly& control, const ParamMode& mode) {
  const std::size_t p = f.p();
  const int dc = *control.homogeneous_degree();
  std::vector<std::optional<std::vector<ParamPoly>>> rows(p);
  std::vector<int> ok(p, 1);
  parallel_for(p, [&](std::size_t i) {
    if (df[i].is_zero()) {
      rows[i] = std::vector<ParamPoly>(p, ParamPoly(f.weights));
      return;
    }
    Ansatz<ParamScalar> a;
    a.weights = f.weights;
    a.coeff.emplace_back();
    const int target = dc + *df[i].homogeneous_degree();
    for (std::size_t j = 0; j < p; ++j) {
      const auto dj = f.comps[j].is_zero() ? std::nullopt : f.comps[j].homogeneous_degree();
      a.unknown_degrees.push_back(dj ? target - *dj : -1);
      a.coeff[0].push_back(f.comps[j]);
    }
    a.rhs.push_back(control * df[i]);
    rows[i] = run_ansatz(a, mode);
    if (!rows[i]) {
      ok[i] = 0;
      return;
    }
    for (std::size_t j = 0; j < p; ++j) check_degree((*rows[i])[j], a.unknown_degrees[j]);
  });
  PolyMatrix<ParamScalar> A;
  for (std::size_t i = 0; i < p; ++i) {
    if (!ok[i]) return std::nullopt;
    A.push_back(std::move(*rows[i]));
  }
  return A;
}

struct KSolution {
  std::vector<ParamPoly> X;
  PolyMatrix<ParamScalar> A;
};

std::optional<KSolution> solve_k_once(const Germ& f, const std::vector<ParamPoly>& df, const ParamPoly& control,
                                      const ParamMode& mode) {
  const std::size_t n = f.n(), p = f.p();
  const int dc = *control.homogeneous_degree();
  const int shift = derivative_shift(f, df);
  const auto jac = jacobian(f);
  Ansatz<ParamScalar> a;
  a.weights = f.weights;
  for (std::size_t j = 0; j < n; ++j) a.unknown_degrees.push_back(dc + shift + f.weights.w[j]);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t l = 0; l < p; ++l) {
      const auto di = f.component_degree(i);
      const auto dl = f.component_degree(l);
      a.unknown_degrees.push_back(di && dl ? dc + shift + *di - *dl : -1);
    }
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<ParamPoly> row(n + p * p, ParamPoly(f.weights));
    for (std::size_t j = 0; j < n; ++j) row[j] = jac[i][j];
    for (std::size_t l = 0; l < p; ++l) row[n + i * p + l] = f.comps[l];
    a.coeff.push_back(std::move(row));
    a.rhs.push_back(control * df[i]);
  }
  auto sol = run_ansatz(a, mode);
  if (!sol) return std::nullopt;
  for (std::size_t u = 0; u < sol->size(); ++u) check_degree((*sol)[u], a.unknown_degrees[u]);
  KSolution out;
  out.X.assign(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < p; ++i)
    out.A.emplace_back(sol->begin() + static_cast<std::ptrdiff_t>(n + i * p),
                       sol->begin() + static_cast<std::ptrdiff_t>(n + (i + 1) * p));
  return out;
}

template <class Cert, class Once, class Build>
SolveOutcome<Cert> escalate(const Germ& f, const ControlFunction& control, const SolveOptions& opt, Once once,
                            Build build) {
  const auto df = derivative_of(f);
  const ParamPoly sos = component_squares(f).square;
  SolveOutcome<Cert> out;
  ControlFunction c = control;
  for (int e = 0; e <= opt.max_escalations; ++e) {
    SolveAttempt att;
    att.escalation = c.escalation;
    att.control_degree = c.degree();
    auto sol = once(f, df, c.square, opt.mode);
    att.success = sol.has_value();
    att.note = att.success ? "solved" : "no solution at the forced degrees";
    out.attempts.push_back(att);
    if (sol) {
      out.cert = build(f, c, std::move(*sol), opt.mode);
      return out;
    }
    c.square = c.square * sos;
    ++c.escalation;
  }
  return out;
}

}  // namespace

ControlFunction component_squares(const Germ& f) {
  return ControlFunction{homogenized_squares(f.weights, f.comps), ControlMode::ComponentSquares, 0, std::nullopt};
}

ControlFunction components_plus_minors(const Germ& f) {
  std::vector<ParamPoly> parts = jacobian_and_minors(f).minors;
  parts.insert(parts.end(), f.comps.begin(), f.comps.end());
  return ControlFunction{homogenized_squares(f.weights, parts), ControlMode::ComponentsPlusMinors, 0, std::nullopt};
}

ControlFunction custom_control(ParamPoly square) {
  ControlFunction c{std::move(square), ControlMode::Custom, 0, std::nullopt};
  c.degree();
  return c;
}

ControlFunction make_control(const Germ& f, ControlMode mode) {
  switch (mode) {
    case ControlMode::ComponentSquares: return component_squares(f);
    case ControlMode::ComponentsPlusMinors: return components_plus_minors(f);
    case ControlMode::Custom: break;
  }
  throw Error(ErrorKind::InvalidInput, "a custom control needs an explicit polynomial");
}

SolveOutcome<CTrivCert> solve_c_certificate(const Germ& f, const ControlFunction& control, const SolveOptions& opt) {
  return escalate<CTrivCert>(f, control, opt, solve_c_once,
                             [](const Germ& g, const ControlFunction& c, PolyMatrix<ParamScalar> A, ParamMode m) {
                               CTrivCert cert{g, c, std::move(A), {}, m};
                               cert.pole_set = rational_poles(all_entries(cert.A));
                               if (!verify_certificate(cert).valid)
                                 throw Error(ErrorKind::InvalidInput, "solver output failed verification");
                               return cert;
                             });
}

SolveOutcome<KTrivCert> solve_k_certificate(const Germ& f, const ControlFunction& control, const SolveOptions& opt) {
  return escalate<KTrivCert>(f, control, opt, solve_k_once,
                             [](const Germ& g, const ControlFunction& c, KSolution s, ParamMode m) {
                               KTrivCert cert{g, c, std::move(s.X), std::move(s.A), {}, m, -1, std::nullopt};
                               cert.pole_set = rational_poles(all_entries(cert.A, cert.X));
                               int low = -1;
                               for (const auto& x : cert.X)
                                 if (!x.is_zero()) low = low < 0 ? x.min_degree() : std::min(low, x.min_degree());
                               cert.x_vanishing_order = low;
                               if (!std::binary_search(cert.pole_set.begin(), cert.pole_set.end(), Rat(0))) {
                                 bool zero = true;
                                 for (const auto& x : cert.X) zero = zero && specialize(x, Rat(0)).is_zero();
                                 cert.x_zero_at_param_zero = zero;
                               }
                               if (!verify_certificate(cert).valid)
                                 throw Error(ErrorKind::InvalidInput, "solver output failed verification");
                               return cert;
                             });
}

CTrivCert assemble_block_certificate(const CTrivCert& base, const SocleCertificate<ParamScalar>& socle,
                                     const ParamPoly& g4) {
  const Germ& f = base.family;
  const std::size_t p = f.p();
  if (socle.coefficients.size() != p) throw Error(ErrorKind::BlockMismatch, "socle certificate has the wrong length");
  if (!param_derivative(g4).is_zero()) throw Error(ErrorKind::BlockMismatch, "extra component depends on L");
  std::vector<ParamPoly> gens = f.comps;
  gens.push_back(g4);
  const auto rep = ideal_membership(gens, socle.jacobian);
  if (!rep) throw Error(ErrorKind::BlockMismatch, "Jacobian determinant is not a unit multiple of g4 modulo the ideal");
  const ParamPoly& upoly = (*rep)[p];
  if (upoly.is_zero() || upoly.size() != 1 || !upoly.terms().begin()->first.is_one())
    throw Error(ErrorKind::BlockMismatch, "Jacobian determinant is not a unit multiple of g4 modulo the ideal");
  const ParamScalar u = upoly.terms().begin()->second;
  ParamPoly hsum(f.weights);
  for (std::size_t j = 0; j < p; ++j) hsum += (*rep)[j] * f.comps[j];
  const ParamScalar inv_u2 = (u * u).inverse();

  CTrivCert cert;
  cert.family = Germ(f.vars, f.weights, gens);
  cert.control = base.control;
  cert.mode = base.mode;
  for (const auto& row : base.A) {
    auto r = row;
    r.push_back(ParamPoly(f.weights));
    cert.A.push_back(std::move(r));
  }
  std::vector<ParamPoly> last;
  const ParamPoly two_u_g4 = g4.scale(u * ParamScalar(2));
  for (std::size_t i = 0; i < p; ++i) {
    const ParamPoly& h = (*rep)[i];
    last.push_back((socle.coefficients[i] + h * two_u_g4 + h * hsum).scale(inv_u2));
  }
  last.push_back(g4);
  cert.A.push_back(std::move(last));
  cert.pole_set = rational_poles(all_entries(cert.A));
  return cert;
}

namespace {

PolyMatrix<Rat> specialize_matrix(const PolyMatrix<ParamScalar>& a, const Rat& v) {
  PolyMatrix<Rat> out;
  for (const auto& row : a) {
    std::vector<RatPoly> r;
    for (const auto& e : row) r.push_back(specialize(e, v));
    out.push_back(std::move(r));
  }
  return out;
}

template <class K>
std::vector<Poly<K>> residual_of(const MapGerm<K>& f, const std::vector<Poly<K>>& df, const Poly<K>& control,
                                 const PolyMatrix<K>& A, const std::vector<Poly<K>>& X) {
  if (A.size() != f.p()) throw Error(ErrorKind::InvalidInput, "certificate matrix has the wrong row count");
  if (!X.empty() && X.size() != f.n()) throw Error(ErrorKind::InvalidInput, "source field has the wrong length");
  std::vector<Poly<K>> res;
  for (std::size_t i = 0; i < f.p(); ++i) {
    if (A[i].size() != f.p()) throw Error(ErrorKind::InvalidInput, "certificate matrix is not square");
    Poly<K> r = control * df[i];
    for (std::size_t j = 0; j < f.p(); ++j) r -= A[i][j] * f.comps[j];
    for (std::size_t j = 0; j < X.size(); ++j) r -= X[j] * f.comps[i].partial(j);
    res.push_back(std::move(r));
  }
  return res;
}

template <class K>
Verification<K> finish(std::vector<Poly<K>> res, bool poles_ok) {
  Verification<K> v;
  v.residual = std::move(res);
  v.poles_ok = poles_ok;
  v.valid = poles_ok && std::all_of(v.residual.begin(), v.residual.end(), [](const Poly<K>& r) { return r.is_zero(); });
  return v;
}

bool poles_contained(const std::vector<ParamPoly>& entries, const std::vector<Rat>& stated) {
  for (const auto& r : rational_poles(entries))
    if (std::find(stated.begin(), stated.end(), r) == stated.end()) return false;
  return true;
}

}  // namespace

SpecializedCert specialize(const CTrivCert& c, const Rat& v) {
  SpecializedCert s;
  s.family = specialize(c.family, v);
  for (const auto& d : derivative_of(c.family)) s.derivative.push_back(specialize(d, v));
  s.control = specialize(c.control.square, v);
  s.A = specialize_matrix(c.A, v);
  return s;
}

SpecializedCert specialize(const KTrivCert& c, const Rat& v) {
  SpecializedCert s;
  s.family = specialize(c.family, v);
  for (const auto& d : derivative_of(c.family)) s.derivative.push_back(specialize(d, v));
  s.control = specialize(c.control.square, v);
  s.A = specialize_matrix(c.A, v);
  for (const auto& x : c.X) s.X.push_back(specialize(x, v));
  return s;
}

Verification<ParamScalar> verify_certificate(const CTrivCert& c) {
  return finish(residual_of(c.family, derivative_of(c.family), c.control.square, c.A, {}),
                poles_contained(all_entries(c.A), c.pole_set));
}

Verification<ParamScalar> verify_certificate(const KTrivCert& c) {
  return finish(residual_of(c.family, derivative_of(c.family), c.control.square, c.A, c.X),
                poles_contained(all_entries(c.A, c.X), c.pole_set));
}

Verification<Rat> verify_certificate(const SpecializedCert& c) {
  return finish(residual_of(c.family, c.derivative, c.control, c.A, c.X), true);
}

std::pair<Rat, Rat> control_bounds(const ControlFunction& control, const Rat& lambda, std::size_t samples,
                                   double floor, std::uint64_t seed) {
  const RatPoly rho = specialize(control.square, lambda);
  const std::size_t n = rho.nvars();
  if (n == 0 || samples == 0) throw Error(ErrorKind::InvalidInput, "control bounds need variables and samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto unit = [&](std::vector<double>& x) {
    double r = 0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    for (double& v : x) v /= r;
  };
  auto random_unit = [&] {
    std::vector<double> x(n);
    do {
      for (double& v : x) v = gauss(rng);
    } while (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }));
    unit(x);
    return x;
  };
  std::vector<std::pair<double, std::vector<double>>> lows;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t s = 0; s < samples; ++s) {
    auto x = random_unit();
    const double v = eval(rho, x);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
    lows.emplace_back(v, std::move(x));
  }
  // Local descent on the sphere from the lowest samples sharpens the minimum.
  std::sort(lows.begin(), lows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  lows.resize(std::min<std::size_t>(lows.size(), 8));
  for (auto& [v, x] : lows) {
    double step = 0.1;
    for (int it = 0; it < 400 && step > 1e-12; ++it) {
      auto d = random_unit();
      bool moved = false;
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> y(x);
        for (std::size_t i = 0; i < n; ++i) y[i] += sgn * step * d[i];
        unit(y);
        const double w = eval(rho, y);
        if (w < v) {
          v = w;
          x = std::move(y);
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.9;
    }
    lo = std::min(lo, v);
  }
  if (!(lo >= floor))
    throw Error(ErrorKind::DegenerateControl, "control nearly vanishes on the unit sphere (min " + std::to_string(lo) + ")");
  return {Rat(lo), Rat(hi)};
}

KeqReport keq_check(const Germ& f, int k) {
  if (k < 1) throw Error(ErrorKind::OutOfDomain, "Keq needs k >= 1");
  if (f.weights != Weights::uniform(f.n())) throw Error(ErrorKind::InvalidInput, "Keq needs uniform weights");
  std::optional<int> d;
  for (std::size_t i = 0; i < f.p(); ++i) {
    const auto di = f.component_degree(i);
    if (!di || (d && *d != *di)) throw Error(ErrorKind::InvalidInput, "Keq needs components of one degree");
    d = di;
  }
  if (!d) throw Error(ErrorKind::InvalidInput, "Keq needs components");
  KeqReport r;
  r.k = k;
  r.degree = k + *d - 1;
  const auto piece = tk_piece(f, r.degree, CodimVariant::Classical);
  r.ambient = piece.ambient_dim();
  r.rank = piece.rank();
  r.holds = piece.full();
  return r;
}

}  // namespace germforge
