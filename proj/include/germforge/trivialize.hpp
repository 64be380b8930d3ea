#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "germforge/germ.hpp"

namespace germforge {

enum class ControlMode { ComponentSquares, ComponentsPlusMinors, Custom };
std::string_view to_string(ControlMode m);
ControlMode parse_control_mode(std::string_view s);

struct ControlFunction {
  ParamPoly square;
  ControlMode mode = ControlMode::ComponentSquares;
  int escalation = 0;  // number of extra sum-of-squares factors
  std::optional<std::pair<Rat, Rat>> bounds;  // sampled, never proved

  int degree() const;
};

// Sums of squares. Squares of mixed degrees e_t are raised to powers L/e_t,
// L = lcm(e_t), so the sum stays weighted-homogeneous.
ControlFunction component_squares(const Germ& f);
// squared maximal Jacobian minors plus squared components
ControlFunction components_plus_minors(const Germ& f);
ControlFunction custom_control(ParamPoly square);
ControlFunction make_control(const Germ& f, ControlMode mode);

struct ParamMode {
  bool polynomial = false;
  int degree = 0;  // bound on the L-degree of entries in polynomial mode

  static ParamMode rational() { return {}; }
  static ParamMode poly(int d) { return {true, d}; }
  std::string to_string() const;
};

struct CTrivCert {
  Germ family;
  ControlFunction control;
  PolyMatrix<ParamScalar> A;  // p x p
  std::vector<Rat> pole_set;
  ParamMode mode;
};

struct KTrivCert {
  Germ family;
  ControlFunction control;
  std::vector<ParamPoly> X;   // n source components
  PolyMatrix<ParamScalar> A;  // p x p
  std::vector<Rat> pole_set;
  ParamMode mode;
  int x_vanishing_order = -1;           // lowest degree present in X; -1 when X = 0
  std::optional<bool> x_zero_at_param_zero;  // X(x, 0) == 0; nullopt when 0 is a pole
};

struct SolveAttempt {
  int escalation = 0;
  int control_degree = 0;
  bool success = false;
  std::string note;
};

template <class Cert>
struct SolveOutcome {
  std::optional<Cert> cert;
  std::vector<SolveAttempt> attempts;
};

struct SolveOptions {
  ParamMode mode;
  int max_escalations = 2;
};

// control * dF/dL = A F with A_ij homogeneous of degree
// deg(control) + deg(dF_i/dL) - deg(F_j).
SolveOutcome<CTrivCert> solve_c_certificate(const Germ& f, const ControlFunction& control,
                                            const SolveOptions& opt = {});

// control * dF/dL = sum_j X_j dF/dx_j + A F.
SolveOutcome<KTrivCert> solve_k_certificate(const Germ& f, const ControlFunction& control,
                                            const SolveOptions& opt = {});

// (15,16) certificate for G = (f, g4) from a certificate for f and its socle
// certificate. With J = u g4 + sum h_i f_i (u a nonzero scalar), the last
// row is (c'_1, .., c'_p, g4) where c'_i = (c_i + 2u h_i g4 + h_i sum_j h_j f_j)/u^2.
// When g4 = J this is (c_1, .., c_p, J). Throws BlockMismatch when g4 is not
// J up to a unit modulo the ideal of f.
CTrivCert assemble_block_certificate(const CTrivCert& base, const SocleCertificate<ParamScalar>& socle,
                                     const ParamPoly& g4);

// Certificate data at a fixed parameter value.
struct SpecializedCert {
  RatGerm family;
  std::vector<RatPoly> derivative;  // dF/dL at the value
  RatPoly control;
  PolyMatrix<Rat> A;
  std::vector<RatPoly> X;  // empty in C-mode
};

SpecializedCert specialize(const CTrivCert& c, const Rat& v);
SpecializedCert specialize(const KTrivCert& c, const Rat& v);

template <class K>
struct Verification {
  bool valid = false;
  bool poles_ok = true;
  std::vector<Poly<K>> residual;  // one entry per target component
};

Verification<ParamScalar> verify_certificate(const CTrivCert& c);
Verification<ParamScalar> verify_certificate(const KTrivCert& c);
Verification<Rat> verify_certificate(const SpecializedCert& c);

// Sampled min and max of the control on the unit sphere at L = lambda.
// Throws DegenerateControl when the minimum falls below floor.
std::pair<Rat, Rat> control_bounds(const ControlFunction& control, const Rat& lambda, std::size_t samples,
                                   double floor = 1e-8, std::uint64_t seed = 1);

struct KeqReport {
  int k = 0;
  int degree = 0;
  std::size_t ambient = 0;
  std::size_t rank = 0;
  bool holds = false;
};

// tF(m^k E_n) + F*(m_p) m^(k-1) E_p = m^(k+1) E_p in module degree k + d - 1
// for a germ with uniform weights and all components of degree d.
KeqReport keq_check(const Germ& f, int k);

}  // namespace germforge
