#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "germforge/error.hpp"

namespace germforge {

// Arbitrary-precision rational; GMP keeps it canonical (gcd 1, positive
// denominator) after every arithmetic operation.
using Rat = mpq_class;
using Int = mpz_class;

Rat make_rat(long num, long den = 1);
std::string to_string(const Rat& r);

// Univariate polynomial in the modulus parameter L, coefficients in Q.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs);
  UniPoly(const Rat& c);  // NOLINT(google-explicit-constructor)
  static UniPoly monomial(const Rat& c, std::size_t power);
  static UniPoly param();  // the polynomial L

  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  bool is_constant() const { return c_.size() <= 1; }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
  const Rat& leading() const;

  UniPoly operator-() const;
  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const UniPoly& o);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const UniPoly& b) { return a *= b; }
  UniPoly scaled(const Rat& s) const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  Rat eval(const Rat& v) const;
  double eval(double v) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  // Division with remainder over Q.
  static void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r);
  // Exact quotient; throws InvalidInput when b does not divide a.
  static UniPoly exact_div(const UniPoly& a, const UniPoly& b);

  // Integer content and primitive part: p = content * primitive, with the
  // primitive part in Z[L] and positive leading coefficient.
  Rat content() const;
  UniPoly primitive() const;
  std::vector<Int> integer_coeffs() const;  // of primitive()

  std::string to_string(const std::string& var = "L") const;

private:
  void trim();
  std::vector<Rat> c_;
};

// Monic gcd, computed by a primitive pseudo-remainder sequence over Z.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
UniPoly squarefree_part(const UniPoly& p);

struct RootReport {
  std::vector<Rat> roots;  // sorted ascending, distinct
  UniPoly residual;        // squarefree, monic, no rational roots
};

// Rational-root theorem on the primitive integer form.
RootReport rational_roots(const UniPoly& p);

// Element of Q(L). Normal form: gcd(num, den) = 1, den monic, zero is 0/1.
class ParamScalar {
public:
  ParamScalar() : num_(), den_(Rat(1)) {}
  ParamScalar(const Rat& r) : num_(r), den_(Rat(1)) {}  // NOLINT
  ParamScalar(long v) : ParamScalar(Rat(v)) {}          // NOLINT
  ParamScalar(UniPoly num) : num_(std::move(num)), den_(Rat(1)) {}  // NOLINT
  ParamScalar(UniPoly num, UniPoly den);
  static ParamScalar param() { return ParamScalar(UniPoly::param()); }

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  // Constant value; only meaningful when is_constant().
  Rat constant_value() const;

  ParamScalar operator-() const;
  ParamScalar& operator+=(const ParamScalar& o);
  ParamScalar& operator-=(const ParamScalar& o);
  ParamScalar& operator*=(const ParamScalar& o);
  ParamScalar& operator/=(const ParamScalar& o);
  friend ParamScalar operator+(ParamScalar a, const ParamScalar& b) { return a += b; }
  friend ParamScalar operator-(ParamScalar a, const ParamScalar& b) { return a -= b; }
  friend ParamScalar operator*(ParamScalar a, const ParamScalar& b) { return a *= b; }
  friend ParamScalar operator/(ParamScalar a, const ParamScalar& b) { return a /= b; }
  ParamScalar inverse() const;

  friend bool operator==(const ParamScalar& a, const ParamScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  // Throws PoleAtParameter when den(v) = 0.
  Rat specialize(const Rat& v) const;
  double eval(double v) const;
  // Coefficientwise d/dL; throws NonPolynomialParameter for non-polynomials.
  ParamScalar param_derivative() const;

  // Integer-coefficient textual form, e.g. "(L^2-1)/(L+8)".
  std::string to_string() const;

private:
  void normalize();
  UniPoly num_;
  UniPoly den_;
};

enum class Field { Rational, Parametric };

// Uniform access to the two scalar fields used by templated code.
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static constexpr Field kind = Field::Rational;
  static bool is_zero(const Rat& a) { return sgn(a) == 0; }
  static bool is_one(const Rat& a) { return a == 1; }
  static Rat from_rat(const Rat& r) { return r; }
  // Size proxy used for pivot selection.
  static std::size_t cost(const Rat& a) {
    return mpz_sizeinbase(a.get_num_mpz_t(), 2) + mpz_sizeinbase(a.get_den_mpz_t(), 2);
  }
  static std::string to_string(const Rat& a) { return germforge::to_string(a); }
  static double eval(const Rat& a, double) { return a.get_d(); }
};

template <>
struct FieldTraits<ParamScalar> {
  static constexpr Field kind = Field::Parametric;
  static bool is_zero(const ParamScalar& a) { return a.is_zero(); }
  static bool is_one(const ParamScalar& a) { return a.is_one(); }
  static ParamScalar from_rat(const Rat& r) { return ParamScalar(r); }
  static std::size_t cost(const ParamScalar& a) {
    return static_cast<std::size_t>(a.num().degree() + a.den().degree() + 2);
  }
  static std::string to_string(const ParamScalar& a) { return a.to_string(); }
  static double eval(const ParamScalar& a, double v) { return a.eval(v); }
};

template <class K>
bool is_zero(const K& a) { return FieldTraits<K>::is_zero(a); }

// Specialization of a scalar at L = v; identity on Rat.
inline Rat specialize(const Rat& a, const Rat&) { return a; }
inline Rat specialize(const ParamScalar& a, const Rat& v) { return a.specialize(v); }

}  // namespace germforge
