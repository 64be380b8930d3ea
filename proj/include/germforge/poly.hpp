#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "germforge/scalar.hpp"

namespace germforge {

// Dense exponent vector; length is the number of source variables.
struct Monomial {
  std::vector<int> e;

  Monomial() = default;
  explicit Monomial(std::size_t n) : e(n, 0) {}
  explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}

  std::size_t size() const { return e.size(); }
  int total_degree() const;
  bool is_one() const;
  Monomial operator*(const Monomial& o) const;
  // Whether this monomial divides o.
  bool divides(const Monomial& o) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct Weights {
  std::vector<int> w;

  Weights() = default;
  explicit Weights(std::vector<int> ws) : w(std::move(ws)) {}
  static Weights uniform(std::size_t n) { return Weights(std::vector<int>(n, 1)); }

  std::size_t size() const { return w.size(); }
  int degree(const Monomial& m) const;
  int max() const;
  friend bool operator==(const Weights&, const Weights&) = default;
};

// Canonical monomial order: weighted degree, then the exponent profile
// (exponents sorted descending, compared lexicographically), then plain lex.
// Coset representatives are the least monomials under this order.
bool monomial_less(const Monomial& a, const Monomial& b, const Weights& w);

// All monomials of weighted degree d, ascending in the canonical order.
std::vector<Monomial> monomials_of_degree(const Weights& w, int d);

template <class K>
class Poly {
public:
  using Terms = std::map<Monomial, K>;

  Poly() = default;
  explicit Poly(Weights w) : w_(std::move(w)) {}
  static Poly constant(const Weights& w, const K& c);
  static Poly variable(const Weights& w, std::size_t i);
  static Poly term(const Weights& w, const Monomial& m, const K& c);

  std::size_t nvars() const { return w_.size(); }
  const Weights& weights() const { return w_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  K coeff(const Monomial& m) const;

  void add_term(const Monomial& m, const K& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) { return a.mul(b); }
  Poly mul(const Poly& o) const;
  Poly scale(const K& s) const;
  Poly mul_monomial(const Monomial& m) const;
  Poly partial(std::size_t i) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.w_ == b.w_ && a.terms_ == b.terms_; }

  // Weighted degree of the homogeneous polynomial; nullopt when the
  // polynomial is zero or not weighted-homogeneous.
  std::optional<int> homogeneous_degree() const;
  bool has_constant_term() const;
  int min_degree() const;  // lowest weighted degree present; -1 for zero
  int max_degree() const;
  Poly graded_piece(int d) const;

  // Leading term in the canonical order (greatest monomial).
  const std::pair<const Monomial, K>& leading_term() const;

  Poly with_weights(const Weights& w) const;

  std::string to_string(std::span<const std::string> names) const;

private:
  void check_compatible(const Poly& o) const;
  Weights w_;
  Terms terms_;
};

using RatPoly = Poly<Rat>;
using ParamPoly = Poly<ParamScalar>;

Poly<Rat> specialize(const Poly<ParamScalar>& p, const Rat& v);
Poly<ParamScalar> lift(const Poly<Rat>& p);
// Coefficientwise d/dL. Throws NonPolynomialParameter on a denominator.
Poly<ParamScalar> param_derivative(const Poly<ParamScalar>& p);
// Divide by the rational content and fix the sign of the leading term's
// leading L-coefficient to be positive.
Poly<ParamScalar> normalize_primitive(const Poly<ParamScalar>& p);
Poly<Rat> normalize_primitive(const Poly<Rat>& p);

double eval(const Poly<Rat>& p, std::span<const double> x);
double eval(const Poly<ParamScalar>& p, std::span<const double> x, double lambda);

// Rational roots of the lcm of all coefficient denominators, ascending.
std::vector<Rat> rational_poles(const std::vector<Poly<ParamScalar>>& ps);
inline std::vector<Rat> rational_poles(const std::vector<Poly<Rat>>&) { return {}; }

// Polynomial map germ (R^n,0) -> (R^p,0).
template <class K>
struct MapGerm {
  std::vector<std::string> vars;
  Weights weights;
  std::vector<Poly<K>> comps;

  MapGerm() = default;
  // Validates shared ambient and zero constant terms.
  MapGerm(std::vector<std::string> vars, Weights weights, std::vector<Poly<K>> comps);

  std::size_t n() const { return vars.size(); }
  std::size_t p() const { return comps.size(); }
  bool parameterized() const;
  // Weighted degree of component i (zero components report nullopt).
  std::optional<int> component_degree(std::size_t i) const;
  bool is_weighted_homogeneous() const;

  friend bool operator==(const MapGerm&, const MapGerm&) = default;
};

using Germ = MapGerm<ParamScalar>;
using RatGerm = MapGerm<Rat>;

std::vector<std::string> default_var_names(std::size_t n);

RatGerm specialize(const Germ& f, const Rat& v);
Germ lift(const RatGerm& f);
Germ param_derivative(const Germ& f);
// Same germ regraded with new weights (throws InvalidInput on size mismatch).
template <class K>
MapGerm<K> with_weights(const MapGerm<K>& f, const Weights& w);

// Smallest positive integer weights making each component homogeneous.
std::optional<Weights> detect_weights(const Germ& f);

template <class K>
using PolyMatrix = std::vector<std::vector<Poly<K>>>;

template <class K>
PolyMatrix<K> jacobian(const MapGerm<K>& f);

// Determinant by cofactor expansion; the matrix must be square.
template <class K>
Poly<K> determinant(const PolyMatrix<K>& m);

template <class K>
Poly<K> jacobian_determinant(const MapGerm<K>& f);

template <class K>
struct JacobianMinors {
  PolyMatrix<K> matrix;          // p x n
  std::vector<Poly<K>> minors;   // size min(n,p), lexicographic subsets, normalized
};

template <class K>
JacobianMinors<K> jacobian_and_minors(const MapGerm<K>& f);

}  // namespace germforge
