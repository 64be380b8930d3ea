#include "germforge/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace germforge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PoleAtParameter: return "PoleAtParameter";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::IncompatibleAmbient: return "IncompatibleAmbient";
    case ErrorKind::NonPolynomialParameter: return "NonPolynomialParameter";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::InhomogeneousGenerator: return "InhomogeneousGenerator";
    case ErrorKind::InhomogeneousGerm: return "InhomogeneousGerm";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NotEquidimensional: return "NotEquidimensional";
    case ErrorKind::SocleFailure: return "SocleFailure";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotEnoughDirections: return "NotEnoughDirections";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NotBoundary: return "NotBoundary";
    case ErrorKind::BlockMismatch: return "BlockMismatch";
    case ErrorKind::DegenerateControl: return "DegenerateControl";
    case ErrorKind::PoleOnRequest: return "PoleOnRequest";
    case ErrorKind::RegionAtPole: return "RegionAtPole";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ConstantTermNonzero: return "ConstantTermNonzero";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly::UniPoly(const Rat& c) {
  if (sgn(c) != 0) c_.push_back(c);
}

UniPoly UniPoly::monomial(const Rat& c, std::size_t power) {
  std::vector<Rat> v(power + 1, Rat(0));
  v[power] = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::param() { return monomial(Rat(1), 1); }

void UniPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

bool UniPoly::is_one() const { return c_.size() == 1 && c_[0] == 1; }

const Rat& UniPoly::leading() const {
  if (c_.empty()) throw Error(ErrorKind::ZeroPolynomial, "leading coefficient of 0");
  return c_.back();
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const UniPoly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

UniPoly UniPoly::scaled(const Rat& s) const {
  if (sgn(s) == 0) return {};
  UniPoly r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

Rat UniPoly::eval(const Rat& v) const {
  Rat acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * v + c_[i];
  return acc;
}

double UniPoly::eval(double v) const {
  double acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * v + c_[i].get_d();
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rat> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
  return UniPoly(std::move(r));
}

UniPoly UniPoly::monic() const {
  if (c_.empty()) return {};
  return scaled(1 / leading());
}

void UniPoly::divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by 0");
  r = a;
  std::vector<Rat> qc;
  const int db = b.degree();
  if (r.degree() >= db) qc.assign(static_cast<std::size_t>(r.degree() - db + 1), Rat(0));
  const Rat inv_lead = 1 / b.leading();
  while (!r.is_zero() && r.degree() >= db) {
    const auto shift = static_cast<std::size_t>(r.degree() - db);
    Rat f = r.leading() * inv_lead;
    qc[shift] = f;
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i + shift] -= f * b.c_[i];
    r.trim();
  }
  q = UniPoly(std::move(qc));
}

UniPoly UniPoly::exact_div(const UniPoly& a, const UniPoly& b) {
  UniPoly q, r;
  divmod(a, b, q, r);
  if (!r.is_zero()) throw Error(ErrorKind::InvalidInput, "inexact polynomial division");
  return q;
}

namespace {

Int lcm_of_denominators(const std::vector<Rat>& c) {
  Int l = 1;
  for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

Int gcd_of_ints(const std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

// Integer primitive part with positive leading coefficient.
std::vector<Int> primitive_ints(std::vector<Int> v) {
  while (!v.empty() && sgn(v.back()) == 0) v.pop_back();
  if (v.empty()) return v;
  Int g = gcd_of_ints(v);
  if (sgn(v.back()) < 0) g = -g;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z.
std::vector<Int> pseudo_remainder(std::vector<Int> a, const std::vector<Int>& b) {
  const std::size_t db = b.size() - 1;
  const Int& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    const std::size_t shift = a.size() - 1 - db;
    Int la = a.back();
    for (auto& x : a) x *= lb;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= la * b[i];
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
  }
  return a;
}

UniPoly from_ints(const std::vector<Int>& v) {
  std::vector<Rat> c;
  c.reserve(v.size());
  for (const auto& x : v) c.emplace_back(x);
  return UniPoly(std::move(c));
}

}  // namespace

Rat UniPoly::content() const {
  if (c_.empty()) return Rat(0);
  const Int l = lcm_of_denominators(c_);
  std::vector<Int> ints;
  ints.reserve(c_.size());
  for (const auto& x : c_) ints.emplace_back(Int(x * l));
  Int g = gcd_of_ints(ints);
  if (sgn(c_.back()) < 0) g = -g;
  Rat r(g, l);
  r.canonicalize();
  return r;
}

std::vector<Int> UniPoly::integer_coeffs() const {
  if (c_.empty()) return {};
  const Int l = lcm_of_denominators(c_);
  std::vector<Int> ints;
  ints.reserve(c_.size());
  for (const auto& x : c_) ints.emplace_back(Int(x * l));
  return primitive_ints(std::move(ints));
}

UniPoly UniPoly::primitive() const { return from_ints(integer_coeffs()); }

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Rat& c = c_[i];
    if (sgn(c) == 0) continue;
    Rat a = abs(c);
    if (sgn(c) < 0) os << "-";
    else if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return UniPoly(Rat(1));
  std::vector<Int> x = a.integer_coeffs();
  std::vector<Int> y = b.integer_coeffs();
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    if (y.size() == 1) return UniPoly(Rat(1));
    std::vector<Int> r = primitive_ints(pseudo_remainder(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return from_ints(x).monic();
}

UniPoly squarefree_part(const UniPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "squarefree part of 0");
  if (p.is_constant()) return UniPoly(Rat(1));
  const UniPoly g = gcd(p, p.derivative());
  return UniPoly::exact_div(p, g).monic();
}

namespace {

// Prime factorization by trial division; leftover cofactors above the
// search bound are treated as prime.
std::vector<std::pair<Int, int>> factor(Int n) {
  std::vector<std::pair<Int, int>> out;
  n = abs(n);
  if (n <= 1) return out;
  for (unsigned long d = 2; d <= 10'000'000UL; d = (d == 2 ? 3 : d + 2)) {
    Int dd(d);
    if (dd * dd > n) break;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
      ++e;
    }
    if (e > 0) out.emplace_back(dd, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<Int> divisors(const Int& n) {
  std::vector<Int> ds{Int(1)};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t base = ds.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  return ds;
}

}  // namespace

RootReport rational_roots(const UniPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "rational_roots of 0");
  RootReport rep;
  UniPoly rest = squarefree_part(p);
  if (rest.degree() >= 1 && sgn(rest.coeff(0)) == 0) {
    rep.roots.emplace_back(0);
    rest = UniPoly::exact_div(rest, UniPoly::param());
  }
  if (rest.degree() >= 1) {
    const std::vector<Int> ic = rest.integer_coeffs();
    const std::vector<Int> nums = divisors(ic.front());
    const std::vector<Int> dens = divisors(ic.back());
    std::set<Rat> candidates;
    for (const auto& a : nums) {
      for (const auto& b : dens) {
        Rat r(a, b);
        r.canonicalize();
        candidates.insert(r);
        candidates.insert(-r);
      }
    }
    for (const auto& c : candidates) {
      if (rest.degree() < 1) break;
      if (sgn(rest.eval(c)) == 0) {
        rep.roots.push_back(c);
        rest = UniPoly::exact_div(rest, UniPoly(std::vector<Rat>{-c, Rat(1)}));
      }
    }
  }
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.residual = rest.monic();
  return rep;
}

// ------------------------------------------------------------ ParamScalar

ParamScalar::ParamScalar(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator in Q(L)");
  normalize();
}

void ParamScalar::normalize() {
  if (num_.is_zero()) {
    den_ = UniPoly(Rat(1));
    return;
  }
  if (!den_.is_constant()) {
    const UniPoly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = UniPoly::exact_div(num_, g);
      den_ = UniPoly::exact_div(den_, g);
    }
  }
  if (!den_.is_one()) {
    const Rat inv = 1 / den_.leading();
    if (inv != 1) {
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
}

Rat ParamScalar::constant_value() const {
  return num_.coeff(0) / den_.coeff(0);
}

ParamScalar ParamScalar::operator-() const {
  ParamScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

ParamScalar& ParamScalar::operator+=(const ParamScalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_one()) normalize();
    else if (num_.is_zero()) den_ = UniPoly(Rat(1));
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  normalize();
  return *this;
}

ParamScalar& ParamScalar::operator-=(const ParamScalar& o) { return *this += -o; }

ParamScalar& ParamScalar::operator*=(const ParamScalar& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = ParamScalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  // Cross cancellation keeps the result coprime without a final gcd.
  const UniPoly g1 = gcd(num_, o.den_);
  const UniPoly g2 = gcd(o.num_, den_);
  UniPoly n1 = g1.is_one() ? num_ : UniPoly::exact_div(num_, g1);
  UniPoly d2 = g1.is_one() ? o.den_ : UniPoly::exact_div(o.den_, g1);
  UniPoly n2 = g2.is_one() ? o.num_ : UniPoly::exact_div(o.num_, g2);
  UniPoly d1 = g2.is_one() ? den_ : UniPoly::exact_div(den_, g2);
  num_ = n1 * n2;
  den_ = d1 * d2;
  const Rat inv = 1 / den_.leading();
  if (inv != 1) {
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
  return *this;
}

ParamScalar ParamScalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0 in Q(L)");
  ParamScalar r;
  r.num_ = den_;
  r.den_ = num_;
  const Rat inv = 1 / r.den_.leading();
  r.num_ = r.num_.scaled(inv);
  r.den_ = r.den_.scaled(inv);
  return r;
}

ParamScalar& ParamScalar::operator/=(const ParamScalar& o) {
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by 0 in Q(L)");
  return *this *= o.inverse();
}

Rat ParamScalar::specialize(const Rat& v) const {
  const Rat d = den_.eval(v);
  if (sgn(d) == 0) throw Error(ErrorKind::PoleAtParameter, "pole at L = " + germforge::to_string(v));
  return num_.eval(v) / d;
}

double ParamScalar::eval(double v) const { return num_.eval(v) / den_.eval(v); }

ParamScalar ParamScalar::param_derivative() const {
  if (!is_polynomial())
    throw Error(ErrorKind::NonPolynomialParameter, "coefficient " + to_string() + " has a denominator");
  return ParamScalar(num_.derivative());
}

std::string ParamScalar::to_string() const {
  if (den_.is_one()) {
    bool integral = true;
    for (const auto& c : num_.coeffs()) integral = integral && c.get_den() == 1;
    if (integral) return num_.to_string();
  }
  // Clear denominators jointly so both parts have integer coefficients.
  Int l = 1;
  for (const auto& c : num_.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& c : den_.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  const UniPoly n = num_.scaled(Rat(l));
  const UniPoly d = den_.scaled(Rat(l));
  auto wrap = [](const UniPoly& p) {
    const std::string s = p.to_string();
    const bool single = p.coeffs().size() == 1 || (std::count_if(p.coeffs().begin(), p.coeffs().end(),
                                                                  [](const Rat& c) { return sgn(c) != 0; }) == 1 &&
                                                     sgn(p.leading()) > 0 && p.leading() == 1);
    return single ? s : "(" + s + ")";
  };
  return wrap(n) + "/" + wrap(d);
}

}  // namespace germforge
