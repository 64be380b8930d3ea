#include "germforge/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace germforge {

int Monomial::total_degree() const { return std::accumulate(e.begin(), e.end(), 0); }

bool Monomial::is_one() const {
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

int Weights::degree(const Monomial& m) const {
  int d = 0;
  for (std::size_t i = 0; i < w.size(); ++i) d += w[i] * m.e[i];
  return d;
}

int Weights::max() const { return w.empty() ? 1 : *std::max_element(w.begin(), w.end()); }

bool monomial_less(const Monomial& a, const Monomial& b, const Weights& w) {
  const int da = w.degree(a);
  const int db = w.degree(b);
  if (da != db) return da < db;
  std::vector<int> pa = a.e;
  std::vector<int> pb = b.e;
  std::sort(pa.begin(), pa.end(), std::greater<>());
  std::sort(pb.begin(), pb.end(), std::greater<>());
  if (pa != pb) return pa < pb;
  return a.e < b.e;
}

std::vector<Monomial> monomials_of_degree(const Weights& w, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  const std::size_t n = w.size();
  Monomial cur(n);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rest) {
    if (i == n) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    for (int k = 0; k * w.w[i] <= rest; ++k) {
      cur.e[i] = k;
      rec(i + 1, rest - k * w.w[i]);
    }
    cur.e[i] = 0;
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return monomial_less(a, b, w); });
  return out;
}

// ------------------------------------------------------------------- Poly

template <class K>
Poly<K> Poly<K>::constant(const Weights& w, const K& c) {
  return term(w, Monomial(w.size()), c);
}

template <class K>
Poly<K> Poly<K>::variable(const Weights& w, std::size_t i) {
  Monomial m(w.size());
  m.e.at(i) = 1;
  return term(w, m, K(1));
}

template <class K>
Poly<K> Poly<K>::term(const Weights& w, const Monomial& m, const K& c) {
  Poly r(w);
  r.add_term(m, c);
  return r;
}

template <class K>
K Poly<K>::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? K(0) : it->second;
}

template <class K>
void Poly<K>::add_term(const Monomial& m, const K& c) {
  if (m.size() != nvars()) throw Error(ErrorKind::IncompatibleAmbient, "monomial length mismatch");
  if (germforge::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (germforge::is_zero(it->second)) terms_.erase(it);
  }
}

template <class K>
void Poly<K>::check_compatible(const Poly& o) const {
  if (w_ != o.w_)
    throw Error(ErrorKind::IncompatibleAmbient, "polynomials over different variable sets or gradings");
}

template <class K>
Poly<K> Poly<K>::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

template <class K>
Poly<K>& Poly<K>::operator+=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

template <class K>
Poly<K>& Poly<K>::operator-=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

template <class K>
Poly<K> Poly<K>::mul(const Poly& o) const {
  check_compatible(o);
  Poly r(w_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

template <class K>
Poly<K> Poly<K>::scale(const K& s) const {
  Poly r(w_);
  if (germforge::is_zero(s)) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
  return r;
}

template <class K>
Poly<K> Poly<K>::mul_monomial(const Monomial& mono) const {
  Poly r(w_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m * mono, c);
  return r;
}

template <class K>
Poly<K> Poly<K>::partial(std::size_t i) const {
  if (i >= nvars()) throw Error(ErrorKind::IndexOutOfRange, "partial derivative index");
  Poly r(w_);
  for (const auto& [m, c] : terms_) {
    if (m.e[i] == 0) continue;
    Monomial mm = m;
    const int k = mm.e[i]--;
    r.add_term(mm, c * K(Rat(k)));
  }
  return r;
}

template <class K>
std::optional<int> Poly<K>::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  const int d = w_.degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (w_.degree(m) != d) return std::nullopt;
  return d;
}

template <class K>
bool Poly<K>::has_constant_term() const {
  return !terms_.empty() && terms_.begin()->first.is_one();
}

template <class K>
int Poly<K>::min_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    const int k = w_.degree(m);
    if (d < 0 || k < d) d = k;
  }
  return d;
}

template <class K>
int Poly<K>::max_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, w_.degree(m));
  return d;
}

template <class K>
Poly<K> Poly<K>::graded_piece(int d) const {
  Poly r(w_);
  for (const auto& [m, c] : terms_)
    if (w_.degree(m) == d) r.terms_.emplace(m, c);
  return r;
}

template <class K>
const std::pair<const Monomial, K>& Poly<K>::leading_term() const {
  if (terms_.empty()) throw Error(ErrorKind::ZeroPolynomial, "leading term of 0");
  auto best = terms_.begin();
  for (auto it = terms_.begin(); it != terms_.end(); ++it)
    if (monomial_less(best->first, it->first, w_)) best = it;
  return *best;
}

template <class K>
Poly<K> Poly<K>::with_weights(const Weights& w) const {
  if (w.size() != nvars()) throw Error(ErrorKind::IncompatibleAmbient, "weight vector length");
  Poly r(w);
  r.terms_ = terms_;
  return r;
}

namespace {

std::string monomial_string(const Monomial& m, std::span<const std::string> names) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
    if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
  }
  return s;
}

// Splits a coefficient into (negative, magnitude text, atomic). Atomic
// coefficients can be printed without parentheses.
struct CoeffText {
  bool negative = false;
  std::string magnitude;
  bool atomic = true;
  bool unit = false;
};

CoeffText coeff_text(const Rat& c) {
  CoeffText t;
  t.negative = sgn(c) < 0;
  const Rat a = abs(c);
  t.magnitude = a.get_str();
  t.unit = a == 1;
  return t;
}

CoeffText coeff_text(const ParamScalar& c) {
  const auto& cs = c.num().coeffs();
  const auto nonzero = std::count_if(cs.begin(), cs.end(), [](const Rat& x) { return sgn(x) != 0; });
  if (c.is_polynomial() && nonzero == 1) {
    const Rat lead = c.num().leading();
    CoeffText t;
    t.negative = sgn(lead) < 0;
    t.magnitude = ParamScalar(c.num().scaled(Rat(t.negative ? -1 : 1))).to_string();
    bool integral = lead.get_den() == 1;
    if (!integral) {
      // Non-integer single terms print as k/m*L^j.
      const int deg = c.num().degree();
      const Rat a = abs(lead);
      t.magnitude = a.get_str();
      if (deg > 0) t.magnitude += deg == 1 ? "*L" : "*L^" + std::to_string(deg);
    }
    t.unit = c.num().degree() == 0 && abs(lead) == 1;
    return t;
  }
  CoeffText t;
  t.magnitude = c.to_string();
  t.atomic = false;
  return t;
}

}  // namespace

template <class K>
std::string Poly<K>::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const Monomial, K>*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [&](auto* a, auto* b) { return monomial_less(b->first, a->first, w_); });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    const CoeffText ct = coeff_text(t->second);
    const std::string mono = monomial_string(t->first, names);
    std::string body;
    if (!ct.atomic) {
      body = "(" + ct.magnitude + ")";
      if (!mono.empty()) body += "*" + mono;
    } else if (mono.empty()) {
      body = ct.magnitude;
    } else {
      body = ct.unit ? mono : ct.magnitude + "*" + mono;
    }
    if (first) os << (ct.negative ? "-" : "") << body;
    else os << (ct.negative ? " - " : " + ") << body;
    first = false;
  }
  return os.str();
}

template class Poly<Rat>;
template class Poly<ParamScalar>;

Poly<Rat> specialize(const Poly<ParamScalar>& p, const Rat& v) {
  Poly<Rat> r(p.weights());
  for (const auto& [m, c] : p.terms()) r.add_term(m, c.specialize(v));
  return r;
}

Poly<ParamScalar> lift(const Poly<Rat>& p) {
  Poly<ParamScalar> r(p.weights());
  for (const auto& [m, c] : p.terms()) r.add_term(m, ParamScalar(c));
  return r;
}

Poly<ParamScalar> param_derivative(const Poly<ParamScalar>& p) {
  Poly<ParamScalar> r(p.weights());
  for (const auto& [m, c] : p.terms()) r.add_term(m, c.param_derivative());
  return r;
}

Poly<ParamScalar> normalize_primitive(const Poly<ParamScalar>& p) {
  if (p.is_zero()) return p;
  // Clear L-denominators, then divide out the rational content.
  UniPoly l(Rat(1));
  for (const auto& [m, c] : p.terms()) {
    const UniPoly g = gcd(l, c.den());
    l = UniPoly::exact_div(l * c.den(), g);
  }
  Int num_gcd = 0;
  Int den_lcm = 1;
  for (const auto& [m, c] : p.terms()) {
    UniPoly q = UniPoly::exact_div(c.num() * l, c.den());
    for (const auto& x : q.coeffs()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
    }
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  const auto& lead = p.leading_term();
  const UniPoly lead_num = UniPoly::exact_div(lead.second.num() * l, lead.second.den());
  if (sgn(lead_num.leading()) < 0) content = -content;
  Poly<ParamScalar> r(p.weights());
  const ParamScalar factor = ParamScalar(l) / ParamScalar(content);
  for (const auto& [m, c] : p.terms()) r.add_term(m, c * factor);
  return r;
}

Poly<Rat> normalize_primitive(const Poly<Rat>& p) {
  if (p.is_zero()) return p;
  Int num_gcd = 0;
  Int den_lcm = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  if (sgn(p.leading_term().second) < 0) content = -content;
  return p.scale(1 / content);
}

// ---------------------------------------------------------------- MapGerm

std::vector<std::string> default_var_names(std::size_t n) {
  static const char* base[] = {"x", "y", "z", "w"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(n <= 4 ? std::string(base[i]) : "x" + std::to_string(i + 1));
  return names;
}

template <class K>
MapGerm<K>::MapGerm(std::vector<std::string> v, Weights w, std::vector<Poly<K>> c)
    : vars(std::move(v)), weights(std::move(w)), comps(std::move(c)) {
  if (weights.size() != vars.size())
    throw Error(ErrorKind::IncompatibleAmbient, "weights do not match the variable count");
  for (auto& comp : comps) {
    if (comp.nvars() != vars.size())
      throw Error(ErrorKind::IncompatibleAmbient, "component over a different variable set");
    comp = comp.with_weights(weights);
    if (comp.has_constant_term())
      throw Error(ErrorKind::ConstantTermNonzero, "germ components must vanish at the origin");
  }
}

template <class K>
bool MapGerm<K>::parameterized() const {
  if constexpr (std::is_same_v<K, ParamScalar>) {
    for (const auto& c : comps)
      for (const auto& [m, s] : c.terms())
        if (!s.is_constant()) return true;
  }
  return false;
}

template <class K>
std::optional<int> MapGerm<K>::component_degree(std::size_t i) const {
  return comps.at(i).homogeneous_degree();
}

template <class K>
bool MapGerm<K>::is_weighted_homogeneous() const {
  for (const auto& c : comps)
    if (!c.is_zero() && !c.homogeneous_degree()) return false;
  return true;
}

template struct MapGerm<Rat>;
template struct MapGerm<ParamScalar>;

namespace {

double monomial_value(const Monomial& m, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int k = 0; k < m.e[i]; ++k) v *= x[i];
  return v;
}

}  // namespace

double eval(const Poly<Rat>& p, std::span<const double> x) {
  if (x.size() != p.nvars()) throw Error(ErrorKind::InvalidInput, "evaluation point has the wrong length");
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c.get_d() * monomial_value(m, x);
  return s;
}

double eval(const Poly<ParamScalar>& p, std::span<const double> x, double lambda) {
  if (x.size() != p.nvars()) throw Error(ErrorKind::InvalidInput, "evaluation point has the wrong length");
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c.eval(lambda) * monomial_value(m, x);
  return s;
}

std::vector<Rat> rational_poles(const std::vector<Poly<ParamScalar>>& ps) {
  UniPoly den(Rat(1));
  for (const auto& p : ps)
    for (const auto& [m, c] : p.terms())
      if (!c.den().is_constant()) den = UniPoly::exact_div(den * c.den(), gcd(den, c.den()));
  if (den.is_constant()) return {};
  return rational_roots(den).roots;
}

RatGerm specialize(const Germ& f, const Rat& v) {
  std::vector<Poly<Rat>> comps;
  for (const auto& c : f.comps) comps.push_back(specialize(c, v));
  return RatGerm(f.vars, f.weights, std::move(comps));
}

Germ lift(const RatGerm& f) {
  std::vector<Poly<ParamScalar>> comps;
  for (const auto& c : f.comps) comps.push_back(lift(c));
  return Germ(f.vars, f.weights, std::move(comps));
}

Germ param_derivative(const Germ& f) {
  Germ r = f;
  for (auto& c : r.comps) c = param_derivative(c);
  return r;
}

template <class K>
MapGerm<K> with_weights(const MapGerm<K>& f, const Weights& w) {
  if (w.size() != f.n()) throw Error(ErrorKind::InvalidInput, "weight vector length");
  std::vector<Poly<K>> comps;
  for (const auto& c : f.comps) comps.push_back(c.with_weights(w));
  return MapGerm<K>(f.vars, w, std::move(comps));
}

template MapGerm<Rat> with_weights(const MapGerm<Rat>&, const Weights&);
template MapGerm<ParamScalar> with_weights(const MapGerm<ParamScalar>&, const Weights&);

namespace {

// Reduced row echelon form over Q, in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<Rat>>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && sgn(a[piv][c]) == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[r], a[piv]);
    const Rat inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rat f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  return pivots;
}

}  // namespace

std::optional<Weights> detect_weights(const Germ& f) {
  const std::size_t n = f.n();
  std::vector<std::vector<Rat>> rows;
  for (const auto& comp : f.comps) {
    if (comp.is_zero()) continue;
    const Monomial& m0 = comp.terms().begin()->first;
    for (const auto& [m, c] : comp.terms()) {
      if (m == m0) continue;
      std::vector<Rat> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = m.e[i] - m0.e[i];
      rows.push_back(std::move(row));
    }
  }
  auto satisfies = [&](const std::vector<long>& w) {
    for (const auto& row : rows) {
      Rat s(0);
      for (std::size_t i = 0; i < n; ++i) s += row[i] * w[i];
      if (sgn(s) != 0) return false;
    }
    return true;
  };
  if (satisfies(std::vector<long>(n, 1))) return Weights::uniform(n);

  const std::vector<std::size_t> pivots = rref(rows, n);
  std::vector<std::size_t> free;
  for (std::size_t j = 0, k = 0; j < n; ++j) {
    if (k < pivots.size() && pivots[k] == j) ++k;
    else free.push_back(j);
  }
  if (free.empty()) return std::nullopt;

  // Search small positive assignments of the free variables; keep the
  // integer weight vector with the smallest total.
  std::optional<std::vector<long>> best;
  long best_sum = 0;
  const int span = free.size() <= 4 ? 6 : (free.size() <= 8 ? 3 : 1);
  std::vector<int> assign(free.size(), 1);
  for (;;) {
    std::vector<Rat> w(n, Rat(0));
    for (std::size_t k = 0; k < free.size(); ++k) w[free[k]] = assign[k];
    bool positive = true;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      Rat v(0);
      for (std::size_t k = 0; k < free.size(); ++k) v -= rows[r][free[k]] * w[free[k]];
      w[pivots[r]] = v;
      if (sgn(v) <= 0) positive = false;
    }
    if (positive) {
      Int l = 1;
      for (const auto& x : w) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
      std::vector<Int> ints;
      Int g = 0;
      for (const auto& x : w) {
        ints.emplace_back(Int(x * l));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
      }
      std::vector<long> cand;
      long sum = 0;
      for (auto& x : ints) {
        x /= g;
        cand.push_back(x.get_si());
        sum += cand.back();
      }
      if (!best || sum < best_sum) {
        best = cand;
        best_sum = sum;
      }
    }
    std::size_t k = 0;
    while (k < assign.size() && assign[k] == span) assign[k++] = 1;
    if (k == assign.size()) break;
    ++assign[k];
  }
  if (!best) return std::nullopt;
  std::vector<int> out(best->begin(), best->end());
  return Weights(std::move(out));
}

template <class K>
PolyMatrix<K> jacobian(const MapGerm<K>& f) {
  PolyMatrix<K> j(f.p());
  for (std::size_t i = 0; i < f.p(); ++i)
    for (std::size_t k = 0; k < f.n(); ++k) j[i].push_back(f.comps[i].partial(k));
  return j;
}

template <class K>
Poly<K> determinant(const PolyMatrix<K>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "determinant of an empty matrix");
  const Weights w = m[0][0].weights();
  if (n == 1) return m[0][0];
  Poly<K> det(w);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    PolyMatrix<K> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly<K>> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(std::move(row));
    }
    Poly<K> term = m[0][c] * determinant(sub);
    if (c % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

template <class K>
Poly<K> jacobian_determinant(const MapGerm<K>& f) {
  if (f.n() != f.p()) throw Error(ErrorKind::NotEquidimensional, "Jacobian determinant needs n = p");
  return determinant(jacobian(f));
}

namespace {

void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  if (k > n) return;
  for (;;) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

template <class K>
JacobianMinors<K> jacobian_and_minors(const MapGerm<K>& f) {
  JacobianMinors<K> out;
  out.matrix = jacobian(f);
  const std::size_t n = f.n();
  const std::size_t p = f.p();
  const std::size_t k = std::min(n, p);
  std::vector<std::vector<std::size_t>> subsets;
  combinations(std::max(n, p), k, subsets);
  for (const auto& s : subsets) {
    PolyMatrix<K> sub(k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        sub[r].push_back(p <= n ? out.matrix[r][s[c]] : out.matrix[s[r]][c]);
    out.minors.push_back(normalize_primitive(determinant(sub)));
  }
  return out;
}

template PolyMatrix<Rat> jacobian(const MapGerm<Rat>&);
template PolyMatrix<ParamScalar> jacobian(const MapGerm<ParamScalar>&);
template Poly<Rat> determinant(const PolyMatrix<Rat>&);
template Poly<ParamScalar> determinant(const PolyMatrix<ParamScalar>&);
template Poly<Rat> jacobian_determinant(const MapGerm<Rat>&);
template Poly<ParamScalar> jacobian_determinant(const MapGerm<ParamScalar>&);
template JacobianMinors<Rat> jacobian_and_minors(const MapGerm<Rat>&);
template JacobianMinors<ParamScalar> jacobian_and_minors(const MapGerm<ParamScalar>&);

}  // namespace germforge
