#include "germforge/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "germforge/parallel.hpp"

namespace germforge {

template <class K>
Mat<K> Mat<K>::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
  return m;
}

template <class K>
Mat<K> Mat<K>::from_rows(const std::vector<std::vector<K>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows[0].size();
  Mat m(rows.size(), c);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(r, j) = rows[r][j];
  }
  return m;
}

template <class K>
Mat<K> Mat<K>::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::InvalidInput, "matrix product shape mismatch");
  Mat m(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const K& a = (*this)(i, k);
      if (germforge::is_zero(a)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!germforge::is_zero(o(k, j))) m(i, j) += a * o(k, j);
    }
  return m;
}

template <class K>
Mat<K> Mat<K>::column(std::size_t c) const {
  Mat m(rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) m(i, 0) = (*this)(i, c);
  return m;
}

template <class K>
bool Mat<K>::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const K& x) { return germforge::is_zero(x); });
}

template <class K>
std::vector<SparseVec<K>> Mat<K>::sparse_rows() const {
  std::vector<SparseVec<K>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!germforge::is_zero((*this)(i, j))) out[i].emplace_back(j, (*this)(i, j));
  return out;
}

template <class K>
std::vector<std::size_t> Echelon<K>::free_columns() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (k < pivots.size() && pivots[k] == c) ++k;
    else out.push_back(c);
  }
  return out;
}

namespace {

// alpha*a + beta*b, dropping the entry at `skip` (known to cancel).
template <class K>
SparseVec<K> combine(const SparseVec<K>& a, const K& alpha, const SparseVec<K>& b, const K& beta,
                     std::size_t skip) {
  SparseVec<K> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      if (a[i].first != skip) out.emplace_back(a[i].first, alpha * a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      if (b[j].first != skip) out.emplace_back(b[j].first, beta * b[j].second);
      ++j;
    } else {
      if (a[i].first != skip) {
        K v = alpha * a[i].second + beta * b[j].second;
        if (!is_zero(v)) out.emplace_back(a[i].first, std::move(v));
      }
      ++i;
      ++j;
    }
  }
  return out;
}

// Rat rows are kept as primitive integer vectors with positive lead.
void make_primitive(SparseVec<Rat>& row) {
  if (row.empty()) return;
  Int g = 0, l = 1;
  for (const auto& [c, v] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  if (sgn(row.front().second) < 0) g = -g;
  if (g == 1 && l == 1) return;
  Rat f(l, g);
  f.canonicalize();
  for (auto& [c, v] : row) v *= f;
}

void normalize_row(SparseVec<Rat>& row) { make_primitive(row); }

void normalize_row(SparseVec<ParamScalar>& row) {
  if (row.empty() || row.front().second.is_one()) return;
  const ParamScalar inv = row.front().second.inverse();
  for (auto& [c, v] : row) v *= inv;
}

SparseVec<Rat> reduce(const SparseVec<Rat>& row, const SparseVec<Rat>& pivot) {
  const Rat& a = row.front().second;
  const Rat& p = pivot.front().second;
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_num_mpz_t(), p.get_num_mpz_t());
  const Rat pa = Rat(p.get_num() / g), aa = Rat(a.get_num() / g);
  SparseVec<Rat> out = combine(row, pa, pivot, Rat(-aa), row.front().first);
  make_primitive(out);
  return out;
}

SparseVec<ParamScalar> reduce(const SparseVec<ParamScalar>& row, const SparseVec<ParamScalar>& pivot) {
  return combine(row, ParamScalar(1), pivot, -row.front().second, row.front().first);
}

}  // namespace

template <class K>
Echelon<K> echelonize(std::vector<SparseVec<K>> rows, std::size_t cols) {
  Echelon<K> e;
  e.cols = cols;
  std::vector<std::vector<SparseVec<K>>> buckets(cols);
  for (auto& r : rows) {
    if (r.empty()) continue;
    if (r.back().first >= cols) throw Error(ErrorKind::IndexOutOfRange, "sparse entry beyond column count");
    if constexpr (std::is_same_v<K, Rat>) make_primitive(r);
    buckets[r.front().first].push_back(std::move(r));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    auto& bucket = buckets[c];
    if (bucket.empty()) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < bucket.size(); ++i) {
      const auto ci = FieldTraits<K>::cost(bucket[i].front().second);
      const auto cb = FieldTraits<K>::cost(bucket[best].front().second);
      if (ci < cb || (ci == cb && bucket[i].size() < bucket[best].size())) best = i;
    }
    std::swap(bucket[best], bucket.back());
    SparseVec<K> pivot = std::move(bucket.back());
    bucket.pop_back();
    e.pivot_values.push_back(pivot.front().second);
    normalize_row(pivot);

    std::vector<SparseVec<K>> reduced(bucket.size());
    auto work = [&](std::size_t i) { reduced[i] = reduce(bucket[i], pivot); };
    if (bucket.size() >= 8 && FieldTraits<K>::kind == Field::Parametric) parallel_for(bucket.size(), work);
    else
      for (std::size_t i = 0; i < bucket.size(); ++i) work(i);
    std::vector<SparseVec<K>>().swap(bucket);
    for (auto& r : reduced)
      if (!r.empty()) buckets[r.front().first].push_back(std::move(r));

    e.pivots.push_back(c);
    e.rows.push_back(std::move(pivot));
  }
  return e;
}

template <class K>
std::optional<std::vector<K>> back_substitute(const Echelon<K>& e, std::size_t unknowns) {
  for (std::size_t p : e.pivots)
    if (p >= unknowns) return std::nullopt;
  std::vector<K> x(unknowns, K(0));
  for (std::size_t k = e.rows.size(); k-- > 0;) {
    const auto& row = e.rows[k];
    K acc(0);
    for (std::size_t t = 1; t < row.size(); ++t) {
      const auto& [c, v] = row[t];
      if (c == unknowns) acc += v;
      else if (c < unknowns && !is_zero(x[c])) acc -= v * x[c];
    }
    x[row.front().first] = acc / row.front().second;
  }
  return x;
}

template <class K>
std::optional<std::vector<K>> solve_sparse(std::vector<SparseVec<K>> augmented, std::size_t unknowns) {
  return back_substitute(echelonize(std::move(augmented), unknowns + 1), unknowns);
}

template <class K>
SolveResult<K> rank_and_solve(const Mat<K>& a, const std::optional<Mat<K>>& b) {
  SolveResult<K> res;
  const auto rows = a.sparse_rows();
  const Echelon<K> e = echelonize(rows, a.cols());
  res.rank = e.rank();
  res.pivots = e.pivots;
  if (!b) return res;
  if (b->rows() != a.rows()) throw Error(ErrorKind::InvalidInput, "right-hand side row count mismatch");
  Mat<K> x(a.cols(), b->cols());
  for (std::size_t k = 0; k < b->cols(); ++k) {
    auto aug = rows;
    for (std::size_t i = 0; i < aug.size(); ++i)
      if (!is_zero((*b)(i, k))) aug[i].emplace_back(a.cols(), (*b)(i, k));
    auto sol = solve_sparse(std::move(aug), a.cols());
    if (!sol) return res;
    for (std::size_t j = 0; j < a.cols(); ++j) x(j, k) = (*sol)[j];
  }
  res.solution = std::move(x);
  return res;
}

template <class K>
Mat<K> nullspace(const Mat<K>& a) {
  const Echelon<K> e = echelonize(a.sparse_rows(), a.cols());
  const auto free = e.free_columns();
  Mat<K> out(a.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    std::vector<K> x(a.cols(), K(0));
    x[free[f]] = K(1);
    for (std::size_t k = e.rows.size(); k-- > 0;) {
      const auto& row = e.rows[k];
      K acc(0);
      for (std::size_t t = 1; t < row.size(); ++t)
        if (!is_zero(x[row[t].first])) acc -= row[t].second * x[row[t].first];
      x[row.front().first] = acc / row.front().second;
    }
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, f) = x[j];
  }
  return out;
}

template <class K>
K determinant(const Mat<K>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidInput, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Mat<K> m = a;
  K det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      if (piv == n || FieldTraits<K>::cost(m(r, c)) < FieldTraits<K>::cost(m(piv, c))) piv = r;
    }
    if (piv == n) return K(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const K inv = K(1) / m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      const K f = m(r, c) * inv;
      for (std::size_t j = c; j < n; ++j)
        if (!is_zero(m(c, j))) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

#define GERMFORGE_LINALG(K)                                                                     \
  template class Mat<K>;                                                                        \
  template struct Echelon<K>;                                                                   \
  template Echelon<K> echelonize(std::vector<SparseVec<K>>, std::size_t);                       \
  template std::optional<std::vector<K>> back_substitute(const Echelon<K>&, std::size_t);       \
  template std::optional<std::vector<K>> solve_sparse(std::vector<SparseVec<K>>, std::size_t);  \
  template SolveResult<K> rank_and_solve(const Mat<K>&, const std::optional<Mat<K>>&);          \
  template Mat<K> nullspace(const Mat<K>&);                                                     \
  template K determinant(const Mat<K>&);

GERMFORGE_LINALG(Rat)
GERMFORGE_LINALG(ParamScalar)
#undef GERMFORGE_LINALG

Mat<Rat> specialize(const Mat<ParamScalar>& a, const Rat& v) {
  Mat<Rat> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).specialize(v);
  return m;
}

std::vector<SparseVec<Rat>> specialize(const std::vector<SparseVec<ParamScalar>>& rows, const Rat& v) {
  std::vector<SparseVec<Rat>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [c, s] : rows[i]) {
      Rat x = s.specialize(v);
      if (sgn(x) != 0) out[i].emplace_back(c, std::move(x));
    }
  return out;
}

namespace {

// Multiplies each row by the lcm of its denominators.
std::vector<SparseVec<ParamScalar>> clear_denominators(const std::vector<SparseVec<ParamScalar>>& rows) {
  std::vector<SparseVec<ParamScalar>> out;
  for (const auto& r : rows) {
    UniPoly l(Rat(1));
    for (const auto& [c, s] : r) l = UniPoly::exact_div(l * s.den(), gcd(l, s.den()));
    SparseVec<ParamScalar> row;
    for (const auto& [c, s] : r) row.emplace_back(c, s * ParamScalar(l));
    out.push_back(std::move(row));
  }
  return out;
}

// Product of the pivots: up to sign a maximal minor of the input, since only
// row additions happen before a row is chosen as pivot.
UniPoly pivot_bound(const Echelon<ParamScalar>& e) {
  ParamScalar prod(1);
  for (const auto& v : e.pivot_values) prod *= v;
  if (prod.num().is_constant()) return UniPoly(Rat(1));
  return squarefree_part(prod.num());
}

// Same rows with shuffled columns and row order, so that elimination picks
// a different maximal minor.
std::vector<SparseVec<ParamScalar>> scramble(const std::vector<SparseVec<ParamScalar>>& rows, std::size_t cols,
                                             std::mt19937& rng) {
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<SparseVec<ParamScalar>> out;
  for (const auto& r : rows) {
    SparseVec<ParamScalar> row;
    for (const auto& [c, s] : r) row.emplace_back(perm[c], s);
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(row));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

RankDropReport rank_drop_locus(const std::vector<SparseVec<ParamScalar>>& input, std::size_t cols) {
  const auto rows = clear_denominators(input);
  if (std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.empty(); }))
    throw Error(ErrorKind::ZeroMatrix, "rank drop locus of the zero matrix");

  RankDropReport rep;
  const Echelon<ParamScalar> e0 = echelonize(rows, cols);
  rep.generic_rank = e0.rank();
  UniPoly bound = pivot_bound(e0);

  std::mt19937 rng(0x5eed);
  for (int round = 0; round < 4 && bound.degree() > 0; ++round) {
    const Echelon<ParamScalar> e = echelonize(scramble(rows, cols, rng), cols);
    if (e.rank() == rep.generic_rank) bound = gcd(bound, pivot_bound(e));
  }

  auto rank_at = [&](const Rat& v) { return rank(specialize(rows, v), cols); };

  UniPoly drop = bound;
  if (drop.degree() > 0) {
    const RootReport rr = rational_roots(drop);
    for (const auto& v : rr.roots) {
      if (rank_at(v) < rep.generic_rank) {
        rep.rational_drop_values.push_back(v);
      } else {
        drop = UniPoly::exact_div(drop, UniPoly(std::vector<Rat>{-v, Rat(1)}));
      }
    }
    rep.residual_factor = rr.residual;
  } else {
    rep.residual_factor = UniPoly(Rat(1));
  }
  rep.drop_polynomial = drop.monic();

  std::uniform_int_distribution<int> num(-1000, 1000), den(1, 97);
  for (int k = 0; k < 3;) {
    Rat v(num(rng), den(rng));
    v.canonicalize();
    if (sgn(rep.drop_polynomial.eval(v)) == 0) continue;
    if (rank_at(v) != rep.generic_rank)
      throw Error(ErrorKind::InvalidInput, "rank drop locus failed its non-root check at L = " + to_string(v));
    ++k;
  }
  return rep;
}

RankDropReport rank_drop_locus(const Mat<ParamScalar>& a) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroMatrix, "rank drop locus of the zero matrix");
  return rank_drop_locus(a.sparse_rows(), a.cols());
}

RankDropReport merge_drop_reports(const std::vector<RankDropReport>& reports) {
  RankDropReport out;
  out.drop_polynomial = UniPoly(Rat(1));
  out.residual_factor = UniPoly(Rat(1));
  for (const auto& r : reports) {
    out.generic_rank += r.generic_rank;
    out.drop_polynomial = squarefree_part(out.drop_polynomial * r.drop_polynomial).monic();
    out.residual_factor = squarefree_part(out.residual_factor * r.residual_factor).monic();
    for (const auto& v : r.rational_drop_values)
      if (std::find(out.rational_drop_values.begin(), out.rational_drop_values.end(), v) ==
          out.rational_drop_values.end())
        out.rational_drop_values.push_back(v);
  }
  std::sort(out.rational_drop_values.begin(), out.rational_drop_values.end());
  return out;
}

}  // namespace germforge
