#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "germforge/scalar.hpp"

namespace germforge {

// Sparse vector: (index, value) pairs, strictly increasing index, no zeros.
template <class K>
using SparseVec = std::vector<std::pair<std::size_t, K>>;

template <class K>
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, K(0)) {}
  static Mat identity(std::size_t n);
  static Mat from_rows(const std::vector<std::vector<K>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  K& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const K& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Mat operator*(const Mat& o) const;
  Mat column(std::size_t c) const;
  bool is_zero() const;
  std::vector<SparseVec<K>> sparse_rows() const;

  friend bool operator==(const Mat&, const Mat&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> a_;
};

// Row echelon form. Each stored row has a distinct leading column; rows are
// kept in increasing order of leading column. Over Rat the rows are primitive
// integer vectors; over ParamScalar each row has leading entry 1.
template <class K>
struct Echelon {
  std::size_t cols = 0;
  std::vector<SparseVec<K>> rows;
  std::vector<std::size_t> pivots;  // leading column of each row
  std::vector<K> pivot_values;      // leading entry at the moment it was chosen

  std::size_t rank() const { return rows.size(); }
  // Columns without a pivot, ascending.
  std::vector<std::size_t> free_columns() const;
};

// Columns are processed in index order; rows whose lead sits in the current
// column compete for the pivot (cheapest leading entry, then sparsest row)
// and the others are reduced below it.
template <class K>
Echelon<K> echelonize(std::vector<SparseVec<K>> rows, std::size_t cols);

template <class K>
std::size_t rank(const std::vector<SparseVec<K>>& rows, std::size_t cols) {
  return echelonize(rows, cols).rank();
}

// Back-substitution with every free variable set to zero; nullopt when the
// last column (the right-hand side) carries a pivot.
template <class K>
std::optional<std::vector<K>> back_substitute(const Echelon<K>& e, std::size_t unknowns);

template <class K>
struct SolveResult {
  std::size_t rank = 0;
  std::optional<Mat<K>> solution;  // nullopt is NoSolution
  std::vector<std::size_t> pivots;
};

// Solves A x = b column by column; with no b only the rank and pivots are
// reported.
template <class K>
SolveResult<K> rank_and_solve(const Mat<K>& a, const std::optional<Mat<K>>& b = std::nullopt);

template <class K>
SolveResult<K> rank_and_solve(const Mat<K>& a, const Mat<K>& b) {
  return rank_and_solve(a, std::optional<Mat<K>>(b));
}

// Sparse counterpart used by the certificate solvers: rows of the augmented
// system, right-hand side stored at column `unknowns`.
template <class K>
std::optional<std::vector<K>> solve_sparse(std::vector<SparseVec<K>> augmented, std::size_t unknowns);

// Columns span {x : A x = 0}.
template <class K>
Mat<K> nullspace(const Mat<K>& a);

template <class K>
K determinant(const Mat<K>& a);

// Matrix with every entry specialized at L = v (throws PoleAtParameter).
Mat<Rat> specialize(const Mat<ParamScalar>& a, const Rat& v);
std::vector<SparseVec<Rat>> specialize(const std::vector<SparseVec<ParamScalar>>& rows, const Rat& v);

struct RankDropReport {
  std::size_t generic_rank = 0;
  UniPoly drop_polynomial;  // squarefree, monic
  std::vector<Rat> rational_drop_values;
  UniPoly residual_factor;
};

// Values of L where the rank falls below the generic rank. Rows are cleared
// of denominators first. The product of the pivots of an elimination over
// Q(L) is a maximal minor; the drop polynomial is the squarefree part of the
// gcd of this minor and four more taken after shuffling rows and columns. Every reported rational value is confirmed by re-ranking,
// and three random other values are checked to keep the generic rank.
RankDropReport rank_drop_locus(const Mat<ParamScalar>& a);
RankDropReport rank_drop_locus(const std::vector<SparseVec<ParamScalar>>& rows, std::size_t cols);

// Merges drop reports: union of rational values, product of residuals.
RankDropReport merge_drop_reports(const std::vector<RankDropReport>& reports);

}  // namespace germforge
