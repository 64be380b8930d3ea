#include "germforge/ansatz.hpp"

#include <map>

#include "germforge/linalg.hpp"

namespace germforge {

namespace {

struct RowKey {
  std::size_t equation;
  Monomial monomial;
  int power;  // power of L in polynomial mode, 0 otherwise
  auto operator<=>(const RowKey&) const = default;
};

template <class K>
using RowMap = std::map<RowKey, std::map<std::size_t, K>>;

template <class K>
void accumulate(std::map<std::size_t, K>& row, std::size_t col, const K& v) {
  auto [it, inserted] = row.try_emplace(col, v);
  if (!inserted) {
    it->second += v;
    if (is_zero(it->second)) row.erase(it);
  }
}

template <class K>
std::vector<SparseVec<K>> to_rows(RowMap<K>& rows) {
  std::vector<SparseVec<K>> out;
  out.reserve(rows.size());
  for (auto& [key, r] : rows) {
    SparseVec<K> v;
    v.reserve(r.size());
    for (auto& [c, x] : r) v.emplace_back(c, std::move(x));
    out.push_back(std::move(v));
  }
  return out;
}

template <class K>
void check_shape(const Ansatz<K>& a) {
  if (a.coeff.size() != a.rhs.size()) throw Error(ErrorKind::InvalidInput, "ansatz equation count mismatch");
  for (const auto& row : a.coeff)
    if (row.size() != a.unknown_degrees.size())
      throw Error(ErrorKind::InvalidInput, "ansatz unknown count mismatch");
}

}  // namespace

template <class K>
std::optional<std::vector<Poly<K>>> solve_ansatz(const Ansatz<K>& a) {
  check_shape(a);
  std::vector<std::vector<Monomial>> monos;
  std::vector<std::size_t> offset;
  std::size_t unknowns = 0;
  for (int d : a.unknown_degrees) {
    offset.push_back(unknowns);
    monos.push_back(d < 0 ? std::vector<Monomial>{} : monomials_of_degree(a.weights, d));
    unknowns += monos.back().size();
  }
  RowMap<K> rows;
  for (std::size_t e = 0; e < a.coeff.size(); ++e) {
    for (std::size_t j = 0; j < monos.size(); ++j) {
      const auto& c = a.coeff[e][j];
      if (c.is_zero()) continue;
      for (std::size_t t = 0; t < monos[j].size(); ++t)
        for (const auto& [m, v] : c.terms()) accumulate(rows[RowKey{e, m * monos[j][t], 0}], offset[j] + t, v);
    }
    for (const auto& [m, v] : a.rhs[e].terms()) accumulate(rows[RowKey{e, m, 0}], unknowns, v);
  }
  auto sol = solve_sparse(to_rows(rows), unknowns);
  if (!sol) return std::nullopt;
  std::vector<Poly<K>> out;
  for (std::size_t j = 0; j < monos.size(); ++j) {
    Poly<K> p(a.weights);
    for (std::size_t t = 0; t < monos[j].size(); ++t) p.add_term(monos[j][t], (*sol)[offset[j] + t]);
    out.push_back(std::move(p));
  }
  return out;
}

template std::optional<std::vector<Poly<Rat>>> solve_ansatz(const Ansatz<Rat>&);
template std::optional<std::vector<Poly<ParamScalar>>> solve_ansatz(const Ansatz<ParamScalar>&);

std::optional<std::vector<Poly<ParamScalar>>> solve_ansatz_polynomial(const Ansatz<ParamScalar>& a,
                                                                      int param_degree) {
  check_shape(a);
  auto poly_coeffs = [](const ParamScalar& s) -> const std::vector<Rat>& {
    if (!s.is_polynomial())
      throw Error(ErrorKind::NonPolynomialParameter, "coefficient " + s.to_string() + " has a denominator in L");
    return s.num().coeffs();
  };
  const std::size_t powers = static_cast<std::size_t>(param_degree) + 1;
  std::vector<std::vector<Monomial>> monos;
  std::vector<std::size_t> offset;
  std::size_t unknowns = 0;
  for (int d : a.unknown_degrees) {
    offset.push_back(unknowns);
    monos.push_back(d < 0 ? std::vector<Monomial>{} : monomials_of_degree(a.weights, d));
    unknowns += monos.back().size() * powers;
  }
  RowMap<Rat> rows;
  for (std::size_t e = 0; e < a.coeff.size(); ++e) {
    for (std::size_t j = 0; j < monos.size(); ++j) {
      const auto& c = a.coeff[e][j];
      if (c.is_zero()) continue;
      for (std::size_t t = 0; t < monos[j].size(); ++t)
        for (const auto& [m, v] : c.terms()) {
          const auto& cs = poly_coeffs(v);
          for (std::size_t s = 0; s < cs.size(); ++s) {
            if (sgn(cs[s]) == 0) continue;
            for (std::size_t q = 0; q < powers; ++q)
              accumulate(rows[RowKey{e, m * monos[j][t], static_cast<int>(s + q)}],
                         offset[j] + t * powers + q, cs[s]);
          }
        }
    }
    for (const auto& [m, v] : a.rhs[e].terms()) {
      const auto& cs = poly_coeffs(v);
      for (std::size_t s = 0; s < cs.size(); ++s)
        if (sgn(cs[s]) != 0) accumulate(rows[RowKey{e, m, static_cast<int>(s)}], unknowns, cs[s]);
    }
  }
  auto sol = solve_sparse(to_rows(rows), unknowns);
  if (!sol) return std::nullopt;
  std::vector<Poly<ParamScalar>> out;
  for (std::size_t j = 0; j < monos.size(); ++j) {
    Poly<ParamScalar> p(a.weights);
    for (std::size_t t = 0; t < monos[j].size(); ++t) {
      std::vector<Rat> cs(powers);
      for (std::size_t q = 0; q < powers; ++q) cs[q] = (*sol)[offset[j] + t * powers + q];
      p.add_term(monos[j][t], ParamScalar(UniPoly(cs)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

template <class K>
std::optional<std::vector<Poly<K>>> ideal_membership(const std::vector<Poly<K>>& gens, const Poly<K>& target) {
  if (gens.empty()) throw Error(ErrorKind::InvalidInput, "ideal membership needs generators");
  const Weights& w = gens.front().weights();
  if (target.is_zero()) return std::vector<Poly<K>>(gens.size(), Poly<K>(w));
  const auto td = target.homogeneous_degree();
  if (!td) throw Error(ErrorKind::InhomogeneousGenerator, "membership target is not weighted-homogeneous");
  Ansatz<K> a;
  a.weights = w;
  a.coeff.emplace_back();
  for (const auto& g : gens) {
    if (g.is_zero()) {
      a.unknown_degrees.push_back(-1);
    } else {
      const auto gd = g.homogeneous_degree();
      if (!gd) throw Error(ErrorKind::InhomogeneousGenerator, "ideal generator is not weighted-homogeneous");
      a.unknown_degrees.push_back(*td - *gd);
    }
    a.coeff[0].push_back(g);
  }
  a.rhs.push_back(target);
  return solve_ansatz(a);
}

template std::optional<std::vector<Poly<Rat>>> ideal_membership(const std::vector<Poly<Rat>>&, const Poly<Rat>&);
template std::optional<std::vector<Poly<ParamScalar>>> ideal_membership(const std::vector<Poly<ParamScalar>>&,
                                                                        const Poly<ParamScalar>&);

}  // namespace germforge
