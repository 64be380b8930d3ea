#pragma once

#include <optional>
#include <vector>

#include "germforge/poly.hpp"

namespace germforge {

// Linear system for unknown weighted-homogeneous polynomials u_j:
//   sum_j coeff[e][j] * u_j = rhs[e]   for every equation e.
// Each unknown has a prescribed degree; a negative degree forces it to zero.
template <class K>
struct Ansatz {
  Weights weights;
  std::vector<int> unknown_degrees;
  std::vector<std::vector<Poly<K>>> coeff;  // [equation][unknown]
  std::vector<Poly<K>> rhs;                 // [equation]
};

// Solution over K with free coefficients set to zero, or nullopt.
template <class K>
std::optional<std::vector<Poly<K>>> solve_ansatz(const Ansatz<K>& a);

// Solution whose coefficients are polynomials in L of degree at most
// param_degree, found over Q by expanding every coefficient in powers of L.
// Throws NonPolynomialParameter when an input coefficient has a denominator.
std::optional<std::vector<Poly<ParamScalar>>> solve_ansatz_polynomial(const Ansatz<ParamScalar>& a,
                                                                      int param_degree);

// Expresses target as sum_i c_i gens[i] with homogeneous c_i.
template <class K>
std::optional<std::vector<Poly<K>>> ideal_membership(const std::vector<Poly<K>>& gens, const Poly<K>& target);

}  // namespace germforge
