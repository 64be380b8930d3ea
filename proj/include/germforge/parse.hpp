#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "germforge/poly.hpp"

namespace germforge {

// Text form of a germ:
//
//   vars x, y, z          (optional; otherwise first-appearance order)
//   weights 1, 1, 1       (optional; otherwise detected)
//   (x^2 + L*y*z, y^2 + L*z*x, z^2 + L*x*y)
//
// Header lines may also be separated by ';'. Variables are a lowercase letter
// other than l followed by optional digits; L is the modulus. Operators are
// + - * / ^ and parentheses; division only by constants, no implicit products.
struct GermSource {
  std::vector<std::string> vars;
  std::optional<std::vector<int>> weights;
  std::vector<std::string> components;
  std::vector<std::pair<int, int>> positions;  // line and column where each component starts
  bool uses_parameter = false;
};

GermSource read_germ_source(std::string_view text);
Germ to_germ(const GermSource& src);
Germ parse_germ_source(std::string_view text);
std::string print_germ_source(const Germ& f);

// Expression over the given variables (unknown identifiers are errors).
ParamPoly parse_poly(std::string_view text, const std::vector<std::string>& vars, const Weights& w);
ParamScalar parse_scalar(std::string_view text);
Rat parse_rat(std::string_view text);

}  // namespace germforge
