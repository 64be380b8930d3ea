#pragma once

#include <string>
#include <vector>

#include "germforge/poly.hpp"

namespace fixtures {

using germforge::Germ;
using germforge::ParamPoly;
using germforge::ParamScalar;
using germforge::Weights;

struct Vars {
  Weights w;
  explicit Vars(Weights ws) : w(std::move(ws)) {}
  explicit Vars(std::size_t n) : w(Weights::uniform(n)) {}
  ParamPoly operator[](std::size_t i) const { return ParamPoly::variable(w, i); }
  ParamPoly c(long v) const { return ParamPoly::constant(w, ParamScalar(v)); }
  ParamPoly L() const { return ParamPoly::constant(w, ParamScalar::param()); }
};

inline Germ f_lambda() {
  Vars v(3);
  auto x = v[0], y = v[1], z = v[2], L = v.L();
  return Germ({"x", "y", "z"}, v.w, {x * x + L * y * z, y * y + L * z * x, z * z + L * x * y});
}

inline Germ core_8_6() {
  Vars v(4);
  auto x = v[0], y = v[1], z = v[2], w = v[3], L = v.L();
  return Germ({"x", "y", "z", "w"}, v.w, {x * x + y * y + z * z, y * y + L * z * z + w * w});
}

inline Germ x9() {
  Vars v(2);
  auto x = v[0], y = v[1], L = v.L();
  return Germ({"x", "y"}, v.w, {x * x * x * x + y * y * y * y + L * x * x * y * y});
}

}  // namespace fixtures
