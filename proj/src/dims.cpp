#include "germforge/dims.hpp"

#include <algorithm>

namespace germforge {

SigmaValue sigma(int n, int p) {
  if (n < 1 || p < 1) throw Error(ErrorKind::OutOfDomain, "sigma needs n, p >= 1");
  if (n <= p) {
    const int q = p - n;
    if (n == 1) return {};
    if (n == 2) return {7 * q + 10};
    if (n == 3) return {6 * q + 9};
    return {q >= 4 ? 6 * q + 8 : 6 * q + 9};
  }
  if (n == p + 1) return {9};
  if (n == p + 2) return {8};
  return {n - p + 7};
}

std::string_view to_string(DimClass c) {
  switch (c) {
    case DimClass::Nice: return "nice";
    case DimClass::Boundary: return "boundary";
    case DimClass::Beyond: return "beyond";
  }
  return "nice";
}

DimClass classify(int n, int p) {
  const SigmaValue s = sigma(n, p);
  if (s.infinite() || *s.value > n) return DimClass::Nice;
  return *s.value == n ? DimClass::Boundary : DimClass::Beyond;
}

std::vector<std::pair<int, int>> boundary_pairs(int n_max) {
  std::vector<std::pair<int, int>> out;
  for (int n = 1; n <= n_max; ++n)
    // For p - n > n/6 + 1 the n <= p branch already exceeds n.
    for (int p = 1; p <= n + n / 6 + 2; ++p)
      if (classify(n, p) == DimClass::Boundary) out.emplace_back(n, p);
  return out;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::PaperExplicit: return "paper_explicit";
    case Provenance::ComputedUnfolding: return "computed_unfolding";
    case Provenance::Extrapolated: return "extrapolated";
  }
  return "paper_explicit";
}

Germ StratumRecord::unfolded() const { return make_unfolding(core, unfolding_parameters, unfolding_terms); }

namespace {

struct Ring {
  Weights w;
  ParamPoly v(std::size_t i) const { return ParamPoly::variable(w, i); }
  ParamPoly L() const { return ParamPoly::constant(w, ParamScalar::param()); }
  ParamPoly zero() const { return ParamPoly(w); }
};

}  // namespace

Germ core_f_lambda() {
  Ring r{Weights::uniform(3)};
  auto x = r.v(0), y = r.v(1), z = r.v(2), L = r.L();
  return Germ({"x", "y", "z"}, r.w, {x * x + L * y * z, y * y + L * z * x, z * z + L * x * y});
}

Germ core_f_i_lambda(int i) {
  if (i < 1 || i > 3) throw Error(ErrorKind::IndexOutOfRange, "f_i lambda needs i in 1..3");
  Germ f = core_f_lambda();
  Ring r{f.weights};
  f.comps.push_back(r.v(0) * r.v(1) * r.v(2));
  for (int k = 1; k < i; ++k) f.comps.push_back(r.zero());
  return f;
}

Germ core_quadrics(int padding) {
  Ring r{Weights::uniform(4)};
  auto x = r.v(0), y = r.v(1), z = r.v(2), w = r.v(3), L = r.L();
  std::vector<ParamPoly> comps{x * x + y * y + z * z, y * y + L * z * z + w * w, x * y, x * z, x * w, y * z, y * w, z * w};
  for (int k = 0; k < padding; ++k) comps.push_back(r.zero());
  return Germ({"x", "y", "z", "w"}, r.w, std::move(comps));
}

Germ core_8_6() {
  Ring r{Weights::uniform(4)};
  auto x = r.v(0), y = r.v(1), z = r.v(2), w = r.v(3), L = r.L();
  return Germ({"x", "y", "z", "w"}, r.w, {x * x + y * y + z * z, y * y + L * z * z + w * w});
}

Germ core_10k_7(int k) {
  if (k < 0) throw Error(ErrorKind::OutOfDomain, "k must be nonnegative");
  std::vector<int> w(static_cast<std::size_t>(k) + 1, 3);
  w.insert(w.end(), {2, 2, 2});
  Ring r{Weights(w)};
  std::vector<std::string> vars;
  ParamPoly g = r.zero();
  for (int i = 0; i <= k; ++i) {
    vars.push_back("w" + std::to_string(i));
    g += r.v(i) * r.v(i);
  }
  const std::size_t o = static_cast<std::size_t>(k) + 1;
  auto x = r.v(o), y = r.v(o + 1), z = r.v(o + 2);
  g += x * x * x + y * y * y + z * z * z + r.L() * x * y * z;
  vars.insert(vars.end(), {"x", "y", "z"});
  return Germ(std::move(vars), r.w, {g});
}

Germ core_x9() {
  Ring r{Weights::uniform(2)};
  auto x = r.v(0), y = r.v(1);
  return Germ({"x", "y"}, r.w, {x * x * x * x + y * y * y * y + r.L() * x * x * y * y});
}

StratumRecord catalog(int n, int p, const CatalogOptions& opt) {
  if (classify(n, p) != DimClass::Boundary)
    throw Error(ErrorKind::NotBoundary, "(" + std::to_string(n) + "," + std::to_string(p) + ") is not a boundary pair");
  StratumRecord rec;
  rec.n = n;
  rec.p = p;
  rec.expected_k_codim = static_cast<std::size_t>(n) + 1;
  auto term = [](const Germ& core, std::size_t par, std::size_t comp, std::size_t var, int power = 1) {
    Monomial m(core.n());
    m.e[var] = power;
    return UnfoldingTerm{par, comp, ParamPoly::term(core.weights, m, ParamScalar(1))};
  };
  bool computed = false;
  if (n == 9 && p == 9) {
    rec.family = "f_lambda";
    rec.core = core_f_lambda();
    rec.exceptional_rational = std::vector<Rat>{Rat(-8), Rat(0), Rat(1)};
    rec.unfolding_terms = {term(rec.core, 0, 0, 1), term(rec.core, 1, 0, 2), term(rec.core, 2, 1, 0),
                           term(rec.core, 3, 1, 2), term(rec.core, 4, 2, 0), term(rec.core, 5, 2, 2)};
  } else if (const int q = p - n; n <= p && q >= 1 && q <= 3) {
    rec.family = "f_" + std::to_string(q) + "lambda";
    rec.core = core_f_i_lambda(q);
    computed = true;
  } else if (n <= p) {
    const int t = (n - 2) / 6;
    rec.family = "quadrics_t" + std::to_string(t);
    if (t > 5 && !opt.force)
      throw Error(ErrorKind::InvalidInput,
                  "the (6t+2,7t+1) core for t > 5 is extrapolated; pass force to build it");
    rec.core = core_quadrics(t - 5);
    computed = true;
    if (t > 5) rec.provenance = Provenance::Extrapolated;
  } else if (n == 8 && p == 6) {
    rec.family = "core_8_6";
    rec.core = core_8_6();
    rec.unfolding_terms = {term(rec.core, 0, 0, 1), term(rec.core, 1, 0, 3), term(rec.core, 2, 1, 0),
                           term(rec.core, 3, 1, 2)};
  } else if (p == 7 && n >= 10) {
    const int k = n - 10;
    rec.family = "core_10k_7";
    rec.core = core_10k_7(k);
    const std::size_t o = static_cast<std::size_t>(k) + 1;
    rec.unfolding_terms = {term(rec.core, 0, 0, o),        term(rec.core, 1, 0, o + 1),
                           term(rec.core, 2, 0, o + 2),    term(rec.core, 3, 0, o, 2),
                           term(rec.core, 4, 0, o + 1, 2), term(rec.core, 5, 0, o + 2, 2)};
  } else if (n == 9 && p == 8) {
    rec.family = "x9";
    rec.core = core_x9();
    computed = true;
  }
  if (rec.core.comps.empty()) throw Error(ErrorKind::NotBoundary, "no catalog entry for this pair");
  rec.unfolding_parameters = static_cast<std::size_t>(n) - rec.core.n();
  if (static_cast<std::size_t>(p) != rec.core.p() + rec.unfolding_parameters)
    throw Error(ErrorKind::InvalidInput, "catalog core does not match the target dimension");
  if (computed) {
    if (rec.provenance != Provenance::Extrapolated) rec.provenance = Provenance::ComputedUnfolding;
    if (opt.compute_unfolding) rec.unfolding_terms = unfolding_monomials(rec.core, rec.unfolding_parameters);
  }
  return rec;
}

}  // namespace germforge
