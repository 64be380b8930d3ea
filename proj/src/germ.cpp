#include "germforge/germ.hpp"

#include <algorithm>
#include <map>

#include "germforge/ansatz.hpp"

namespace germforge {

std::string_view to_string(CodimVariant v) {
  switch (v) {
    case CodimVariant::Classical: return "classical";
    case CodimVariant::Extended: return "extended";
    case CodimVariant::Literal: return "literal";
  }
  return "classical";
}

CodimVariant parse_variant(std::string_view s) {
  if (s == "classical") return CodimVariant::Classical;
  if (s == "extended") return CodimVariant::Extended;
  if (s == "literal") return CodimVariant::Literal;
  throw Error(ErrorKind::InvalidInput, "unknown codimension variant '" + std::string(s) + "'");
}

namespace {

struct EntryKey {
  std::size_t component;
  Monomial monomial;
  auto operator<=>(const EntryKey&) const = default;
};

// Module element as a list of (component, polynomial).
template <class K>
using ModuleElement = std::vector<std::pair<std::size_t, Poly<K>>>;

template <class K>
struct PieceRows {
  int degree = 0;
  std::vector<FrameEntry> frame;
  std::vector<SparseVec<K>> rows;
};

void sort_descending(std::vector<FrameEntry>& frame, const Weights& w) {
  std::sort(frame.begin(), frame.end(), [&](const FrameEntry& a, const FrameEntry& b) {
    if (a.monomial != b.monomial) return monomial_less(b.monomial, a.monomial, w);
    return a.component > b.component;
  });
}

template <class K>
PieceRows<K> assemble(int degree, std::vector<FrameEntry> frame, const Weights& w,
                      const std::vector<ModuleElement<K>>& gens) {
  sort_descending(frame, w);
  std::map<EntryKey, std::size_t> index;
  for (std::size_t j = 0; j < frame.size(); ++j) index.emplace(EntryKey{frame[j].component, frame[j].monomial}, j);
  PieceRows<K> out;
  out.degree = degree;
  for (const auto& g : gens) {
    SparseVec<K> row;
    for (const auto& [k, p] : g)
      for (const auto& [m, c] : p.terms()) {
        auto it = index.find(EntryKey{k, m});
        if (it == index.end()) throw Error(ErrorKind::InvalidInput, "generator leaves the graded ambient");
        row.emplace_back(it->second, c);
      }
    if (row.empty()) continue;
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.rows.push_back(std::move(row));
  }
  out.frame = std::move(frame);
  return out;
}

template <class K>
GradedPieceBasis<K> finish(PieceRows<K> pr) {
  GradedPieceBasis<K> b;
  b.degree = pr.degree;
  b.echelon = echelonize(std::move(pr.rows), pr.frame.size());
  b.frame = std::move(pr.frame);
  return b;
}

template <class K>
int homogeneous_degree_or_throw(const Poly<K>& p, ErrorKind kind) {
  const auto d = p.homogeneous_degree();
  if (!d) throw Error(kind, "polynomial is not weighted-homogeneous");
  return *d;
}

template <class K>
PieceRows<K> ideal_rows(const std::vector<Poly<K>>& gens, const Weights& w, int d) {
  std::vector<FrameEntry> frame;
  for (auto& m : monomials_of_degree(w, d)) frame.push_back(FrameEntry{0, std::move(m)});
  std::vector<ModuleElement<K>> elems;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    const int gd = homogeneous_degree_or_throw(g, ErrorKind::InhomogeneousGenerator);
    for (const auto& m : monomials_of_degree(w, d - gd)) elems.push_back({{0, g.mul_monomial(m)}});
  }
  return assemble(d, std::move(frame), w, elems);
}

template <class K>
const Weights& gens_weights(const std::vector<Poly<K>>& gens) {
  if (gens.empty()) throw Error(ErrorKind::InvalidInput, "ideal needs at least one generator");
  return gens.front().weights();
}

template <class K>
PieceRows<K> tk_rows(const MapGerm<K>& f, int D, CodimVariant variant) {
  const std::vector<int> deg = component_degrees(f);
  const int dmax = *std::max_element(deg.begin(), deg.end());
  const Weights& w = f.weights;
  const int low = variant == CodimVariant::Classical ? 1 : 0;
  std::vector<FrameEntry> frame;
  for (std::size_t k = 0; k < f.p(); ++k) {
    const int e = D - dmax + deg[k];
    if (e < low) continue;
    for (auto& m : monomials_of_degree(w, e)) frame.push_back(FrameEntry{k, std::move(m)});
  }
  std::vector<ModuleElement<K>> gens;
  for (std::size_t j = 0; j < f.n(); ++j) {
    const int e = D - dmax + w.w[j];
    if (e < 0 || (e == 0 && variant != CodimVariant::Extended)) continue;
    std::vector<Poly<K>> col;
    for (const auto& c : f.comps) col.push_back(c.partial(j));
    for (const auto& a : monomials_of_degree(w, e)) {
      ModuleElement<K> g;
      for (std::size_t k = 0; k < f.p(); ++k)
        if (!col[k].is_zero()) g.emplace_back(k, col[k].mul_monomial(a));
      gens.push_back(std::move(g));
    }
  }
  for (std::size_t i = 0; i < f.p(); ++i) {
    if (f.comps[i].is_zero()) continue;
    for (std::size_t k = 0; k < f.p(); ++k) {
      const int e = D - dmax + deg[k] - deg[i];
      if (e < 0) continue;
      for (const auto& b : monomials_of_degree(w, e)) gens.push_back({{k, f.comps[i].mul_monomial(b)}});
    }
  }
  return assemble(D, std::move(frame), w, gens);
}

// Degree below which a full slice does not propagate upward.
template <class K>
int stabilization_floor(const MapGerm<K>& f, CodimVariant variant) {
  const auto deg = component_degrees(f);
  const int dmax = *std::max_element(deg.begin(), deg.end());
  const int dmin = *std::min_element(deg.begin(), deg.end());
  return dmax - dmin + (variant == CodimVariant::Classical ? 1 : 0);
}

// Rank of a slice together with an optional drop analysis.
template <class K>
std::size_t slice_rank(const PieceRows<K>& pr, bool analyse, std::vector<RankDropReport>& drops) {
  if constexpr (std::is_same_v<K, ParamScalar>) {
    const bool nonzero = std::any_of(pr.rows.begin(), pr.rows.end(), [](const auto& r) { return !r.empty(); });
    if (analyse && nonzero) {
      RankDropReport rep = rank_drop_locus(pr.rows, pr.frame.size());
      const std::size_t r = rep.generic_rank;
      drops.push_back(std::move(rep));
      return r;
    }
  }
  (void)analyse;
  (void)drops;
  return rank(pr.rows, pr.frame.size());
}

template <class K>
CodimReport k_codim_impl(const MapGerm<K>& f, const CodimOptions& opt) {
  if (!f.is_weighted_homogeneous()) throw Error(ErrorKind::InhomogeneousGerm, "germ is not weighted-homogeneous");
  CodimReport rep;
  rep.cutoff = opt.cutoff;
  rep.variant = opt.variant;
  const bool analyse = opt.exceptional && f.parameterized();
  std::vector<RankDropReport> drops;
  const int floor = stabilization_floor(f, opt.variant);
  const int wmax = f.weights.max();
  std::size_t total = 0;
  int run = 0;
  for (int D = 0; D <= opt.cutoff; ++D) {
    const PieceRows<K> pr = tk_rows(f, D, opt.variant);
    const std::size_t r = slice_rank(pr, analyse, drops);
    const std::size_t c = pr.frame.size() - r;
    rep.per_degree[D] = c;
    total += c;
    if (c == 0 && D >= floor) {
      if (++run == wmax) {
        rep.value = total;
        rep.stabilized_at = D - wmax + 1;
        break;
      }
    } else {
      run = 0;
    }
  }
  if (analyse) rep.exceptional = merge_drop_reports(drops);
  return rep;
}

}  // namespace

template <class K>
std::vector<FrameEntry> GradedPieceBasis<K>::coset() const {
  std::vector<FrameEntry> out;
  for (std::size_t c : echelon.free_columns()) out.push_back(frame[c]);
  std::reverse(out.begin(), out.end());
  return out;
}

template struct GradedPieceBasis<Rat>;
template struct GradedPieceBasis<ParamScalar>;

template <class K>
GradedPieceBasis<K> ideal_piece(const std::vector<Poly<K>>& gens, int d) {
  return finish(ideal_rows(gens, gens_weights(gens), d));
}

template <class K>
bool full_piece_certified(const std::vector<Poly<K>>& gens, int c) {
  const Weights& w = gens_weights(gens);
  for (int d = c; d < c + w.max(); ++d)
    if (!ideal_piece(gens, d).full()) return false;
  return true;
}

template <class K>
std::vector<int> component_degrees(const MapGerm<K>& f) {
  std::vector<int> deg;
  int dmax = -1;
  for (const auto& c : f.comps) {
    if (c.is_zero()) {
      deg.push_back(-1);
      continue;
    }
    deg.push_back(homogeneous_degree_or_throw(c, ErrorKind::InhomogeneousGerm));
    dmax = std::max(dmax, deg.back());
  }
  if (dmax < 0) throw Error(ErrorKind::InvalidInput, "germ has only zero components");
  for (auto& d : deg)
    if (d < 0) d = dmax;
  return deg;
}

template <class K>
LocalAlgebra local_algebra(const MapGerm<K>& f, int cutoff) {
  std::vector<Poly<K>> gens;
  for (const auto& c : f.comps)
    if (!c.is_zero()) gens.push_back(c);
  LocalAlgebra la;
  la.cutoff = cutoff;
  if (gens.empty()) return la;
  const int wmax = f.weights.max();
  std::size_t total = 0;
  int run = 0;
  std::vector<Monomial> basis;
  for (int d = 0; d <= cutoff; ++d) {
    const auto piece = finish(ideal_rows(gens, f.weights, d));
    total += piece.codim();
    for (auto& e : piece.coset()) basis.push_back(std::move(e.monomial));
    if (piece.full()) {
      if (++run == wmax) {
        la.dim = total;
        la.certified_at = d - wmax + 1;
        la.basis = std::move(basis);
        return la;
      }
    } else {
      run = 0;
    }
  }
  return la;
}

template <class K>
GradedPieceBasis<K> tk_piece(const MapGerm<K>& f, int D, CodimVariant variant) {
  if (!f.is_weighted_homogeneous()) throw Error(ErrorKind::InhomogeneousGerm, "germ is not weighted-homogeneous");
  return finish(tk_rows(f, D, variant));
}

CodimReport k_codim(const Germ& f, const CodimOptions& opt) { return k_codim_impl(f, opt); }
CodimReport k_codim(const RatGerm& f, const CodimOptions& opt) { return k_codim_impl(f, opt); }

template <class K>
CCodim c_codim(const MapGerm<K>& f, int cutoff) {
  const LocalAlgebra la = local_algebra(f, cutoff);
  if (!la.dim) throw Error(ErrorKind::NotFinite, "local algebra is not finite up to the cutoff");
  return CCodim{f.p() * *la.dim, *la.dim};
}

template <class K>
SocleCertificate<K> serre_berger(const MapGerm<K>& f, int cutoff) {
  if (f.n() != f.p()) throw Error(ErrorKind::NotEquidimensional, "socle certificate needs n = p");
  if (!local_algebra(f, cutoff).dim) throw Error(ErrorKind::NotFinite, "local algebra is not finite");
  SocleCertificate<K> cert;
  cert.jacobian = jacobian_determinant(f);
  if (cert.jacobian.is_zero() || ideal_membership(f.comps, cert.jacobian))
    throw Error(ErrorKind::SocleFailure, "Jacobian determinant lies in the ideal of the components");
  auto c = ideal_membership(f.comps, -(cert.jacobian * cert.jacobian));
  if (!c) throw Error(ErrorKind::SocleFailure, "squared Jacobian determinant is not in the ideal");
  cert.coefficients = std::move(*c);
  cert.pole_set = rational_poles(cert.coefficients);
  return cert;
}

template <class K>
bool verify_socle(const MapGerm<K>& f, const SocleCertificate<K>& cert) {
  if (cert.coefficients.size() != f.p()) return false;
  Poly<K> sum = cert.jacobian * cert.jacobian;
  for (std::size_t i = 0; i < f.p(); ++i) sum += cert.coefficients[i] * f.comps[i];
  if (!sum.is_zero()) return false;
  return !ideal_membership(f.comps, cert.jacobian).has_value();
}

#define GERMFORGE_GERM(K)                                                           \
  template GradedPieceBasis<K> ideal_piece(const std::vector<Poly<K>>&, int);       \
  template bool full_piece_certified(const std::vector<Poly<K>>&, int);             \
  template std::vector<int> component_degrees(const MapGerm<K>&);                   \
  template LocalAlgebra local_algebra(const MapGerm<K>&, int);                      \
  template GradedPieceBasis<K> tk_piece(const MapGerm<K>&, int, CodimVariant);      \
  template CCodim c_codim(const MapGerm<K>&, int);                                  \
  template SocleCertificate<K> serre_berger(const MapGerm<K>&, int);                \
  template bool verify_socle(const MapGerm<K>&, const SocleCertificate<K>&);

GERMFORGE_GERM(Rat)
GERMFORGE_GERM(ParamScalar)
#undef GERMFORGE_GERM

namespace {

ParamPoly embed(const ParamPoly& p, std::size_t shift, const Weights& w) {
  ParamPoly out(w);
  for (const auto& [m, c] : p.terms()) {
    Monomial mm(w.size());
    for (std::size_t i = 0; i < m.size(); ++i) mm.e[shift + i] = m.e[i];
    out.add_term(mm, c);
  }
  return out;
}

}  // namespace

Germ make_unfolding(const Germ& core, std::size_t r, const std::vector<UnfoldingTerm>& terms) {
  if (r == 0 && terms.empty()) return core;
  const auto deg = component_degrees(core);
  std::vector<int> uw(r, 0);
  for (const auto& t : terms) {
    if (t.parameter >= r) throw Error(ErrorKind::IndexOutOfRange, "unfolding parameter index out of range");
    if (t.component >= core.p()) throw Error(ErrorKind::IndexOutOfRange, "unfolding target component out of range");
    if (t.term.nvars() != core.n()) throw Error(ErrorKind::IncompatibleAmbient, "unfolding term over other variables");
    const auto td = t.term.with_weights(core.weights).homogeneous_degree();
    if (!td) throw Error(ErrorKind::InhomogeneousGerm, "unfolding term is not weighted-homogeneous");
    const int wt = deg[t.component] - *td;
    if (wt <= 0) throw Error(ErrorKind::InvalidInput, "unfolding term degree reaches the component degree");
    if (uw[t.parameter] != 0 && uw[t.parameter] != wt)
      throw Error(ErrorKind::InvalidInput, "unfolding parameter used with inconsistent weights");
    uw[t.parameter] = wt;
  }
  std::vector<std::string> vars;
  std::vector<int> w;
  for (std::size_t i = 0; i < r; ++i) {
    vars.push_back("u" + std::to_string(i + 1));
    if (std::find(core.vars.begin(), core.vars.end(), vars.back()) != core.vars.end())
      throw Error(ErrorKind::InvalidInput, "parameter name " + vars.back() + " clashes with a core variable");
    w.push_back(uw[i] == 0 ? 1 : uw[i]);
  }
  vars.insert(vars.end(), core.vars.begin(), core.vars.end());
  w.insert(w.end(), core.weights.w.begin(), core.weights.w.end());
  const Weights weights(w);
  std::vector<ParamPoly> comps;
  for (std::size_t i = 0; i < r; ++i) comps.push_back(ParamPoly::variable(weights, i));
  for (std::size_t k = 0; k < core.p(); ++k) comps.push_back(embed(core.comps[k], r, weights));
  for (const auto& t : terms)
    comps[r + t.component] += ParamPoly::variable(weights, t.parameter) * embed(t.term, r, weights);
  return Germ(std::move(vars), weights, std::move(comps));
}

std::vector<UnfoldingTerm> unfolding_monomials(const Germ& core, std::size_t r, int cutoff) {
  if (r == 0) return {};
  const auto deg = component_degrees(core);
  const int dmax = *std::max_element(deg.begin(), deg.end());
  const Germ dl = param_derivative(core);
  const int floor = stabilization_floor(core, CodimVariant::Classical);
  const int wmax = core.weights.max();
  std::vector<UnfoldingTerm> found;
  std::size_t available = 0;
  int run = 0;
  bool finite = false;
  for (int D = 0; D <= cutoff; ++D) {
    PieceRows<ParamScalar> pr = tk_rows(core, D, CodimVariant::Classical);
    if (D == dmax) {
      std::vector<ModuleElement<ParamScalar>> extra(1);
      for (std::size_t k = 0; k < core.p(); ++k)
        if (!dl.comps[k].is_zero()) extra[0].emplace_back(k, dl.comps[k]);
      if (!extra[0].empty()) {
        auto more = assemble(D, pr.frame, core.weights, extra);
        // assemble re-sorts an already sorted frame, so column indices agree.
        for (auto& row : more.rows) pr.rows.push_back(std::move(row));
      }
    }
    const auto piece = finish(std::move(pr));
    const auto coset = piece.coset();
    available += coset.size();
    for (const auto& e : coset) {
      if (found.size() == r) break;
      UnfoldingTerm t;
      t.parameter = found.size();
      t.component = e.component;
      t.term = ParamPoly::term(core.weights, e.monomial, ParamScalar(1));
      found.push_back(std::move(t));
    }
    if (piece.full() && D >= floor) {
      if (++run == wmax) {
        finite = true;
        break;
      }
    } else {
      run = 0;
    }
  }
  if (!finite) throw Error(ErrorKind::NotFinite, "K-codimension is not finite up to the cutoff");
  if (available < r)
    throw Error(ErrorKind::NotEnoughDirections,
                "quotient has only " + std::to_string(available) + " directions besides the modulus");
  return found;
}

}  // namespace germforge
