#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germforge/linalg.hpp"
#include "germforge/poly.hpp"

namespace germforge {

// classical: m_n theta(f) / TK(f)
// extended:  theta(f) / (TK(f) + tf(theta(n)))
// literal:   theta(f) / TK(f)
enum class CodimVariant { Classical, Extended, Literal };

std::string_view to_string(CodimVariant v);
CodimVariant parse_variant(std::string_view s);

// One coordinate of a graded piece: monomial times a target basis vector.
// Ideal pieces use component 0 throughout.
struct FrameEntry {
  std::size_t component = 0;
  Monomial monomial;
  friend bool operator==(const FrameEntry&, const FrameEntry&) = default;
};

template <class K>
struct GradedPieceBasis {
  int degree = 0;
  std::vector<FrameEntry> frame;  // descending canonical order; column j is frame[j]
  Echelon<K> echelon;             // basis of the piece, in frame coordinates

  std::size_t ambient_dim() const { return frame.size(); }
  std::size_t rank() const { return echelon.rank(); }
  std::size_t codim() const { return ambient_dim() - rank(); }
  bool full() const { return rank() == ambient_dim(); }
  // Complement representatives (least monomials), ascending.
  std::vector<FrameEntry> coset() const;
};

// Degree-d slice of the ideal generated by weighted-homogeneous gens.
template <class K>
GradedPieceBasis<K> ideal_piece(const std::vector<Poly<K>>& gens, int d);

// True when the slices c, ..., c + w_max - 1 are all full, which makes every
// slice of degree >= c full.
template <class K>
bool full_piece_certified(const std::vector<Poly<K>>& gens, int c);

struct LocalAlgebra {
  std::optional<std::size_t> dim;  // nullopt: not certified finite up to cutoff
  int cutoff = 0;
  std::vector<Monomial> basis;     // ascending canonical order
  int certified_at = -1;
};

template <class K>
LocalAlgebra local_algebra(const MapGerm<K>& f, int cutoff = 16);

// Weighted degree of each component; zero components take the maximum.
template <class K>
std::vector<int> component_degrees(const MapGerm<K>& f);

// Degree-D slice of TK(f) inside the variant's ambient, graded so that
// m e_k has degree deg(m) - d_k + d_max.
template <class K>
GradedPieceBasis<K> tk_piece(const MapGerm<K>& f, int D, CodimVariant variant);

struct CodimOptions {
  CodimVariant variant = CodimVariant::Classical;
  int cutoff = 16;
  bool exceptional = true;  // rank-drop analysis of every slice (symbolic germs only)
};

struct CodimReport {
  std::optional<std::size_t> value;  // nullopt: infinite up to cutoff
  int cutoff = 0;
  std::map<int, std::size_t> per_degree;
  CodimVariant variant = CodimVariant::Classical;
  std::optional<RankDropReport> exceptional;
  int stabilized_at = -1;
};

CodimReport k_codim(const Germ& f, const CodimOptions& opt = {});
CodimReport k_codim(const RatGerm& f, const CodimOptions& opt = {});

struct CCodim {
  std::size_t theta_quotient = 0;  // p * dim Q(f)
  std::size_t q_dim = 0;
};

template <class K>
CCodim c_codim(const MapGerm<K>& f, int cutoff = 16);

template <class K>
struct SocleCertificate {
  std::vector<Poly<K>> coefficients;  // sum c_i f_i + J^2 = 0
  Poly<K> jacobian;
  std::vector<Rat> pole_set;          // rational poles of the coefficients
};

template <class K>
SocleCertificate<K> serre_berger(const MapGerm<K>& f, int cutoff = 16);

// Exact check of sum c_i f_i + J^2 = 0 and J not in I(f).
template <class K>
bool verify_socle(const MapGerm<K>& f, const SocleCertificate<K>& cert);

struct UnfoldingTerm {
  std::size_t parameter = 0;  // 0-based index among u_1..u_r
  std::size_t component = 0;  // target component of the core
  ParamPoly term;             // polynomial in the core variables
};

// (u, x) -> (u, f(x) + sum u_i phi_i(x)); parameters come first in both
// source and target. A parameter's weight is d_k - deg(phi); unused
// parameters get weight 1.
Germ make_unfolding(const Germ& core, std::size_t r, const std::vector<UnfoldingTerm>& terms);

// First r coset representatives of the classical TK quotient, in ascending
// canonical order, after also dividing out the modulus direction dF/dL.
std::vector<UnfoldingTerm> unfolding_monomials(const Germ& core, std::size_t r, int cutoff = 16);

}  // namespace germforge
