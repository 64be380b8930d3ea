#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "germforge/germ.hpp"

namespace germforge {

// nullopt value means infinite.
struct SigmaValue {
  std::optional<int> value;
  bool infinite() const { return !value.has_value(); }
  friend bool operator==(const SigmaValue&, const SigmaValue&) = default;
};

SigmaValue sigma(int n, int p);

enum class DimClass { Nice, Boundary, Beyond };
std::string_view to_string(DimClass c);
DimClass classify(int n, int p);

// All (n, p) with n <= n_max and sigma(n, p) = n, ordered by n then p.
std::vector<std::pair<int, int>> boundary_pairs(int n_max);

enum class Provenance { PaperExplicit, ComputedUnfolding, Extrapolated };
std::string_view to_string(Provenance p);

struct StratumRecord {
  int n = 0;
  int p = 0;
  std::string family;
  Germ core;
  std::vector<UnfoldingTerm> unfolding_terms;
  std::size_t unfolding_parameters = 0;
  std::size_t expected_k_codim = 0;
  // Exceptional moduli listed with the normal form; nullopt means unverified.
  std::optional<std::vector<Rat>> exceptional_rational;
  Provenance provenance = Provenance::PaperExplicit;

  Germ unfolded() const;
};

struct CatalogOptions {
  bool force = false;              // allow the extrapolated (6t+2, 7t+1) rows with t > 5
  bool compute_unfolding = true;   // fill computed unfolding terms
};

// Throws NotBoundary for pairs off the boundary.
StratumRecord catalog(int n, int p, const CatalogOptions& opt = {});

// Core normal forms.
Germ core_f_lambda();
Germ core_f_i_lambda(int i);       // i = 1, 2, 3
Germ core_quadrics(int padding);   // the (4,8) quadric system plus zero components
Germ core_8_6();
Germ core_10k_7(int k);
Germ core_x9();

}  // namespace germforge
