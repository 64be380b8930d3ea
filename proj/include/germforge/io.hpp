#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "germforge/trivialize.hpp"

namespace germforge {

using Json = nlohmann::json;

Json germ_to_json(const Germ& f);
Germ germ_from_json(const Json& j);

// Monomial -> coefficient map; the constant monomial is keyed "1".
Json poly_to_json(const ParamPoly& p, const std::vector<std::string>& vars);
ParamPoly poly_from_json(const Json& j, const std::vector<std::string>& vars, const Weights& w);

using AnyCert = std::variant<CTrivCert, KTrivCert>;

// {family, mode, param_mode, control, matrix, X (K only), pole_set, verification}
Json cert_to_json(const CTrivCert& c, bool verified);
Json cert_to_json(const KTrivCert& c, bool verified);
AnyCert cert_from_json(const Json& j);

enum class Tag { PaperExpected, Derived, Exploratory };
std::string_view to_string(Tag t);
Tag parse_tag(std::string_view s);

struct Claim {
  std::string name;
  std::string value;
  Tag tag = Tag::Derived;
  friend bool operator==(const Claim&, const Claim&) = default;
};

struct RunReport {
  std::string subcommand;
  Json inputs = Json::object();
  std::string headline;
  std::vector<Claim> claims;
  Json results = Json::object();
  std::string body;              // printed before the headline in text form
  std::optional<Json> timings;   // only when requested; breaks byte-determinism
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

enum class Format { Text, Json };

std::string emit_report(const RunReport& r, Format f);
RunReport report_from_json(const Json& j);

}  // namespace germforge
