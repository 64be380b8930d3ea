#include "germforge/io.hpp"

#include <sstream>

#include "germforge/parse.hpp"

namespace germforge {

namespace {

std::string monomial_key(const Monomial& m, const std::vector<std::string>& vars) {
  if (m.is_one()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[i];
    if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
  }
  return out;
}

Json rats_to_json(const std::vector<Rat>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

std::vector<Rat> rats_from_json(const Json& j) {
  std::vector<Rat> out;
  for (const auto& s : j) out.push_back(parse_rat(s.get<std::string>()));
  return out;
}

Json matrix_to_json(const PolyMatrix<ParamScalar>& A, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& row : A) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(poly_to_json(e, vars));
    out.push_back(r);
  }
  return out;
}

PolyMatrix<ParamScalar> matrix_from_json(const Json& j, const Germ& f) {
  PolyMatrix<ParamScalar> A;
  for (const auto& row : j) {
    std::vector<ParamPoly> r;
    for (const auto& e : row) r.push_back(poly_from_json(e, f.vars, f.weights));
    A.push_back(std::move(r));
  }
  return A;
}

Json control_to_json(const ControlFunction& c, const std::vector<std::string>& vars) {
  Json out{{"mode", std::string(to_string(c.mode))},
           {"square", c.square.to_string(vars)},
           {"escalation", c.escalation},
           {"degree", c.degree()}};
  if (c.bounds) out["bounds"] = {to_string(c.bounds->first), to_string(c.bounds->second)};
  return out;
}

ControlFunction control_from_json(const Json& j, const Germ& f) {
  ControlFunction c;
  c.square = parse_poly(j.at("square").get<std::string>(), f.vars, f.weights);
  c.mode = parse_control_mode(j.at("mode").get<std::string>());
  c.escalation = j.value("escalation", 0);
  if (j.contains("bounds")) {
    c.bounds = std::make_pair(parse_rat(j["bounds"][0].get<std::string>()), parse_rat(j["bounds"][1].get<std::string>()));
  }
  return c;
}

ParamMode param_mode_from_string(const std::string& s) {
  if (s == "rational") return ParamMode::rational();
  const std::string head = "polynomial(";
  if (s.rfind(head, 0) == 0 && s.back() == ')')
    return ParamMode::poly(std::stoi(s.substr(head.size(), s.size() - head.size() - 1)));
  throw Error(ErrorKind::InvalidInput, "unknown parameter mode '" + s + "'");
}

Json common(const Germ& f, const ControlFunction& control, const PolyMatrix<ParamScalar>& A,
            const std::vector<Rat>& poles, const ParamMode& mode, bool verified) {
  return Json{{"family", germ_to_json(f)},
              {"param_mode", mode.to_string()},
              {"control", control_to_json(control, f.vars)},
              {"matrix", matrix_to_json(A, f.vars)},
              {"pole_set", rats_to_json(poles)},
              {"verification", verified}};
}

}  // namespace

Json germ_to_json(const Germ& f) {
  Json comps = Json::array();
  for (const auto& c : f.comps) comps.push_back(c.to_string(f.vars));
  return Json{{"vars", f.vars}, {"weights", f.weights.w}, {"components", comps}};
}

Germ germ_from_json(const Json& j) {
  GermSource src;
  src.vars = j.at("vars").get<std::vector<std::string>>();
  if (j.contains("weights")) src.weights = j["weights"].get<std::vector<int>>();
  src.components = j.at("components").get<std::vector<std::string>>();
  return to_germ(src);
}

Json poly_to_json(const ParamPoly& p, const std::vector<std::string>& vars) {
  Json out = Json::object();
  for (const auto& [m, c] : p.terms()) out[monomial_key(m, vars)] = c.to_string();
  return out;
}

ParamPoly poly_from_json(const Json& j, const std::vector<std::string>& vars, const Weights& w) {
  ParamPoly out(w);
  for (const auto& [key, value] : j.items()) {
    const ParamPoly m = parse_poly(key, vars, w);
    if (m.size() != 1 || !m.terms().begin()->second.is_one())
      throw Error(ErrorKind::InvalidInput, "'" + key + "' is not a monomial");
    out.add_term(m.terms().begin()->first, parse_scalar(value.get<std::string>()));
  }
  return out;
}

Json cert_to_json(const CTrivCert& c, bool verified) {
  Json out = common(c.family, c.control, c.A, c.pole_set, c.mode, verified);
  out["mode"] = "C";
  return out;
}

Json cert_to_json(const KTrivCert& c, bool verified) {
  Json out = common(c.family, c.control, c.A, c.pole_set, c.mode, verified);
  out["mode"] = "K";
  Json X = Json::array();
  for (const auto& x : c.X) X.push_back(poly_to_json(x, c.family.vars));
  out["X"] = X;
  out["x_vanishing_order"] = c.x_vanishing_order;
  out["x_zero_at_param_zero"] = c.x_zero_at_param_zero ? Json(*c.x_zero_at_param_zero) : Json(nullptr);
  return out;
}

AnyCert cert_from_json(const Json& j) {
  try {
    const Germ f = germ_from_json(j.at("family"));
    const std::string mode = j.at("mode").get<std::string>();
    auto fill = [&](auto& c) {
      c.family = f;
      c.control = control_from_json(j.at("control"), f);
      c.A = matrix_from_json(j.at("matrix"), f);
      c.pole_set = rats_from_json(j.at("pole_set"));
      c.mode = param_mode_from_string(j.value("param_mode", std::string("rational")));
    };
    if (mode == "C") {
      CTrivCert c;
      fill(c);
      return c;
    }
    if (mode == "K") {
      KTrivCert c;
      fill(c);
      for (const auto& x : j.at("X")) c.X.push_back(poly_from_json(x, f.vars, f.weights));
      c.x_vanishing_order = j.value("x_vanishing_order", -1);
      if (j.contains("x_zero_at_param_zero") && !j["x_zero_at_param_zero"].is_null())
        c.x_zero_at_param_zero = j["x_zero_at_param_zero"].get<bool>();
      return c;
    }
    throw Error(ErrorKind::InvalidInput, "certificate mode must be C or K");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed certificate: ") + e.what());
  }
}

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::PaperExpected: return "paper_expected";
    case Tag::Derived: return "derived";
    case Tag::Exploratory: return "exploratory";
  }
  return "derived";
}

Tag parse_tag(std::string_view s) {
  if (s == "paper_expected") return Tag::PaperExpected;
  if (s == "derived") return Tag::Derived;
  if (s == "exploratory") return Tag::Exploratory;
  throw Error(ErrorKind::InvalidInput, "unknown provenance tag '" + std::string(s) + "'");
}

std::string emit_report(const RunReport& r, Format f) {
  if (f == Format::Json) {
    Json claims = Json::array();
    for (const auto& c : r.claims)
      claims.push_back({{"name", c.name}, {"value", c.value}, {"provenance", std::string(to_string(c.tag))}});
    Json j{{"subcommand", r.subcommand}, {"inputs", r.inputs},   {"headline", r.headline},
           {"claims", claims},           {"results", r.results}, {"body", r.body}};
    if (r.timings) j["timings"] = *r.timings;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  if (!r.body.empty()) {
    os << r.body;
    if (r.body.back() != '\n') os << '\n';
  }
  os << r.headline << '\n';
  for (const auto& c : r.claims) os << "  " << c.name << ": " << c.value << " [" << to_string(c.tag) << "]\n";
  if (r.timings)
    for (const auto& [k, v] : r.timings->items()) os << "  time " << k << ": " << v.dump() << " s\n";
  return os.str();
}

RunReport report_from_json(const Json& j) {
  RunReport r;
  r.subcommand = j.at("subcommand").get<std::string>();
  r.inputs = j.at("inputs");
  r.headline = j.at("headline").get<std::string>();
  for (const auto& c : j.at("claims"))
    r.claims.push_back({c.at("name").get<std::string>(), c.at("value").get<std::string>(),
                        parse_tag(c.at("provenance").get<std::string>())});
  r.results = j.at("results");
  r.body = j.value("body", std::string());
  if (j.contains("timings")) r.timings = j["timings"];
  return r;
}

}  // namespace germforge
