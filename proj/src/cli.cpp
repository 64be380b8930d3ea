#include "germforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "germforge/dims.hpp"
#include "germforge/flowcheck.hpp"
#include "germforge/io.hpp"
#include "germforge/parse.hpp"

namespace germforge {

namespace {

// Raised for domain outcomes; the report is still printed.
struct DomainOutcome {};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string rat_list(const std::vector<Rat>& v) {
  std::vector<std::string> s;
  for (const auto& r : v) s.push_back(to_string(r));
  return "{" + join(s) + "}";
}

std::pair<int, int> parse_pair(const std::string& s) {
  int n = 0, p = 0;
  char comma = 0;
  std::istringstream is(s);
  if (!(is >> n >> comma >> p) || comma != ',' || !is.eof())
    throw Error(ErrorKind::InvalidInput, "expected a pair like 9,9 but got '" + s + "'");
  return {n, p};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CodimVariant parse_variant(const std::string& s) {
  if (s == "classical") return CodimVariant::Classical;
  if (s == "extended") return CodimVariant::Extended;
  if (s == "literal") return CodimVariant::Literal;
  throw Error(ErrorKind::InvalidInput, "unknown variant '" + s + "'");
}

ParamMode parse_param_mode(const std::string& s) {
  if (s == "rational") return ParamMode::rational();
  for (const std::string head : {"poly:", "polynomial:"})
    if (s.rfind(head, 0) == 0) return ParamMode::poly(std::stoi(s.substr(head.size())));
  throw Error(ErrorKind::InvalidInput, "parameter mode must be rational or poly:D, got '" + s + "'");
}

Tag tag_of(Provenance p) {
  switch (p) {
    case Provenance::PaperExplicit: return Tag::PaperExpected;
    case Provenance::ComputedUnfolding: return Tag::Derived;
    case Provenance::Extrapolated: return Tag::Exploratory;
  }
  return Tag::Derived;
}

bool exploratory_pair(int n, int p) { return (n == 9 && p == 8) || (p == 7 && n >= 10); }

struct GermInput {
  std::string germ, germ_file, pair, lambda;
  bool unfolded = false, force = false;

  void attach(CLI::App* sub, bool with_lambda = true) {
    sub->add_option("--germ", germ, "germ expression, e.g. \"(x^2 + L*y*z, y^2 + L*z*x, z^2 + L*x*y)\"");
    sub->add_option("--germ-file", germ_file, "file holding a germ expression");
    sub->add_option("--pair", pair, "catalog pair n,p");
    sub->add_flag("--unfolded", unfolded, "use the unfolded catalog germ instead of its core");
    sub->add_flag("--force", force, "allow extrapolated catalog rows");
    if (with_lambda) sub->add_option("--lambda", lambda, "value of the modulus L");
  }
};

struct Resolved {
  Germ f;
  std::optional<StratumRecord> rec;
  std::optional<Rat> lambda;
  Json inputs = Json::object();
  Tag tag = Tag::Derived;
};

Resolved resolve(const GermInput& in) {
  Resolved r;
  const int given = !in.germ.empty() + !in.germ_file.empty() + !in.pair.empty();
  if (given != 1) throw Error(ErrorKind::InvalidInput, "give exactly one of --germ, --germ-file, --pair");
  if (!in.pair.empty()) {
    const auto [n, p] = parse_pair(in.pair);
    CatalogOptions opt;
    opt.force = in.force;
    opt.compute_unfolding = in.unfolded;
    r.rec = catalog(n, p, opt);
    r.f = in.unfolded ? r.rec->unfolded() : r.rec->core;
    r.inputs["pair"] = {n, p};
    r.inputs["unfolded"] = in.unfolded;
    r.tag = tag_of(r.rec->provenance);
  } else {
    const std::string text = in.germ.empty() ? read_file(in.germ_file) : in.germ;
    r.f = parse_germ_source(text);
    r.inputs["germ"] = print_germ_source(r.f);
  }
  if (!in.lambda.empty()) {
    r.lambda = parse_rat(in.lambda);
    r.inputs["lambda"] = to_string(*r.lambda);
  }
  return r;
}

struct Context {
  RunReport report;
  bool json = false;
};

void cmd_sigma(Context& ctx, int n, int p) {
  auto& R = ctx.report;
  R.inputs = {{"n", n}, {"p", p}};
  const SigmaValue s = sigma(n, p);
  const DimClass c = classify(n, p);
  const std::string v = s.infinite() ? "infinity" : std::to_string(*s.value);
  R.headline = v + " (" + std::string(to_string(c)) + ")";
  R.claims.push_back({"sigma", v, c == DimClass::Boundary ? Tag::PaperExpected : Tag::Derived});
  R.results = {{"sigma", s.infinite() ? Json("infinity") : Json(*s.value)}, {"class", std::string(to_string(c))}};
}

void cmd_classify(Context& ctx, int n, int p) {
  auto& R = ctx.report;
  R.inputs = {{"n", n}, {"p", p}};
  const DimClass c = classify(n, p);
  R.headline = std::string(to_string(c));
  R.claims.push_back({"class", R.headline, c == DimClass::Boundary ? Tag::PaperExpected : Tag::Derived});
  R.results = {{"class", R.headline}};
}

void cmd_boundary(Context& ctx, int n_max) {
  auto& R = ctx.report;
  R.inputs = {{"max", n_max}};
  const auto pairs = boundary_pairs(n_max);
  Json list = Json::array();
  for (const auto& [n, p] : pairs) {
    list.push_back({n, p});
    R.body += "(" + std::to_string(n) + "," + std::to_string(p) + ")\n";
  }
  R.headline = std::to_string(pairs.size()) + " boundary pairs with n <= " + std::to_string(n_max);
  R.claims.push_back({"count", std::to_string(pairs.size()), Tag::Derived});
  R.results = {{"pairs", list}};
}

Json record_to_json(const StratumRecord& rec) {
  Json terms = Json::array();
  for (const auto& t : rec.unfolding_terms)
    terms.push_back({{"parameter", t.parameter + 1}, {"component", t.component + 1}, {"term", t.term.to_string(rec.core.vars)}});
  Json out{{"n", rec.n},
           {"p", rec.p},
           {"family", rec.family},
           {"core", germ_to_json(rec.core)},
           {"unfolding_parameters", rec.unfolding_parameters},
           {"unfolding_terms", terms},
           {"expected_k_codim", rec.expected_k_codim},
           {"provenance", std::string(to_string(rec.provenance))}};
  out["exceptional_rational"] = rec.exceptional_rational ? Json(rat_list(*rec.exceptional_rational)) : Json(nullptr);
  return out;
}

void cmd_catalog(Context& ctx, const std::string& pair, bool force) {
  auto& R = ctx.report;
  const auto [n, p] = parse_pair(pair);
  R.inputs = {{"pair", {n, p}}, {"force", force}};
  CatalogOptions opt;
  opt.force = force;
  const StratumRecord rec = catalog(n, p, opt);
  const Tag tag = tag_of(rec.provenance);
  R.headline = "(" + std::to_string(n) + "," + std::to_string(p) + "): " + rec.family;
  R.body = "core:\n" + print_germ_source(rec.core);
  if (!rec.unfolding_terms.empty()) {
    R.body += "unfolding:\n";
    for (const auto& t : rec.unfolding_terms)
      R.body += "  u" + std::to_string(t.parameter + 1) + "*(" + t.term.to_string(rec.core.vars) + ") in component " +
                std::to_string(t.component + 1) + "\n";
  }
  R.claims.push_back({"expected_k_codim", std::to_string(rec.expected_k_codim), tag});
  R.claims.push_back({"unfolding_parameters", std::to_string(rec.unfolding_parameters), tag});
  if (rec.exceptional_rational) R.claims.push_back({"exceptional_rational", rat_list(*rec.exceptional_rational), tag});
  R.claims.push_back({"provenance", std::string(to_string(rec.provenance)), tag});
  Json j = record_to_json(rec);
  j["unfolded"] = germ_to_json(rec.unfolded());
  R.results = j;
}

void cmd_kcodim(Context& ctx, const GermInput& in, const std::string& variant, int cutoff) {
  auto& R = ctx.report;
  Resolved r = resolve(in);
  CodimOptions opt;
  opt.variant = parse_variant(variant);
  opt.cutoff = cutoff;
  r.inputs["variant"] = variant;
  r.inputs["cutoff"] = cutoff;
  R.inputs = r.inputs;
  const bool symbolic = r.f.parameterized() && !r.lambda;
  const CodimReport rep = symbolic ? k_codim(r.f, opt) : k_codim(specialize(r.f, r.lambda.value_or(Rat(0))), opt);
  const std::string v = rep.value ? std::to_string(*rep.value) : "infinite up to degree " + std::to_string(cutoff);
  R.headline = v + ", variant=" + variant;
  Json per = Json::object();
  for (const auto& [d, c] : rep.per_degree) per[std::to_string(d)] = c;
  R.results = {{"k_codim", rep.value ? Json(*rep.value) : Json(nullptr)}, {"per_degree", per}, {"stabilized_at", rep.stabilized_at}};
  R.claims.push_back({"k_codim", v, r.tag});
  if (rep.exceptional) {
    const auto& ex = *rep.exceptional;
    R.claims.push_back({"rank_drop_polynomial", ex.drop_polynomial.to_string(), Tag::Derived});
    R.claims.push_back({"rational_drop_values", rat_list(ex.rational_drop_values), Tag::Derived});
    R.results["rank_drop_polynomial"] = ex.drop_polynomial.to_string();
    R.results["rational_drop_values"] = rat_list(ex.rational_drop_values);
    R.results["residual_factor"] = ex.residual_factor.to_string();
  }
  if (!rep.value) throw DomainOutcome{};
}

template <class K>
void fill_qdim(RunReport& R, const MapGerm<K>& f, int cutoff, Tag tag) {
  const LocalAlgebra q = local_algebra(f, cutoff);
  std::vector<std::string> basis;
  for (const auto& m : q.basis) basis.push_back(Poly<K>::term(f.weights, m, K(1)).to_string(f.vars));
  R.headline = q.dim ? std::to_string(*q.dim) : "infinite up to degree " + std::to_string(cutoff);
  R.claims.push_back({"dim_Q", R.headline, tag});
  if (q.dim) R.claims.push_back({"basis", "{" + join(basis) + "}", Tag::Derived});
  R.results = {{"dim", q.dim ? Json(*q.dim) : Json(nullptr)}, {"basis", basis}, {"certified_at", q.certified_at}};
  if (!q.dim) throw DomainOutcome{};
}

void cmd_qdim(Context& ctx, const GermInput& in, int cutoff) {
  Resolved r = resolve(in);
  r.inputs["cutoff"] = cutoff;
  ctx.report.inputs = r.inputs;
  if (r.f.parameterized() && !r.lambda) fill_qdim(ctx.report, r.f, cutoff, Tag::Derived);
  else fill_qdim(ctx.report, specialize(r.f, r.lambda.value_or(Rat(0))), cutoff, Tag::Derived);
}

template <class K>
void fill_socle(RunReport& R, const MapGerm<K>& f, int cutoff) {
  const SocleCertificate<K> s = serre_berger(f, cutoff);
  const bool ok = verify_socle(f, s);
  R.headline = std::string("socle certificate verified: ") + (ok ? "true" : "false");
  R.claims.push_back({"jacobian", s.jacobian.to_string(f.vars), Tag::Derived});
  R.claims.push_back({"pole_set", rat_list(s.pole_set), Tag::Derived});
  Json coeffs = Json::array();
  for (const auto& c : s.coefficients) coeffs.push_back(c.to_string(f.vars));
  R.results = {{"jacobian", s.jacobian.to_string(f.vars)}, {"coefficients", coeffs}, {"pole_set", rat_list(s.pole_set)}, {"verified", ok}};
  if (!ok) throw DomainOutcome{};
}

void cmd_socle(Context& ctx, const GermInput& in, int cutoff) {
  Resolved r = resolve(in);
  r.inputs["cutoff"] = cutoff;
  ctx.report.inputs = r.inputs;
  if (r.f.parameterized() && !r.lambda) fill_socle(ctx.report, r.f, cutoff);
  else fill_socle(ctx.report, specialize(r.f, r.lambda.value_or(Rat(0))), cutoff);
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  o << text;
}

std::string matrix_degree(const PolyMatrix<ParamScalar>& A) {
  std::optional<int> deg;
  for (const auto& row : A)
    for (const auto& e : row)
      if (!e.is_zero()) deg = std::max(deg.value_or(0), e.max_degree());
  return deg ? std::to_string(*deg) : "none (zero matrix)";
}

template <class Cert>
void report_cert(RunReport& R, const Cert& c, Tag tag, const std::string& out_path) {
  const auto v = verify_certificate(c);
  const Json j = cert_to_json(c, v.valid);
  R.body = j.dump(2) + "\n";
  if (!out_path.empty()) write_out(out_path, R.body);
  R.headline = std::string("verified: ") + (v.valid ? "true" : "false");
  R.claims.push_back({"pole_set", rat_list(c.pole_set), tag});
  R.claims.push_back({"matrix_degree", matrix_degree(c.A), tag});
  R.claims.push_back({"control_degree", std::to_string(c.control.degree()), Tag::Derived});
  R.claims.push_back({"escalation", std::to_string(c.control.escalation), tag});
  R.results["certificate"] = j;
  if (!v.valid) throw DomainOutcome{};
}

template <class Cert>
void report_outcome(RunReport& R, const SolveOutcome<Cert>& o, Tag tag) {
  Json attempts = Json::array();
  for (const auto& a : o.attempts) {
    attempts.push_back({{"escalation", a.escalation}, {"control_degree", a.control_degree}, {"success", a.success}, {"note", a.note}});
    R.claims.push_back({"attempt " + std::to_string(a.escalation),
                        std::string(a.success ? "success" : "NoSolution") + " (control degree " + std::to_string(a.control_degree) + ")",
                        tag});
  }
  R.results["attempts"] = attempts;
}

ControlFunction control_for(const Germ& f, const std::string& control, const std::string& square) {
  const ControlMode m = parse_control_mode(control);
  if (m != ControlMode::Custom) {
    if (!square.empty()) throw Error(ErrorKind::InvalidInput, "--square needs --control custom");
    return make_control(f, m);
  }
  if (square.empty()) throw Error(ErrorKind::InvalidInput, "--control custom needs --square");
  return custom_control(parse_poly(square, f.vars, f.weights));
}

void cmd_triv(Context& ctx, const std::string& mode, const GermInput& in, const std::string& control,
              const std::string& square, const std::string& param_mode, int escalations, bool block, const std::string& out_path) {
  auto& R = ctx.report;
  if (mode != "C" && mode != "K") throw Error(ErrorKind::InvalidInput, "mode must be C or K");
  Resolved r = resolve(in);
  r.inputs["mode"] = mode;
  r.inputs["control"] = control;
  if (!square.empty()) r.inputs["square"] = square;
  r.inputs["param_mode"] = param_mode;
  r.inputs["block"] = block;
  R.inputs = r.inputs;
  SolveOptions opt;
  opt.mode = parse_param_mode(param_mode);
  opt.max_escalations = escalations;
  Tag tag = Tag::Derived;
  if (r.rec) tag = exploratory_pair(r.rec->n, r.rec->p) ? Tag::Exploratory : tag_of(r.rec->provenance);

  if (block) {
    if (mode != "C") throw Error(ErrorKind::InvalidInput, "--block builds a C-certificate");
    if (!r.rec || r.rec->n != 15 || r.rec->p != 16 || in.unfolded)
      throw Error(ErrorKind::InvalidInput, "--block applies to --pair 15,16");
    const Germ base_f = core_f_lambda();
    const auto base = solve_c_certificate(base_f, control_for(base_f, control, square), opt);
    report_outcome(R, base, tag);
    if (!base.cert) {
      R.headline = "no certificate for the (9,9) base family";
      throw DomainOutcome{};
    }
    const Germ& f = r.rec->core;
    const CTrivCert c = assemble_block_certificate(*base.cert, serre_berger(base_f), f.comps.back());
    report_cert(R, c, tag, out_path);
    return;
  }
  const ControlFunction ctl = control_for(r.f, control, square);
  if (mode == "C") {
    const auto o = solve_c_certificate(r.f, ctl, opt);
    report_outcome(R, o, tag);
    if (!o.cert) {
      R.headline = "NoSolution: no C-certificate within " + std::to_string(escalations) + " escalations";
      throw DomainOutcome{};
    }
    report_cert(R, *o.cert, tag, out_path);
  } else {
    const auto o = solve_k_certificate(r.f, ctl, opt);
    report_outcome(R, o, tag);
    if (!o.cert) {
      R.headline = "NoSolution: no K-certificate within " + std::to_string(escalations) + " escalations";
      throw DomainOutcome{};
    }
    std::optional<int> xdeg;
    for (const auto& x : o.cert->X)
      if (!x.is_zero()) xdeg = std::max(xdeg.value_or(0), x.max_degree());
    R.claims.push_back({"x_degree", xdeg ? std::to_string(*xdeg) : "none (X = 0)", tag});
    R.claims.push_back({"x_vanishing_order", std::to_string(o.cert->x_vanishing_order), tag});
    report_cert(R, *o.cert, tag, out_path);
  }
}

void cmd_verify(Context& ctx, const std::string& path) {
  auto& R = ctx.report;
  R.inputs = {{"cert", path}};
  const Json j = Json::parse(read_file(path));
  const AnyCert c = cert_from_json(j);
  const bool stored = j.value("verification", false);
  const auto v = std::visit([](const auto& cert) { return verify_certificate(cert); }, c);
  R.headline = std::string("verified: ") + (v.valid ? "true" : "false");
  R.claims.push_back({"poles_ok", v.poles_ok ? "true" : "false", Tag::Derived});
  R.claims.push_back({"stored_flag_matches", stored == v.valid ? "true" : "false", Tag::Derived});
  R.results = {{"verified", v.valid}, {"poles_ok", v.poles_ok}, {"stored", stored}};
  if (!v.valid) throw DomainOutcome{};
}

void cmd_flowcheck(Context& ctx, const std::string& path, double from, double to, double step, std::size_t samples,
                   std::uint64_t seed, double tolerance, bool convergence) {
  auto& R = ctx.report;
  R.inputs = {{"cert", path}, {"from", from}, {"to", to}, {"step", step}, {"samples", samples}, {"seed", seed}, {"tolerance", tolerance}};
  const AnyCert c = cert_from_json(Json::parse(read_file(path)));
  std::visit(
      [&](const auto& cert) {
        const Germ& f = cert.family;
        const auto pts = sphere_points(f.n(), samples, seed);
        int d = 0;
        for (int e : component_degrees(f)) d = d ? std::min(d, e) : e;
        FlowOptions opt;
        opt.tolerance = tolerance;
        const double C = cone_constant(f, from, to, 2000, d);
        opt.bump = ConeBump::make(2 * C, 4 * C);
        const FlowReport rep = integrate_and_check(cert, from, to, pts, step, opt);
        R.headline = "max_rel_error: " + fmt(rep.max_rel_error) + " (tolerance " + fmt(tolerance) + ")";
        R.claims.push_back({"max_rel_error", fmt(rep.max_rel_error), Tag::Derived});
        R.claims.push_back({"max_defect", fmt(rep.max_defect), Tag::Derived});
        R.claims.push_back({"left_cone", std::to_string(rep.left_cone), Tag::Derived});
        R.results = {{"max_rel_error", rep.max_rel_error}, {"max_defect", rep.max_defect}, {"left_cone", rep.left_cone}, {"step", rep.step}};
        if (rep.distortion) {
          R.claims.push_back({"distortion", "[" + fmt(rep.distortion->first) + ", " + fmt(rep.distortion->second) + "]", Tag::Derived});
          R.results["distortion"] = {rep.distortion->first, rep.distortion->second};
        }
        if (convergence) {
          const Convergence cv = convergence_ratio(cert, from, to, pts, step);
          R.claims.push_back({"halving_ratio", fmt(cv.ratio), Tag::Derived});
          R.claims.push_back({"observed_order", fmt(cv.order), Tag::Derived});
          R.results["convergence"] = {{"coarse_error", cv.coarse_error}, {"fine_error", cv.fine_error}, {"ratio", cv.ratio}, {"order", cv.order}};
        }
      },
      c);
}

bool is_domain(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotBoundary:
    case ErrorKind::NotFinite:
    case ErrorKind::DegenerateControl:
    case ErrorKind::StepRejected:
    case ErrorKind::PoleOnRequest:
    case ErrorKind::RegionAtPole:
    case ErrorKind::BlockMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"germforge: contact invariants and trivialization certificates for polynomial map germs", "germforge"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  bool timings = false;
  app.add_flag("--json", ctx.json, "emit the report as JSON");
  app.add_flag("--timings", timings, "include wall-clock timings");

  std::function<void()> action;
  int n = 0, p = 0;

  auto* s_sigma = app.add_subcommand("sigma", "sigma(n, p) and the dimension class");
  s_sigma->add_option("n", n)->required();
  s_sigma->add_option("p", p)->required();
  s_sigma->callback([&] { action = [&] { cmd_sigma(ctx, n, p); }; });

  auto* s_class = app.add_subcommand("classify", "nice, boundary or beyond");
  s_class->add_option("n", n)->required();
  s_class->add_option("p", p)->required();
  s_class->callback([&] { action = [&] { cmd_classify(ctx, n, p); }; });

  int n_max = 50;
  auto* s_bound = app.add_subcommand("boundary", "all boundary pairs up to a source dimension");
  s_bound->add_option("--max", n_max, "largest n")->capture_default_str();
  s_bound->callback([&] { action = [&] { cmd_boundary(ctx, n_max); }; });

  std::string pair;
  bool force = false;
  auto* s_cat = app.add_subcommand("catalog", "normal form and unfolding of a boundary stratum");
  s_cat->add_option("--pair", pair, "pair n,p")->required();
  s_cat->add_flag("--force", force, "allow extrapolated rows");
  s_cat->callback([&] { action = [&] { cmd_catalog(ctx, pair, force); }; });

  GermInput gin;
  std::string variant = "classical";
  int cutoff = 16;
  auto* s_k = app.add_subcommand("kcodim", "K-codimension");
  gin.attach(s_k);
  s_k->add_option("--variant", variant, "classical, extended or literal")->capture_default_str();
  s_k->add_option("--cutoff", cutoff, "degree cutoff")->capture_default_str();
  s_k->callback([&] { action = [&] { cmd_kcodim(ctx, gin, variant, cutoff); }; });

  auto* s_q = app.add_subcommand("qdim", "dimension and monomial basis of the local algebra");
  gin.attach(s_q);
  s_q->add_option("--cutoff", cutoff, "degree cutoff")->capture_default_str();
  s_q->callback([&] { action = [&] { cmd_qdim(ctx, gin, cutoff); }; });

  auto* s_s = app.add_subcommand("socle", "Jacobian socle certificate sum c_i f_i + J^2 = 0");
  gin.attach(s_s);
  s_s->add_option("--cutoff", cutoff, "degree cutoff")->capture_default_str();
  s_s->callback([&] { action = [&] { cmd_socle(ctx, gin, cutoff); }; });

  std::string mode, control = "squares", param_mode = "rational", out_path, square;
  int escalations = 2;
  bool block = false;
  auto* s_t = app.add_subcommand("triv", "solve for a C- or K-triviality certificate");
  s_t->add_option("mode", mode, "C or K")->required();
  gin.attach(s_t, false);
  s_t->add_option("--control", control, "squares, minors or custom")->capture_default_str();
  s_t->add_option("--square", square, "control polynomial for --control custom");
  s_t->add_option("--param-mode", param_mode, "rational or poly:D")->capture_default_str();
  s_t->add_option("--escalations", escalations, "extra sum-of-squares factors to try")->capture_default_str();
  s_t->add_flag("--block", block, "assemble the (15,16) certificate from the (9,9) one");
  s_t->add_option("--out", out_path, "write the certificate JSON here");
  s_t->callback([&] { action = [&] { cmd_triv(ctx, mode, gin, control, square, param_mode, escalations, block, out_path); }; });

  std::string cert_path;
  auto* s_v = app.add_subcommand("verify", "re-check a certificate file by independent expansion");
  s_v->add_option("--cert", cert_path, "certificate JSON")->required();
  s_v->callback([&] { action = [&] { cmd_verify(ctx, cert_path); }; });

  double from = 2, to = 3, step = 1e-3, tolerance = 1e-6;
  std::size_t samples = 100;
  std::uint64_t seed = 11;
  bool convergence = false;
  auto* s_f = app.add_subcommand("flowcheck", "integrate the certificate field and compare with the family");
  s_f->add_option("--cert", cert_path, "certificate JSON")->required();
  s_f->add_option("--from", from)->capture_default_str();
  s_f->add_option("--to", to)->capture_default_str();
  s_f->add_option("--step", step)->capture_default_str();
  s_f->add_option("--samples", samples)->capture_default_str();
  s_f->add_option("--seed", seed)->capture_default_str();
  s_f->add_option("--tolerance", tolerance)->capture_default_str();
  s_f->add_flag("--convergence", convergence, "also report the error ratio for step and step/2");
  s_f->callback([&] { action = [&] { cmd_flowcheck(ctx, cert_path, from, to, step, samples, seed, tolerance, convergence); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  RunReport& R = ctx.report;
  R.subcommand = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    action();
  } catch (const DomainOutcome&) {
    code = 2;
  } catch (const Error& e) {
    err << "germforge " << join(args, " ") << ": " << e.what() << "\n";
    if (!is_domain(e.kind())) return 1;
    R.headline = e.what();
    code = 2;
  } catch (const std::exception& e) {
    err << "germforge " << join(args, " ") << ": " << e.what() << "\n";
    return 1;
  }
  if (timings)
    R.timings = Json{{"total", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  out << emit_report(R, ctx.json ? Format::Json : Format::Text);
  return code;
}

}  // namespace germforge
