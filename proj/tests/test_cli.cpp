#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "fixtures.hpp"
#include "germforge/cli.hpp"
#include "germforge/dims.hpp"
#include "germforge/io.hpp"
#include "germforge/parse.hpp"

using namespace germforge;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_germ_source(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("parsed: " << text);
  return ErrorKind::InvalidInput;
}

std::string temp_path(const std::string& name) { return "/tmp/germforge_test_" + name; }

// Random weighted-homogeneous polynomial with rational or parametric coefficients.
ParamPoly random_poly(std::mt19937_64& rng, const Weights& w, int d) {
  ParamPoly p(w);
  std::uniform_int_distribution<int> coef(-9, 9), den(1, 4), pick(0, 3);
  const std::size_t n = w.size();
  for (int t = 0; t < 4; ++t) {
    Monomial m(n);
    int left = d;
    for (std::size_t i = 0; i + 1 < n && left > 0; ++i) {
      const int e = std::uniform_int_distribution<int>(0, left / w.w[i])(rng);
      m.e[i] = e;
      left -= e * w.w[i];
    }
    if (left % w.w[n - 1] != 0) continue;
    m.e[n - 1] = left / w.w[n - 1];
    Rat r(coef(rng), den(rng));
    r.canonicalize();
    ParamScalar c(r);
    if (pick(rng) == 0) c = c * ParamScalar::param() + ParamScalar(Rat(1, den(rng)));
    if (pick(rng) == 1) c = c / (ParamScalar::param() + ParamScalar(coef(rng)));
    p.add_term(m, c);
  }
  return p;
}

}  // namespace

TEST_CASE("germ expressions parse to the expected germs") {
  const Germ f = parse_germ_source("(x^2 + L*y*z, y^2 + L*z*x, z^2 + L*x*y)");
  CHECK(f == fixtures::f_lambda());
  CHECK(f.n() == 3);
  CHECK(f.p() == 3);
  CHECK(f.parameterized());
  CHECK(read_germ_source("(x^2 + L*y*z, y^2 + L*z*x, z^2 + L*x*y)").uses_parameter);

  const Germ g = parse_germ_source("x^4 + y^4 + L*x^2*y^2");
  CHECK(g == fixtures::x9());
  CHECK(g.n() == 2);
  CHECK(g.p() == 1);

  CHECK(kind_of("(x^2 + 1, y)") == ErrorKind::ConstantTermNonzero);
}

TEST_CASE("headers fix variable order and weights") {
  const Germ a = parse_germ_source("vars z, y, x\n(x^2, y*z)");
  CHECK(a.vars == std::vector<std::string>{"z", "y", "x"});
  const Germ b = parse_germ_source("(y*z, x^2)");
  CHECK(b.vars == std::vector<std::string>{"y", "z", "x"});

  const Germ c = parse_germ_source("vars x, y; weights 2, 3\n(x^3 + y^2)");
  CHECK(c.weights.w == std::vector<int>{2, 3});
  const Germ d = parse_germ_source("(x^3 + y^2)");
  CHECK(d.weights.w == std::vector<int>{2, 3});
  const Germ e = parse_germ_source("(x^3 + y^2 + x^2)");
  CHECK(e.weights.w == std::vector<int>{1, 1});

  const Germ w = parse_germ_source("vars w0, w1, x2\n(w0^2 + w1*x2, x2^3)");
  CHECK(w.n() == 3);
}

TEST_CASE("parser errors carry kind and position") {
  CHECK(kind_of("(x^2 + M*y)") == ErrorKind::UnknownSymbol);
  CHECK(kind_of("vars x, y\n(x + q)") == ErrorKind::UnknownSymbol);
  CHECK(kind_of("(x^2 + l)") == ErrorKind::UnknownSymbol);
  CHECK(kind_of("(2x, y)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x y, y)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x*(y)(z), y)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x/y, y)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x/0, y)") == ErrorKind::DivisionByZero);
  CHECK(kind_of("x, y") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x, )") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x^2 + , y)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x^-1)") == ErrorKind::SyntaxError);
  CHECK(kind_of("") == ErrorKind::SyntaxError);
  CHECK(kind_of("vars x\nweights 1, 2\n(x^2)") == ErrorKind::SyntaxError);
  CHECK(kind_of("(x^2 $ y)") == ErrorKind::SyntaxError);

  try {
    parse_germ_source("vars x, y\n\n(x^2,\n   y^2 +)");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    parse_germ_source("(x + 3z)");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 1, column 7") != std::string::npos);
  }
}

TEST_CASE("printer forms are accepted") {
  const std::vector<std::string> v{"x", "y", "z"};
  const Weights w = Weights::uniform(3);
  fixtures::Vars V(3);
  const ParamPoly a = parse_poly("((L^2-1)/(L+8))*x - 3/2*y - 5", v, w);
  const ParamScalar c = (ParamScalar::param() * ParamScalar::param() - ParamScalar(1)) / (ParamScalar::param() + ParamScalar(8));
  CHECK(a == V[0].scale(c) - V[1].scale(ParamScalar(Rat(3, 2))) - V.c(5));
  CHECK(parse_poly("-y^2 - L*x", v, w) == -(V[1] * V[1]) - V.L() * V[0]);
  CHECK(parse_poly("(-2*L+1)", v, w) == V.L().scale(ParamScalar(-2)) + V.c(1));
  CHECK(parse_poly("0", v, w).is_zero());
  CHECK(parse_scalar("(L^2-1)/(L+8)") == c);
  CHECK(parse_rat("-8") == Rat(-8));
  CHECK(parse_rat("3/2") == Rat(3, 2));
  CHECK_THROWS_AS(parse_rat("L"), Error);
  const ParamPoly b = parse_poly("x^3*z + (-1/L^2)*y*z^3 + L*x*y*z^2", v, w);
  CHECK(parse_poly(b.to_string(v), v, w) == b);
}

TEST_CASE("catalog germs round-trip through text") {
  std::size_t checked = 0;
  for (const auto& [n, p] : boundary_pairs(40)) {
    CatalogOptions opt;
    opt.force = true;
    const StratumRecord rec = catalog(n, p, opt);
    for (const Germ& f : {rec.core, rec.unfolded()}) {
      const std::string text = print_germ_source(f);
      const Germ g = parse_germ_source(text);
      CHECK(g == f);
      CHECK(print_germ_source(g) == text);
      ++checked;
    }
  }
  CHECK(checked >= 30);
}

TEST_CASE("random germs round-trip through text") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<int> ws(n);
    for (auto& x : ws) x = 1 + static_cast<int>(rng() % 3);
    const Weights w(ws);
    std::vector<ParamPoly> comps;
    for (int i = 0; i < 1 + trial % 3; ++i) comps.push_back(random_poly(rng, w, 6 + i));
    const Germ f(default_var_names(n), w, comps);
    const Germ g = parse_germ_source(print_germ_source(f));
    CHECK_MESSAGE(g == f, print_germ_source(f) << print_germ_source(g));
  }
}

TEST_CASE("certificates survive JSON") {
  const Germ f = fixtures::f_lambda();
  const auto c = solve_c_certificate(f, component_squares(f));
  REQUIRE(c.cert);
  const Json j = cert_to_json(*c.cert, true);
  const AnyCert back = cert_from_json(Json::parse(j.dump()));
  REQUIRE(std::holds_alternative<CTrivCert>(back));
  const auto& cc = std::get<CTrivCert>(back);
  CHECK(cc.family == c.cert->family);
  CHECK(cc.A == c.cert->A);
  CHECK(cc.control.square == c.cert->control.square);
  CHECK(cc.pole_set == c.cert->pole_set);
  CHECK(verify_certificate(cc).valid);
  CHECK(cert_to_json(cc, true).dump() == j.dump());

  const Germ g = fixtures::core_8_6();
  const auto k = solve_k_certificate(g, component_squares(g));
  REQUIRE(k.cert);
  const AnyCert kb = cert_from_json(cert_to_json(*k.cert, true));
  REQUIRE(std::holds_alternative<KTrivCert>(kb));
  const auto& kc = std::get<KTrivCert>(kb);
  CHECK(kc.X == k.cert->X);
  CHECK(kc.x_vanishing_order == 5);
  CHECK(verify_certificate(kc).valid);

  Json broken = j;
  broken.erase("matrix");
  CHECK_THROWS_AS(cert_from_json(broken), Error);
}

TEST_CASE("reports are deterministic and re-parse") {
  RunReport r;
  r.subcommand = "kcodim";
  r.inputs = {{"pair", {9, 9}}, {"lambda", "3"}};
  r.headline = "10, variant=classical";
  r.claims = {{"k_codim", "10", Tag::PaperExpected}, {"rational_drop_values", "{-1, 0, 2}", Tag::Derived}};
  r.results = {{"k_codim", 10}, {"b", 1}, {"a", 2}};
  CHECK(emit_report(r, Format::Json) == emit_report(r, Format::Json));
  CHECK(emit_report(r, Format::Text) == emit_report(r, Format::Text));
  CHECK(report_from_json(Json::parse(emit_report(r, Format::Json))) == r);
  const std::string text = emit_report(r, Format::Text);
  CHECK(text.find("k_codim: 10 [paper_expected]") != std::string::npos);
  CHECK(text.find("[derived]") != std::string::npos);
  const std::string js = emit_report(r, Format::Json);
  CHECK(js.find("\"a\"") < js.find("\"b\""));
}

TEST_CASE("command line examples") {
  const Run s = run_cli({"sigma", "9", "9"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("9 (boundary)\n", 0) == 0);
  CHECK(run_cli({"sigma", "1", "4"}).out.rfind("infinity (nice)", 0) == 0);
  CHECK(run_cli({"classify", "8", "6"}).out.rfind("boundary", 0) == 0);

  const Run k = run_cli({"kcodim", "--pair", "9,9", "--lambda", "3"});
  CHECK(k.code == 0);
  CHECK(k.out.rfind("10, variant=classical\n", 0) == 0);
  const Run k0 = run_cli({"kcodim", "--pair", "9,9", "--lambda", "0"});
  CHECK(k0.out.rfind("12, variant=classical", 0) == 0);

  const Run q = run_cli({"qdim", "--pair", "9,9", "--lambda", "3"});
  CHECK(q.code == 0);
  CHECK(q.out.find("{1, z, y, x, y*z, x*z, x*y, x*y*z}") != std::string::npos);

  const Run b = run_cli({"boundary", "--max", "12"});
  CHECK(b.code == 0);
  CHECK(b.out.find("(9,9)") != std::string::npos);

  const Run cat = run_cli({"catalog", "--pair", "8,6", "--json"});
  CHECK(cat.code == 0);
  const Json cj = Json::parse(cat.out);
  CHECK(cj["results"]["expected_k_codim"] == 9);
  CHECK(germ_from_json(cj["results"]["core"]) == catalog(8, 6).core);
}

TEST_CASE("certificates through the command line") {
  const std::string path = temp_path("c99.json");
  const Run t = run_cli({"triv", "C", "--pair", "9,9", "--out", path});
  CHECK(t.code == 0);
  CHECK(t.out.find("verified: true") != std::string::npos);
  CHECK(t.out.find("\"pole_set\"") != std::string::npos);
  CHECK(t.out == run_cli({"triv", "C", "--pair", "9,9", "--out", path}).out);

  const Run v = run_cli({"verify", "--cert", path});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("verified: true", 0) == 0);

  const Run f = run_cli({"flowcheck", "--cert", path, "--samples", "20", "--step", "0.01"});
  CHECK(f.code == 0);
  CHECK(f.out.rfind("max_rel_error", 0) == 0);

  // Tamper with one matrix entry.
  std::ifstream in(path);
  Json j = Json::parse(in);
  in.close();
  auto& row = j["matrix"][0][0];
  REQUIRE(!row.empty());
  row[row.begin().key()] = "12345";
  const std::string bad = temp_path("c99_bad.json");
  std::ofstream(bad) << j.dump();
  const Run vb = run_cli({"verify", "--cert", bad});
  CHECK(vb.code == 2);
  CHECK(vb.out.rfind("verified: false", 0) == 0);

  const Run blk = run_cli({"triv", "C", "--pair", "15,16", "--block"});
  CHECK(blk.code == 0);
  CHECK(blk.out.find("pole_set: {-1, 0}") != std::string::npos);

  const Run kk = run_cli({"triv", "K", "--pair", "8,6"});
  CHECK(kk.code == 0);
  CHECK(kk.out.find("x_degree: 5") != std::string::npos);
  std::remove(path.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"catalog", "--pair", "9,10"}).code == 2);
  CHECK(run_cli({"kcodim", "--germ", "(x^2 + 1, y)"}).code == 1);
  CHECK(run_cli({"kcodim", "--germ", "(x^2 y)"}).code == 1);
  CHECK(run_cli({"kcodim", "--germ", "(x^2, x*y)"}).code == 2);
  const Run none = run_cli({"triv", "C", "--pair", "9,9", "--control", "custom", "--square", "1", "--escalations", "0"});
  CHECK(none.code == 2);
  CHECK(none.out.rfind("NoSolution", 0) == 0);
  CHECK(run_cli({"triv", "C", "--pair", "9,9", "--control", "custom"}).code == 1);
  CHECK(run_cli({"sigma"}).code == 1);
  CHECK(run_cli({"nonsense"}).code == 1);
  CHECK(run_cli({"verify", "--cert", "/nonexistent/file.json"}).code == 1);
  CHECK(run_cli({"kcodim"}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("json output is byte-deterministic") {
  const std::vector<std::string> args{"--json", "kcodim", "--pair", "9,9"};
  const Run a = run_cli(args), b = run_cli(args);
  CHECK(a.out == b.out);
  const RunReport r = report_from_json(Json::parse(a.out));
  CHECK(r.subcommand == "kcodim");
  CHECK(emit_report(r, Format::Json) == a.out);
  CHECK(!r.timings);
  const Run t = run_cli({"--timings", "--json", "sigma", "9", "9"});
  CHECK(report_from_json(Json::parse(t.out)).timings);
}
