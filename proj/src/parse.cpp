#include "germforge/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

namespace germforge {

namespace {

enum class Tok { Num, Ident, Param, Op, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

struct Source {
  std::string_view text;
  int line0 = 1, col0 = 1;  // position of text[0] in the original input

  std::pair<int, int> position(std::size_t off) const {
    int line = line0, col = col0;
    for (std::size_t i = 0; i < off && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }
  [[noreturn]] void fail(ErrorKind k, std::size_t off, const std::string& msg) const {
    const auto [line, col] = position(off);
    throw Error(k, msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
};

bool is_var_start(char c) { return c >= 'a' && c <= 'z' && c != 'l'; }

std::vector<Token> tokenize(const Source& src) {
  std::vector<Token> out;
  const std::string_view s = src.text;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Num, std::string(s.substr(start, i - start)), start});
    } else if (c == 'L') {
      ++i;
      out.push_back({Tok::Param, "L", start});
    } else if (is_var_start(c)) {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      ++i;
      out.push_back({Tok::Op, std::string(1, c), start});
      continue;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      src.fail(ErrorKind::UnknownSymbol, start, std::string("unknown symbol '") + c + "'");
    } else {
      src.fail(ErrorKind::SyntaxError, start, std::string("unexpected character '") + c + "'");
    }
    if (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '('))
      src.fail(ErrorKind::SyntaxError, i, "implicit multiplication is not allowed");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
public:
  Parser(const Source& src, std::vector<Token> toks, const std::vector<std::string>& vars, const Weights& w)
      : src_(src), toks_(std::move(toks)), vars_(vars), w_(w) {}

  ParamPoly whole() {
    ParamPoly p = expr();
    if (peek().kind != Tok::End) src_.fail(ErrorKind::SyntaxError, peek().offset, "unexpected '" + peek().text + "'");
    return p;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* o) const { return peek().kind == Tok::Op && peek().text == o; }
  void expect(const char* o) {
    if (!is_op(o)) src_.fail(ErrorKind::SyntaxError, peek().offset, std::string("expected '") + o + "'");
    ++pos_;
  }

  ParamPoly expr() {
    ParamPoly p = term();
    while (is_op("+") || is_op("-")) {
      const bool minus = peek().text == "-";
      ++pos_;
      ParamPoly q = term();
      if (minus) p -= q;
      else p += q;
    }
    return p;
  }

  ParamPoly term() {
    ParamPoly p = unary();
    while (is_op("*") || is_op("/")) {
      const bool div = peek().text == "/";
      const std::size_t at = peek().offset;
      ++pos_;
      ParamPoly q = unary();
      if (!div) {
        p = p * q;
        continue;
      }
      if (q.is_zero()) src_.fail(ErrorKind::DivisionByZero, at, "division by zero");
      if (q.size() != 1 || !q.terms().begin()->first.is_one())
        src_.fail(ErrorKind::SyntaxError, at, "division by a non-constant expression");
      p = p.scale(q.terms().begin()->second.inverse());
    }
    return p;
  }

  ParamPoly unary() {
    if (is_op("-")) {
      ++pos_;
      return -unary();
    }
    if (is_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  ParamPoly power() {
    ParamPoly base = primary();
    if (!is_op("^")) return base;
    ++pos_;
    if (peek().kind != Tok::Num) src_.fail(ErrorKind::SyntaxError, peek().offset, "exponent must be a nonnegative integer");
    const std::string& digits = peek().text;
    if (digits.size() > 4) src_.fail(ErrorKind::SyntaxError, peek().offset, "exponent too large");
    const int e = std::stoi(digits);
    ++pos_;
    ParamPoly r = ParamPoly::constant(w_, ParamScalar(1));
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
  }

  ParamPoly primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Num:
        ++pos_;
        return ParamPoly::constant(w_, ParamScalar(Rat(Int(t.text))));
      case Tok::Param:
        ++pos_;
        return ParamPoly::constant(w_, ParamScalar::param());
      case Tok::Ident: {
        const auto it = std::find(vars_.begin(), vars_.end(), t.text);
        if (it == vars_.end()) src_.fail(ErrorKind::UnknownSymbol, t.offset, "unknown variable '" + t.text + "'");
        ++pos_;
        return ParamPoly::variable(w_, static_cast<std::size_t>(it - vars_.begin()));
      }
      case Tok::Op:
        if (t.text == "(") {
          ++pos_;
          ParamPoly p = expr();
          expect(")");
          return p;
        }
        break;
      case Tok::End: src_.fail(ErrorKind::SyntaxError, t.offset, "unexpected end of input");
    }
    src_.fail(ErrorKind::SyntaxError, t.offset, "unexpected '" + t.text + "'");
  }

  const Source& src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::vector<std::string>& vars_;
  const Weights& w_;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool starts_with_word(std::string_view s, std::string_view w) {
  return s.substr(0, w.size()) == w && (s.size() == w.size() || std::isspace(static_cast<unsigned char>(s[w.size()])));
}

}  // namespace

GermSource read_germ_source(std::string_view text) {
  GermSource out;
  bool have_vars = false;
  std::size_t i = 0;
  const Source whole{text};
  for (;;) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ';')) ++i;
    const std::string_view rest = text.substr(i);
    const bool v = starts_with_word(rest, "vars"), w = starts_with_word(rest, "weights");
    if (!v && !w) break;
    std::size_t end = i;
    while (end < text.size() && text[end] != '\n' && text[end] != ';') ++end;
    const auto items = split_list(text.substr(i + (v ? 4 : 7), end - i - (v ? 4 : 7)));
    if (v) {
      for (const auto& name : items) {
        if (!is_var_start(name[0]) ||
            !std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          whole.fail(ErrorKind::SyntaxError, i, "bad variable name '" + name + "'");
        if (std::find(out.vars.begin(), out.vars.end(), name) != out.vars.end())
          whole.fail(ErrorKind::SyntaxError, i, "variable '" + name + "' declared twice");
        out.vars.push_back(name);
      }
      have_vars = true;
    } else {
      std::vector<int> ws;
      for (const auto& item : items) {
        if (item.empty() || item.size() > 6 ||
            !std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          whole.fail(ErrorKind::SyntaxError, i, "weights must be positive integers");
        ws.push_back(std::stoi(item));
        if (ws.back() == 0) whole.fail(ErrorKind::SyntaxError, i, "weights must be positive integers");
      }
      out.weights = ws;
    }
    i = end;
  }
  const auto [line0, col0] = whole.position(i);
  const Source body{text.substr(i), line0, col0};
  const auto toks = tokenize(body);
  // Component boundaries: a parenthesized tuple spanning the whole body.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // token index ranges
  const std::size_t last = toks.size() - 1;                 // End token
  bool tuple = false;
  if (last >= 2 && toks[0].kind == Tok::Op && toks[0].text == "(") {
    int depth = 0;
    std::size_t close = 0;
    for (std::size_t k = 0; k < last; ++k) {
      if (toks[k].kind != Tok::Op) continue;
      if (toks[k].text == "(") ++depth;
      if (toks[k].text == ")" && --depth == 0) {
        close = k;
        break;
      }
    }
    tuple = close == last - 1;
  }
  if (tuple) {
    int depth = 0;
    std::size_t from = 1;
    for (std::size_t k = 1; k < last - 1; ++k) {
      if (toks[k].kind != Tok::Op) continue;
      if (toks[k].text == "(") ++depth;
      if (toks[k].text == ")") --depth;
      if (toks[k].text == "," && depth == 0) {
        ranges.emplace_back(from, k);
        from = k + 1;
      }
    }
    if (from < last - 1 || !ranges.empty()) ranges.emplace_back(from, last - 1);
  } else {
    if (last == 0) body.fail(ErrorKind::SyntaxError, 0, "empty germ");
    ranges.emplace_back(0, last);
  }
  for (const auto& [a, b] : ranges) {
    if (a == b) body.fail(ErrorKind::SyntaxError, toks[a].offset, "empty component");
    for (std::size_t k = a; k < b; ++k) {
      if (toks[k].kind == Tok::Op && toks[k].text == ",")
        body.fail(ErrorKind::SyntaxError, toks[k].offset, "components must be listed inside parentheses");
      if (toks[k].kind == Tok::Param) out.uses_parameter = true;
      if (toks[k].kind == Tok::Ident && !have_vars &&
          std::find(out.vars.begin(), out.vars.end(), toks[k].text) == out.vars.end())
        out.vars.push_back(toks[k].text);
    }
    const std::size_t end = b < toks.size() ? toks[b].offset : body.text.size();
    out.components.push_back(trim(body.text.substr(toks[a].offset, end - toks[a].offset)));
    out.positions.push_back(body.position(toks[a].offset));
  }
  if (out.weights && out.weights->size() != out.vars.size())
    throw Error(ErrorKind::SyntaxError, "weights header has " + std::to_string(out.weights->size()) +
                                            " entries for " + std::to_string(out.vars.size()) + " variables");
  return out;
}

namespace {

ParamPoly parse_at(const Source& src, const std::vector<std::string>& vars, const Weights& w) {
  Parser p(src, tokenize(src), vars, w);
  return p.whole();
}

}  // namespace

ParamPoly parse_poly(std::string_view text, const std::vector<std::string>& vars, const Weights& w) {
  return parse_at(Source{text}, vars, w);
}

Germ to_germ(const GermSource& src) {
  const Weights uniform = Weights::uniform(src.vars.size());
  std::vector<ParamPoly> comps;
  for (std::size_t i = 0; i < src.components.size(); ++i) {
    Source at{src.components[i]};
    if (i < src.positions.size()) std::tie(at.line0, at.col0) = src.positions[i];
    comps.push_back(parse_at(at, src.vars, uniform));
  }
  Germ f(src.vars, uniform, std::move(comps));
  if (src.weights) return with_weights(f, Weights(*src.weights));
  if (const auto w = detect_weights(f)) return with_weights(f, *w);
  return f;
}

Germ parse_germ_source(std::string_view text) { return to_germ(read_germ_source(text)); }

std::string print_germ_source(const Germ& f) {
  std::ostringstream os;
  os << "vars ";
  for (std::size_t i = 0; i < f.n(); ++i) os << (i ? ", " : "") << f.vars[i];
  os << "\nweights ";
  for (std::size_t i = 0; i < f.n(); ++i) os << (i ? ", " : "") << f.weights.w[i];
  os << "\n(";
  for (std::size_t i = 0; i < f.p(); ++i) os << (i ? ", " : "") << f.comps[i].to_string(f.vars);
  os << ")\n";
  return os.str();
}

ParamScalar parse_scalar(std::string_view text) {
  const Weights none;
  const ParamPoly p = parse_poly(text, {}, none);
  if (p.is_zero()) return ParamScalar();
  return p.terms().begin()->second;
}

Rat parse_rat(std::string_view text) {
  const ParamScalar s = parse_scalar(text);
  if (!s.is_constant()) throw Error(ErrorKind::InvalidInput, "'" + std::string(text) + "' is not a rational number");
  return s.constant_value();
}

}  // namespace germforge
