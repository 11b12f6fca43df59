#include <opecalc/parser.hpp>

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace opecalc {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Name, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int column = 0;
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view s, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const int col = static_cast<int>(i) + 1;
    if (is_name_start(c)) {
      std::size_t j = i;
      while (j < s.size() && is_name_char(s[j])) ++j;
      out.push_back({Tok::Name, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < s.size() && is_digit(s[j])) ++j;
      // "p/q" is one literal only when a digit follows the slash
      if (j + 1 < s.size() && s[j] == '/' && is_digit(s[j + 1])) {
        ++j;
        while (j < s.size() && is_digit(s[j])) ++j;
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (std::string_view("+-*/():{}^=").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

bool is_reserved(const std::string& name) { return name == "d" || name == "dz"; }

// Either a rational or a field; terms multiply scalars into at most one field.
struct Value {
  std::optional<Scalar> scalar;
  FieldExpr field;

  static Value of(Scalar s) { return Value{std::move(s), FieldExpr()}; }
  static Value of(FieldExpr f) { return Value{std::nullopt, std::move(f)}; }

  FieldExpr as_field() const {
    if (!scalar) return field;
    if (*scalar == 1) return FieldExpr::unit();
    return FieldExpr::scaled(*scalar, FieldExpr::unit());
  }
};

class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, int line, const AlgebraDef& alg)
      : toks_(toks), line_(line), alg_(alg) {}

  Value expr() {
    std::vector<Part> parts;
    bool signed_first = false;
    Scalar sign(1);
    if (peek_punct("+") || peek_punct("-")) {
      sign = next().text == "-" ? -1 : 1;
      signed_first = true;
    }
    parts.push_back(term_part());
    parts.back().coef *= sign;
    while (peek_punct("+") || peek_punct("-")) {
      Scalar s = next().text == "-" ? -1 : 1;
      parts.push_back(term_part());
      parts.back().coef *= s;
    }
    return combine(parts, signed_first);
  }

  Value term() {
    std::vector<Part> parts{term_part()};
    return combine(parts, false);
  }

  /// One "[coefficient *] factor" term.
  struct Part {
    Scalar coef{1};
    std::optional<FieldExpr> field;
  };

  Part term_part() {
    Part out;
    auto absorb = [&](Value v, const Token& at) {
      if (v.scalar) {
        out.coef *= *v.scalar;
        return;
      }
      if (out.field)
        throw error(at, "product of two fields; write :A B: for a normally ordered product");
      // keep Sum[(c, X)] terms flat so printing round-trips
      if (v.field.kind() == FieldExpr::Kind::Sum && v.field.terms().size() == 1 && !parenthesized_) {
        out.coef *= v.field.terms().front().first;
        out.field = v.field.terms().front().second;
      } else {
        out.field = v.field;
      }
    };
    absorb(unary(), peek());
    while (true) {
      if (peek_punct("*")) {
        const Token& at = next();
        absorb(unary(), at);
      } else if (peek_punct("/") && !(peek(1).kind == Tok::Name && peek(1).text == "dz")) {
        const Token& at = next();
        Value v = unary();
        if (!v.scalar) throw error(at, "division by a field");
        if (*v.scalar == 0) throw error(at, "division by zero");
        out.coef /= *v.scalar;
      } else {
        break;
      }
    }
    return out;
  }

  Value unary() {
    parenthesized_ = false;
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      try {
        return Value::of(parse_scalar(t.text));
      } catch (const Error& e) {
        throw error(t, e.what());
      }
    }
    if (t.kind == Tok::Name) {
      next();
      if (t.text == "d") {
        int k = 1;
        if (peek_punct("{")) {
          next();
          const Token& num = next();
          if (num.kind != Tok::Number || num.text.find('/') != std::string::npos)
            throw error(num, "expected a derivative order");
          k = std::stoi(num.text);
          if (k < 1) throw error(num, "derivative order must be at least 1");
          expect("}");
        }
        Value v = unary();
        parenthesized_ = false;
        return Value::of(FieldExpr::deriv(k, v.as_field()));
      }
      return resolve(t);
    }
    if (t.kind == Tok::Punct && t.text == ":") {
      next();
      FieldExpr left = unary().as_field();
      FieldExpr right = unary().as_field();
      if (!peek_punct(":")) {
        if (starts_factor(peek()))
          throw error(peek(), "normally ordered products take exactly two factors; nest them explicitly");
        throw error(peek(), "expected ':'");
      }
      next();
      parenthesized_ = false;
      return Value::of(FieldExpr::nop(left, right));
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      next();
      Value v = expr();
      expect(")");
      parenthesized_ = true;
      return v;
    }
    throw error(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool peek_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  void expect(const char* p) {
    if (!peek_punct(p)) throw error(peek(), std::string("expected '") + p + "'");
    next();
  }
  bool at_end() const { return peek().kind == Tok::End; }
  ParseError error(const Token& t, const std::string& msg) const { return ParseError(line_, t.column, msg); }

 private:
  static bool starts_factor(const Token& t) {
    return t.kind == Tok::Name || t.kind == Tok::Number ||
           (t.kind == Tok::Punct && (t.text == "(" || t.text == ":"));
  }

  Value resolve(const Token& t) const {
    if (auto p = alg_.params.find(t.text); p != alg_.params.end()) return Value::of(p->second);
    if (alg_.find(t.text)) return Value::of(FieldExpr::gen(t.text));
    if (auto f = alg_.named_fields.find(t.text); f != alg_.named_fields.end()) return Value::of(f->second);
    throw error(t, "unknown identifier '" + t.text + "'");
  }

  static Value combine(const std::vector<Part>& parts, bool signed_first) {
    bool all_scalar = true;
    for (const auto& p : parts) all_scalar = all_scalar && !p.field;
    if (all_scalar) {
      Scalar total(0);
      for (const auto& p : parts) total += p.coef;
      return Value::of(total);
    }
    if (parts.size() == 1 && !signed_first && parts.front().coef == 1) return Value::of(*parts.front().field);
    std::vector<FieldExpr::Term> out;
    for (const auto& p : parts) out.emplace_back(p.coef, p.field ? *p.field : FieldExpr::unit());
    return Value::of(FieldExpr::sum(std::move(out)));
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  int line_;
  const AlgebraDef& alg_;
  bool parenthesized_ = false;
};

// Table entries are already right-nested; they are converted factor by factor
// without invoking the engine (which needs the finished table).
NormalForm table_form(const FieldExpr& e, const AlgebraDef& alg, int line, int col) {
  switch (e.kind()) {
    case FieldExpr::Kind::Unit:
      return NormalForm::unit();
    case FieldExpr::Kind::Gen:
      return NormalForm(Monomial{Factor{alg.index_of(e.name()), 0}});
    case FieldExpr::Kind::Deriv:
      return raw_derive(table_form(e.child(), alg, line, col), e.order());
    case FieldExpr::Kind::Nop: {
      NormalForm left = table_form(e.left(), alg, line, col);
      NormalForm right = table_form(e.right(), alg, line, col);
      NormalForm out;
      for (const auto& [x, c] : left) {
        if (x.size() > 1)
          throw ParseError(line, col, "contraction entries must be right-nested products");
        for (const auto& [y, d] : right) {
          Monomial m = x;
          m.insert(m.end(), y.begin(), y.end());
          out.add(m, Scalar(c * d));
        }
      }
      return out;
    }
    case FieldExpr::Kind::Sum: {
      NormalForm out;
      for (const auto& [c, t] : e.terms()) out.add(table_form(t, alg, line, col), c);
      return out;
    }
  }
  return {};
}

struct Line {
  int number;
  std::vector<Token> toks;
};

void check_new_name(const AlgebraDef& alg, const Token& t, int line) {
  if (t.kind != Tok::Name) throw ParseError(line, t.column, "expected a name");
  if (is_reserved(t.text)) throw ParseError(line, t.column, "'" + t.text + "' is reserved");
  if (alg.find(t.text) || alg.params.count(t.text) || alg.named_fields.count(t.text))
    throw ParseError(line, t.column, "duplicate name '" + t.text + "'");
}

}  // namespace

AlgebraDef parse_algebra(std::string_view text) {
  std::vector<Line> lines;
  {
    std::size_t start = 0;
    int number = 0;
    bool seen_content = false;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      ++number;
      std::string_view trimmed = raw;
      while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
      while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
      if (!seen_content && !trimmed.empty() && trimmed.front() != '#') {
        seen_content = true;
        if (trimmed.rfind("opecalc-algebra", 0) == 0) {
          if (trimmed != "opecalc-algebra v1")
            throw ParseError(number, 1, "unsupported format version '" + std::string(trimmed) + "'");
          start = end + 1;
          continue;
        }
      }
      auto toks = lex(raw, number);
      if (toks.size() > 1) lines.push_back({number, std::move(toks)});
      start = end + 1;
    }
  }

  // Pass 1: parameters and generators, so that generator indices are final
  // before any table entry is read.
  AlgebraDef scratch;
  std::vector<Generator> gens;
  for (const auto& ln : lines) {
    const auto& t = ln.toks;
    const std::string& kw = t[0].text;
    if (t[0].kind != Tok::Name) throw ParseError(ln.number, t[0].column, "expected a statement keyword");
    if (kw == "param") {
      check_new_name(scratch, t[1], ln.number);
      if (!(t[2].kind == Tok::Punct && t[2].text == "="))
        throw ParseError(ln.number, t[2].column, "expected '='");
      std::vector<Token> rhs(t.begin() + 3, t.end());
      ExprParser p(rhs, ln.number, scratch);
      Value v = p.expr();
      if (!p.at_end()) throw p.error(p.peek(), "unexpected '" + p.peek().text + "'");
      if (!v.scalar) throw ParseError(ln.number, rhs.front().column, "parameter values must be rational");
      scratch.params[t[1].text] = *v.scalar;
    } else if (kw == "generator") {
      check_new_name(scratch, t[1], ln.number);
      for (const auto& g : gens)
        if (g.name == t[1].text) throw ParseError(ln.number, t[1].column, "duplicate generator '" + g.name + "'");
      Generator g{t[1].text, -1, Scalar(0)};
      bool have_weight = false;
      std::size_t i = 2;
      while (t[i].kind != Tok::End) {
        const Token& key = t[i];
        if (key.kind != Tok::Name || (key.text != "parity" && key.text != "weight"))
          throw ParseError(ln.number, key.column, "expected parity=P or weight=W");
        if (!(t[i + 1].kind == Tok::Punct && t[i + 1].text == "="))
          throw ParseError(ln.number, t[i + 1].column, "expected '='");
        // the value runs up to the next "key =" pair
        std::size_t j = i + 2;
        while (t[j].kind != Tok::End &&
               !(t[j].kind == Tok::Name && (t[j].text == "parity" || t[j].text == "weight") &&
                 t[j + 1].kind == Tok::Punct && t[j + 1].text == "="))
          ++j;
        std::vector<Token> value(t.begin() + static_cast<long>(i) + 2, t.begin() + static_cast<long>(j));
        if (value.empty()) throw ParseError(ln.number, t[i + 1].column, "missing value");
        value.push_back({Tok::End, "", t[j].column});
        ExprParser p(value, ln.number, scratch);
        Value v = p.expr();
        if (!p.at_end()) throw p.error(p.peek(), "unexpected '" + p.peek().text + "'");
        if (!v.scalar) throw ParseError(ln.number, value.front().column, key.text + " must be rational");
        if (key.text == "parity") {
          if (*v.scalar != 0 && *v.scalar != 1)
            throw ParseError(ln.number, value.front().column, "parity must be 0 or 1");
          g.parity = *v.scalar == 1 ? 1 : 0;
        } else {
          g.weight = *v.scalar;
          have_weight = true;
        }
        i = j;
      }
      if (g.parity < 0) throw ParseError(ln.number, t[1].column, "generator '" + g.name + "' needs parity=P");
      if (!have_weight) throw ParseError(ln.number, t[1].column, "generator '" + g.name + "' needs weight=W");
      gens.push_back(std::move(g));
      scratch.generators.push_back(gens.back());  // for duplicate checks only
    } else if (kw != "contract" && kw != "field") {
      throw ParseError(ln.number, t[0].column, "unknown statement '" + kw + "'");
    }
  }

  AlgebraDef alg = make_algebra(std::move(gens));
  alg.params = scratch.params;

  // Pass 2: contractions and named fields, in file order.
  std::map<AlgebraDef::Pair, int> declared_at;
  for (const auto& ln : lines) {
    const auto& t = ln.toks;
    const std::string& kw = t[0].text;
    if (kw == "contract") {
      for (int k : {1, 2})
        if (t[k].kind != Tok::Name || !alg.find(t[k].text))
          throw ParseError(ln.number, t[k].column, "unknown generator '" + t[k].text + "'");
      if (!(t[3].kind == Tok::Punct && t[3].text == "="))
        throw ParseError(ln.number, t[3].column, "expected '='");
      const auto g = alg.index_of(t[1].text);
      const auto h = alg.index_of(t[2].text);
      std::vector<Token> rhs(t.begin() + 4, t.end());
      ExprParser p(rhs, ln.number, alg);
      SingularPart sp;
      bool first = true;
      while (first || p.peek_punct("+") || p.peek_punct("-")) {
        Scalar sign(1);
        if (p.peek_punct("+") || p.peek_punct("-")) sign = p.next().text == "-" ? -1 : 1;
        const Token& start = p.peek();
        Value v = p.term();
        if (!(p.peek_punct("/") && p.peek(1).kind == Tok::Name && p.peek(1).text == "dz"))
          throw p.error(p.peek(), "expected '/dz^K' after a contraction term");
        p.next();
        p.next();
        p.expect("^");
        const Token& pole_tok = p.next();
        if (pole_tok.kind != Tok::Number || pole_tok.text.find('/') != std::string::npos)
          throw p.error(pole_tok, "expected an integer pole order");
        const int pole = std::stoi(pole_tok.text);
        if (pole < 1) throw p.error(pole_tok, "pole order must be at least 1");
        NormalForm nf;
        try {
          nf = table_form(v.as_field(), alg, ln.number, start.column);
        } catch (const AlgebraError& e) {
          throw ParseError(ln.number, start.column, e.what());
        }
        sp.add(pole, nf, sign);
        first = false;
      }
      if (!p.at_end()) throw p.error(p.peek(), "unexpected '" + p.peek().text + "'");
      auto [it, inserted] = alg.contractions.try_emplace({g, h}, sp);
      if (!inserted && !(it->second == sp))
        throw ParseError(ln.number, t[1].column,
                         "contradictory declarations for contract " + t[1].text + " " + t[2].text +
                             " (first on line " + std::to_string(declared_at[{g, h}]) + ")");
      declared_at.emplace(AlgebraDef::Pair{g, h}, ln.number);
    } else if (kw == "field") {
      check_new_name(alg, t[1], ln.number);
      if (!(t[2].kind == Tok::Punct && t[2].text == "="))
        throw ParseError(ln.number, t[2].column, "expected '='");
      std::vector<Token> rhs(t.begin() + 3, t.end());
      ExprParser p(rhs, ln.number, alg);
      Value v = p.expr();
      if (!p.at_end()) throw p.error(p.peek(), "unexpected '" + p.peek().text + "'");
      alg.named_fields[t[1].text] = v.as_field();
    }
  }
  return complete_contractions(std::move(alg));
}

AlgebraDef load_algebra_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open algebra file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::istringstream lines(text);
  std::string first;
  int number = 0;
  while (std::getline(lines, first)) {
    ++number;
    if (!first.empty() && first.back() == '\r') first.pop_back();
    auto pos = first.find_first_not_of(" \t");
    if (pos != std::string::npos) break;
  }
  if (first.find("opecalc-algebra") == std::string::npos)
    throw ParseError(number, 1, "missing version line 'opecalc-algebra v1'");
  return parse_algebra(text);
}

FieldExpr parse_expr(std::string_view text, const AlgebraDef& alg) {
  auto toks = lex(text, 1);
  ExprParser p(toks, 1, alg);
  Value v = p.expr();
  if (!p.at_end()) throw p.error(p.peek(), "unexpected '" + p.peek().text + "'");
  return v.as_field();
}

}  // namespace opecalc
