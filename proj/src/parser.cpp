#include "hvertex/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace hvertex::parse {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End } kind;
  std::string text;
  int column;
};

std::vector<Token> lex(std::string_view s, int line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i)), col});
      i = j;
    } else if (std::string_view("+-*/^().,[]=").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(ParseErrorKind::Syntax, line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, int line) : t_(std::move(toks)), line_(line) {}

  ExprPtr parse_all() {
    auto e = sum();
    if (peek().kind != Token::Kind::End) fail("operator or end of expression");
    return e;
  }

  ExprPtr sum() {
    auto node = make(Expr::Kind::Sum, peek().column);
    char sign = '+';
    if (is_punct("-") || is_punct("+")) sign = next().text[0];
    node->children.push_back(term());
    node->ops.push_back(sign);
    while (is_punct("+") || is_punct("-")) {
      node->ops.push_back(next().text[0]);
      node->children.push_back(term());
    }
    if (node->children.size() == 1 && node->ops[0] == '+') return node->children[0];
    return node;
  }

  const Token& peek() const { return t_[pos_]; }

 private:
  std::shared_ptr<Expr> make(Expr::Kind k, int col) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->line = line_;
    e->column = col;
    return e;
  }
  Token next() { return t_[pos_++]; }
  bool is_punct(const char* p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  [[noreturn]] void fail(const std::string& expected) const {
    std::string got = peek().kind == Token::Kind::End ? "end of input" : "'" + peek().text + "'";
    throw ParseError(ParseErrorKind::Syntax, line_, peek().column, "expected " + expected + ", got " + got);
  }

  ExprPtr term() {
    auto first = unary();
    if (!(is_punct("*") || is_punct(".") || is_punct("/"))) return first;
    auto node = make(Expr::Kind::Product, first->column);
    node->children.push_back(first);
    node->ops.push_back('*');
    while (is_punct("*") || is_punct(".") || is_punct("/")) {
      node->ops.push_back(next().text[0]);
      node->children.push_back(unary());
    }
    return node;
  }

  ExprPtr unary() {
    if (is_punct("-")) {
      int col = next().column;
      auto node = make(Expr::Kind::Neg, col);
      node->children.push_back(unary());
      return node;
    }
    return power();
  }

  int exponent() {
    if (peek().kind != Token::Kind::Number) fail("integer exponent");
    Token n = next();
    if (n.text.size() > 4) throw ParseError(ParseErrorKind::Syntax, line_, n.column, "exponent too large");
    return std::stoi(n.text);
  }

  ExprPtr power() {
    auto base = derivative();
    if (!is_punct("^")) return base;
    next();
    auto node = make(Expr::Kind::Power, base->column);
    node->exponent = exponent();
    node->children.push_back(base);
    return node;
  }

  ExprPtr derivative() {
    if (peek().kind == Token::Kind::Ident && (peek().text == "T" || peek().text == "Th")) {
      Token op = next();
      auto node = make(Expr::Kind::Derivative, op.column);
      node->name = op.text;
      node->exponent = 1;
      if (is_punct("^")) {
        next();
        node->exponent = exponent();
      }
      node->children.push_back(derivative());
      return node;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& tk = peek();
    if (tk.kind == Token::Kind::Number) {
      auto node = make(Expr::Kind::Number, tk.column);
      node->number = Rational::parse(tk.text);
      next();
      return node;
    }
    if (tk.kind == Token::Kind::Ident) {
      auto node = make(Expr::Kind::Symbol, tk.column);
      node->name = tk.text;
      next();
      return node;
    }
    if (is_punct("(")) {
      next();
      auto e = sum();
      if (!is_punct(")")) fail("')'");
      next();
      return e;
    }
    fail("number, name, 'T', '-' or '('");
  }

  std::vector<Token> t_;
  size_t pos_ = 0;
  int line_;
};

bool valid_name(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return s != "T" && s != "Th" && s != "lambda" && s != "h" && s != "vac";
}

std::vector<std::string> split_words(std::string_view line, std::vector<int>& cols) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    words.emplace_back(line.substr(i, j - i));
    cols.push_back(static_cast<int>(i) + 1);
    i = j;
  }
  return words;
}

RElement r_mul(const RElement& a, const RElement& b, const Expr& at) {
  auto pure_scalar = [](const RElement& x) { return x.terms().empty() || (x.size() == 1 && x.terms().begin()->first == kScalarKey); };
  if (pure_scalar(a)) return b * a.coeff(kScalarKey);
  if (pure_scalar(b)) return a * b.coeff(kScalarKey);
  throw ParseError(ParseErrorKind::NotLinear, at.line, at.column, "bracket value must be linear in the generators");
}

RPoly p_mul(const RPoly& a, const RPoly& b, const Expr& at) {
  RPoly r;
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) r.add(ma * mb, r_mul(ca, cb, at));
  return r;
}

struct BracketEval {
  const AlgebraFile& file;

  RPoly eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number:
        return RPoly(r_scalar(ScalarPoly(e.number)));
      case Expr::Kind::Symbol: {
        if (e.name == "lambda") return RPoly::term(LMono::of(lambda_var()), r_scalar(ScalarPoly(1)));
        for (size_t i = 0; i < file.generators.size(); ++i)
          if (file.generators[i].name == e.name) return RPoly(r_gen(basis(static_cast<int>(i), 0)));
        for (auto& p : file.params)
          if (p == e.name) return RPoly(r_scalar(ScalarPoly::param(p)));
        throw ParseError(ParseErrorKind::UnknownGenerator, e.line, e.column, "unknown name '" + e.name + "'");
      }
      case Expr::Kind::Neg:
        return -eval(*e.children[0]);
      case Expr::Kind::Sum: {
        RPoly r;
        for (size_t i = 0; i < e.children.size(); ++i) {
          if (e.ops[i] == '-')
            r -= eval(*e.children[i]);
          else
            r += eval(*e.children[i]);
        }
        return r;
      }
      case Expr::Kind::Product: {
        RPoly r = eval(*e.children[0]);
        for (size_t i = 1; i < e.children.size(); ++i) {
          RPoly f = eval(*e.children[i]);
          if (e.ops[i] == '/') {
            auto& c = *e.children[i];
            if (f.terms().size() != 1 || !f.terms().begin()->first.is_one())
              throw ParseError(ParseErrorKind::Syntax, c.line, c.column, "can only divide by a nonzero number");
            RElement d = f.terms().begin()->second;
            ScalarPoly s = d.coeff(kScalarKey);
            if (d.size() != 1 || !s.is_constant() || s.is_zero())
              throw ParseError(ParseErrorKind::Syntax, c.line, c.column, "can only divide by a nonzero number");
            r = r.scaled(ScalarPoly(Rational(1) / s.constant_term()));
          } else {
            r = p_mul(r, f, *e.children[i]);
          }
        }
        return r;
      }
      case Expr::Kind::Power: {
        RPoly b = eval(*e.children[0]);
        RPoly r(r_scalar(ScalarPoly(1)));
        for (int i = 0; i < e.exponent; ++i) r = p_mul(r, b, e);
        return r;
      }
      case Expr::Kind::Derivative: {
        if (e.name != "T")
          throw ParseError(ParseErrorKind::Syntax, e.line, e.column, "algebra files use the classical derivative T");
        RPoly b = eval(*e.children[0]);
        if (b.depends_on(lambda_var()))
          throw ParseError(ParseErrorKind::Syntax, e.line, e.column, "T applies to generators, not to lambda");
        return b.map([&](const RElement& c) { return shift_order(c, e.exponent); });
      }
    }
    return RPoly();
  }
};

}  // namespace

ExprPtr parse_expr(std::string_view text, int line) {
  ExprParser p(lex(text, line), line);
  return p.parse_all();
}

AlgebraFile parse_algebra(std::string_view text) {
  AlgebraFile f;
  std::set<std::string> names;
  auto claim = [&](const std::string& n, int line, int col) {
    if (!valid_name(n)) throw ParseError(ParseErrorKind::Syntax, line, col, "invalid or reserved name '" + n + "'");
    if (!names.insert(n).second) throw ParseError(ParseErrorKind::DuplicateName, line, col, "duplicate name '" + n + "'");
  };
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  bool have_name = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<int> cols;
    auto w = split_words(line, cols);
    if (w.empty()) continue;
    const std::string& kw = w[0];
    if (kw == "algebra") {
      if (w.size() != 2) throw ParseError(ParseErrorKind::Syntax, lineno, w.size() < 2 ? static_cast<int>(line.size()) + 1 : cols[2], "expected 'algebra <name>'");
      if (have_name) throw ParseError(ParseErrorKind::DuplicateName, lineno, cols[0], "algebra name given twice");
      f.name = w[1];
      have_name = true;
    } else if (kw == "param") {
      if (w.size() != 2) throw ParseError(ParseErrorKind::Syntax, lineno, cols[0], "expected 'param <name>'");
      claim(w[1], lineno, cols[1]);
      f.params.push_back(w[1]);
    } else if (kw == "generator") {
      if (w.size() != 4 || w[2] != "weight")
        throw ParseError(ParseErrorKind::Syntax, lineno, w.size() > 2 ? cols[2] : cols[0], "expected 'generator <name> weight <rational>'");
      claim(w[1], lineno, cols[1]);
      Rational wt;
      try {
        wt = Rational::parse(w[3]);
      } catch (const std::invalid_argument&) {
        throw ParseError(ParseErrorKind::Syntax, lineno, cols[3], "expected a rational weight, got '" + w[3] + "'");
      }
      f.generators.push_back({w[1], wt, lineno});
    } else if (kw == "bracket") {
      // bracket [a, b] = expr
      auto toks = lex(line, lineno);
      size_t p = 1;
      auto expect = [&](Token::Kind k, const char* text, const char* what) {
        const Token& tk = toks[p];
        if (tk.kind != k || (text && tk.text != text)) {
          std::string got = tk.kind == Token::Kind::End ? "end of line" : "'" + tk.text + "'";
          throw ParseError(ParseErrorKind::Syntax, lineno, tk.column, std::string("expected ") + what + ", got " + got);
        }
        return toks[p++];
      };
      expect(Token::Kind::Punct, "[", "'['");
      Token a = expect(Token::Kind::Ident, nullptr, "generator name");
      expect(Token::Kind::Punct, ",", "','");
      Token b = expect(Token::Kind::Ident, nullptr, "generator name");
      expect(Token::Kind::Punct, "]", "']'");
      Token eq = expect(Token::Kind::Punct, "=", "'='");
      std::vector<Token> rest(toks.begin() + static_cast<long>(p), toks.end());
      if (rest.size() == 1) throw ParseError(ParseErrorKind::Syntax, lineno, rest[0].column, "expected bracket value");
      ExprParser ep(rest, lineno);
      f.brackets.push_back({a.text, b.text, ep.parse_all(), lineno, a.column, b.column});
      (void)eq;
    } else {
      throw ParseError(ParseErrorKind::Syntax, lineno, cols[0], "expected 'algebra', 'param', 'generator' or 'bracket', got '" + kw + "'");
    }
  }
  if (!have_name) throw ParseError(ParseErrorKind::Syntax, lineno + 1, 1, "missing 'algebra <name>' line");
  return f;
}

LcaDefinition to_definition(const AlgebraFile& file) {
  LcaDefinition d;
  d.name = file.name;
  d.params = file.params;
  for (auto& g : file.generators) d.generators.push_back({g.name, g.weight});
  for (auto& p : file.params) intern_param(p);
  auto index = [&](const std::string& n, int line, int col) {
    for (size_t i = 0; i < file.generators.size(); ++i)
      if (file.generators[i].name == n) return static_cast<int>(i);
    throw ParseError(ParseErrorKind::UnknownGenerator, line, col, "unknown generator '" + n + "'");
  };
  BracketEval ev{file};
  for (auto& b : file.brackets) {
    BracketDecl bd;
    bd.i = index(b.left, b.line, b.left_col);
    bd.j = index(b.right, b.line, b.right_col);
    bd.value = ev.eval(*b.value);
    d.brackets.push_back(std::move(bd));
  }
  return d;
}

std::string render_algebra(const LCAlgebra& alg) {
  std::ostringstream out;
  out << "algebra " << alg.name() << "\n";
  for (auto& p : alg.params()) out << "param " << p << "\n";
  for (int i = 0; i < alg.size(); ++i)
    out << "generator " << alg.generator(i).name << " weight " << alg.generator(i).weight.str() << "\n";
  for (int i = 0; i < alg.size(); ++i)
    for (int j = i; j < alg.size(); ++j) {
      const RPoly& b = alg.classical(i, j);
      if (b.is_zero()) continue;
      out << "bracket [" << alg.generator(i).name << ", " << alg.generator(j).name << "] = " << alg.render(b, false) << "\n";
    }
  return out.str();
}

}  // namespace hvertex::parse
