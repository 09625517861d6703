#include "hvertex/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hvertex/builtins.hpp"
#include "hvertex/parser.hpp"
#include "hvertex/star.hpp"
#include "hvertex/verify.hpp"
#include "hvertex/zhu.hpp"
#include "json.hpp"

namespace hvertex {

namespace {

using parse::Expr;
using parse::ExprPtr;
using parse::ParseError;
using parse::ParseErrorKind;

[[noreturn]] void expr_error(const Expr& e, const std::string& msg) {
  throw ParseError(ParseErrorKind::Syntax, e.line, e.column, msg);
}

// Shared evaluator; E is VElement or SElement (both keyed by words).
template <class E>
struct ElementEval {
  const LCAlgebra& alg;
  ScalarPoly hbar;
  std::function<E(const E&, const E&)> mult;
  std::function<E(const E&)> th;

  E unit(const ScalarPoly& c) const { return E::of(Word{}, c); }

  // H multiplies each monomial by its weight.
  E grading(const E& a) const {
    E r;
    for (auto& [w, c] : a.terms()) {
      Rational wt(0);
      for (Basis b : w) wt += alg.weight(b);
      r.add(w, c * ScalarPoly(wt));
    }
    return r;
  }

  std::optional<Basis> generator_leaf(const Expr& e) const {
    if (e.kind == Expr::Kind::Symbol) {
      int i = alg.index_of(e.name);
      if (i >= 0) return basis(i, 0);
    }
    if (e.kind == Expr::Kind::Derivative && e.name == "Th") {
      auto inner = generator_leaf(*e.children[0]);
      if (inner && order_of(*inner) + e.exponent <= kMaxOrder) return basis(gen_of(*inner), order_of(*inner) + e.exponent);
    }
    return std::nullopt;
  }

  std::optional<ScalarPoly> as_scalar(const E& a) const {
    if (a.is_zero()) return ScalarPoly();
    if (a.size() == 1 && a.terms().begin()->first.empty()) return a.terms().begin()->second;
    return std::nullopt;
  }

  E eval(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number:
        return unit(ScalarPoly(e.number));
      case Expr::Kind::Symbol: {
        if (e.name == "h") return unit(hbar);
        if (e.name == "vac") return unit(ScalarPoly(1));
        int i = alg.index_of(e.name);
        if (i >= 0) return E::of(Word{basis(i, 0)});
        for (auto& p : alg.params())
          if (p == e.name) return unit(ScalarPoly::param(p));
        throw ParseError(ParseErrorKind::UnknownGenerator, e.line, e.column, "unknown name '" + e.name + "'");
      }
      case Expr::Kind::Neg:
        return -eval(*e.children[0]);
      case Expr::Kind::Sum: {
        E r;
        for (size_t i = 0; i < e.children.size(); ++i) {
          E x = eval(*e.children[i]);
          if (e.ops[i] == '-')
            r -= x;
          else
            r += x;
        }
        return r;
      }
      case Expr::Kind::Product:
        return product(e);
      case Expr::Kind::Power: {
        E b = eval(*e.children[0]);
        E r = unit(ScalarPoly(1));
        for (int i = 0; i < e.exponent; ++i) r = mult(b, r);
        return r;
      }
      case Expr::Kind::Derivative: {
        E r = eval(*e.children[0]);
        for (int i = 0; i < e.exponent; ++i) r = e.name == "Th" ? th(r) : th(r) - grading(r) * hbar;
        return r;
      }
    }
    return E();
  }

  E product(const Expr& e) const {
    // Factors are combined right to left: a*b*c = a*(b*c).
    std::vector<E> factors;
    std::vector<char> ops;
    for (size_t i = 0; i < e.children.size(); ++i) {
      const Expr& c = *e.children[i];
      if (e.ops[i] == '/') {
        auto s = as_scalar(eval(c));
        if (!s || !s->is_constant() || s->is_zero()) expr_error(c, "can only divide by a nonzero number");
        factors.back() = factors.back() * ScalarPoly(Rational(1) / s->constant_term());
        continue;
      }
      if (e.ops[i] == '.') {
        auto prev = generator_leaf(*e.children[i - 1]);
        auto cur = generator_leaf(c);
        if (!cur || (!prev && ops.back() != '.')) expr_error(c, "'.' joins generator factors");
        Word w = factors.back().terms().begin()->first;
        w.push_back(*cur);
        std::sort(w.begin(), w.end());
        factors.back() = E::of(w);
        ops.back() = '.';
        continue;
      }
      factors.push_back(eval(c));
      ops.push_back(e.ops[i]);
    }
    E r = factors.back();
    for (size_t i = factors.size() - 1; i-- > 0;) r = mult(factors[i], r);
    return r;
  }
};

template <class E>
E parse_with(const ElementEval<E>& ev, std::string_view text) {
  ExprPtr e = parse::parse_expr(text);
  return ev.eval(*e);
}

template <class E, class Tokens>
std::string poly_json(const LambdaPoly<E>& p, const std::string& expr, Tokens&& word_tokens) {
  nlohmann::ordered_json j;
  j["expr"] = expr;
  auto terms = nlohmann::ordered_json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto lt = lmono_tokens(it->first);
    for (auto wt = it->second.terms().rbegin(); wt != it->second.terms().rend(); ++wt) {
      std::vector<std::string> toks = lt;
      for (auto& t : word_tokens(wt->first)) toks.push_back(t);
      terms.push_back(nlohmann::ordered_json::array({toks, wt->second.str()}));
    }
  }
  j["terms"] = terms;
  return j.dump();
}

template <class E>
LambdaPoly<E> at_hbar(const LambdaPoly<E>& p, const std::optional<Rational>& h) {
  if (!h) return p;
  return p.map([&](const E& e) { return e.map_scalars([&](const ScalarPoly& s) { return s.eval_hbar(*h); }); });
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LCAlgebra load_algebra_arg(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_algebra_text(ss.str());
  }
  std::string name = std::filesystem::path(arg).filename().string();
  if (name.size() > 4 && name.substr(name.size() - 4) == ".lca") name.resize(name.size() - 4);
  if (!builtin_source(name)) throw UsageError("no algebra file or built-in named '" + arg + "'");
  return load_builtin(name);
}

struct Options {
  std::string algebra;
  std::string command;
  std::vector<std::string> args;
  bool json = false;
  std::optional<std::string> hbar;
  int degree = 2;
  int trials = 20;
  std::optional<uint64_t> seed;
  std::string mode = "oracle";
  int bch = 0;
  bool shifted = false;
  bool left_recursion = false;
};

const std::map<std::string, size_t>& arities() {
  static const std::map<std::string, size_t> a{
      {"normalform", 1}, {"nprod", 3},  {"hbracket", 2},    {"sumbracket", 2}, {"star", 2},      {"sumstar", 2},
      {"gutt", 2},       {"moyal", 2},  {"quantize", 2},    {"zhu-bracket", 2}, {"zhu-image", 1}, {"verify", 1}};
  return a;
}

int execute(const Options& o, std::ostream& out) {
  auto ar = arities().find(o.command);
  if (ar == arities().end()) throw UsageError("unknown command '" + o.command + "'");
  if (o.args.size() != ar->second)
    throw UsageError(o.command + " takes " + std::to_string(ar->second) + " argument(s)");
  std::optional<Rational> hval;
  if (o.hbar) {
    try {
      hval = Rational::parse(*o.hbar);
    } catch (const std::exception&) {
      throw UsageError("--hbar expects a rational number");
    }
  }

  LCAlgebra alg = load_algebra_arg(o.algebra);
  const std::string& cmd = o.command;

  if (cmd == "verify") {
    SuiteOptions so;
    so.degree = o.degree;
    so.trials = o.trials;
    so.left_recursion = o.left_recursion;
    if (o.seed) {
      so.seed = *o.seed;
    } else if (const char* env = std::getenv("HVERTEX_SEED")) {
      try {
        so.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw UsageError("HVERTEX_SEED must be a non-negative integer");
      }
    }
    SuiteReport r;
    try {
      r = run_suite(o.args[0], alg, so);
    } catch (const VerifyError& e) {
      throw UsageError(e.what());
    }
    if (o.json) {
      out << r.to_json() << "\n";
    } else {
      out << r.suite << " " << r.algebra << ": " << (r.pass() ? "pass" : "FAIL") << " (" << r.trials << " trials)\n";
      for (auto& f : r.failures) out << "  " << f.identity << ": " << f.counterexample << "\n";
      for (auto& n : r.notes) out << "  note: " << n << "\n";
    }
    return r.pass() ? exit_code::kOk : exit_code::kVerifyFailed;
  }

  bool classical = cmd == "quantize";
  VertexAlgebra V(std::move(alg), EngineOptions{classical ? Step::Zero : Step::Hbar, WickRoute::PreferRight});
  const LCAlgebra& A = V.lca();

  auto emit_v = [&](const VPoly& p) {
    VPoly q = at_hbar(p, hval);
    if (o.json)
      out << v_json(V, q) << "\n";
    else
      out << V.render(q) << "\n";
    return exit_code::kOk;
  };
  auto emit_s = [&](const SElementPoly& p) {
    SElementPoly q = at_hbar(p, hval);
    if (o.json)
      out << s_json(A, q) << "\n";
    else
      out << render(A, q) << "\n";
    return exit_code::kOk;
  };
  auto v = [&](size_t i) { return parse_v_element(V, o.args[i]); };
  auto s = [&](size_t i) { return parse_s_element(V, o.args[i]); };

  if (cmd == "normalform") return emit_v(VPoly(v(0)));
  if (cmd == "nprod") {
    int n;
    try {
      size_t used = 0;
      n = std::stoi(o.args[1], &used);
      if (used != o.args[1].size()) throw std::invalid_argument("n");
    } catch (const std::exception&) {
      throw UsageError("nprod expects an integer n");
    }
    return emit_v(VPoly(V.nprod(v(0), n, v(2))));
  }
  if (cmd == "hbracket") return emit_v(V.bracket(v(0), v(1)));
  if (cmd == "sumbracket") return emit_v(V.sum_bracket(v(0), v(1)));
  if (cmd == "zhu-image") {
    ZhuAlgebra Z(V);
    return emit_v(VPoly(Z.q(v(0))));
  }
  if (cmd == "zhu-bracket") {
    int i = A.index_of(o.args[0]), j = A.index_of(o.args[1]);
    if (i < 0 || j < 0) throw UsageError("zhu-bracket takes two generator names");
    ZhuAlgebra Z(V);
    return emit_v(VPoly(from_r(Z.lie_bracket(i, j))));
  }

  StarEngine E(V);
  if (cmd == "star") return emit_s(SElementPoly(E.chiral_star(s(0), s(1))));
  if (cmd == "sumstar") {
    StarMode mode;
    if (o.mode == "oracle")
      mode = StarMode::Oracle;
    else if (o.mode == "general")
      mode = StarMode::GeneralFormula;
    else if (o.mode == "free-field")
      mode = StarMode::FreeField;
    else
      throw UsageError("--mode is one of oracle, general, free-field");
    return emit_s(E.sum_star_bracket(s(0), s(1), mode, o.shifted ? DReading::Shifted : DReading::AsHbar));
  }
  if (cmd == "quantize") return emit_s(quantize_lambda(E, s(0), s(1), o.shifted ? DReading::Shifted : DReading::AsHbar));

  ZhuAlgebra Z(V);
  SElement a = s(0), b = s(1);
  for (const SElement* x : {&a, &b})
    if (Z.p(*x) != *x) throw ValidationError(cmd + " takes elements without derivative factors");
  if (cmd == "moyal") return emit_s(SElementPoly(moyal_star(Z, a, b)));
  // gutt
  if (o.bch > 0) return emit_s(SElementPoly(gutt_bch(Z.enveloping(), a, b, o.bch)));
  return emit_s(SElementPoly(Z.enveloping().star(a, b)));
}

}  // namespace

VElement parse_v_element(const VertexAlgebra& v, std::string_view text) {
  ElementEval<VElement> ev{v.lca(), v.hbar(), [&v](const VElement& a, const VElement& b) { return v.star(a, b); },
                           [&v](const VElement& a) { return v.apply_t(a); }};
  return parse_with(ev, text);
}

SElement parse_s_element(const VertexAlgebra& v, std::string_view text) {
  ElementEval<SElement> ev{v.lca(), v.hbar(), [](const SElement& a, const SElement& b) { return s_mult(a, b); },
                           [](const SElement& a) { return s_derive(a); }};
  return parse_with(ev, text);
}

std::string v_json(const VertexAlgebra& v, const VPoly& p) {
  return poly_json(p, v.render(p), [&v](const Word& w) { return v.word_tokens(w); });
}

std::string s_json(const LCAlgebra& alg, const SElementPoly& p) {
  return poly_json(p, render(alg, p), [&alg](const Word& w) {
    std::vector<std::string> t;
    for (Basis b : w) t.push_back(alg.basis_token(b, true));
    return t;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact computations in enveloping hbar-vertex algebras", "hvertex"};
  app.add_option("algebra", o.algebra, "Algebra file, or built-in name")->required();
  app.add_option("command", o.command,
                 "normalform | nprod | hbracket | sumbracket | star | sumstar | gutt | moyal | quantize | "
                 "zhu-bracket | zhu-image | verify")
      ->required();
  app.add_option("args", o.args, "Command arguments");
  app.add_flag("--json", o.json, "Structured output");
  app.add_option("--hbar", o.hbar, "Specialize hbar in the output");
  app.add_option("--degree", o.degree, "verify: degree bound")->check(CLI::PositiveNumber);
  app.add_option("--trials", o.trials, "verify: number of trials")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "verify: seed (default HVERTEX_SEED, else 7)");
  app.add_flag("--left-recursion", o.left_recursion, "verify sum-bracket: compare both left recursion readings");
  app.add_option("--mode", o.mode, "sumstar: oracle | general | free-field");
  app.add_option("--bch", o.bch, "gutt: use the BCH series to this order");
  app.add_flag("--shifted", o.shifted, "sumstar/quantize: use the lambda-d reading of D");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n" << app.help();
    return exit_code::kUsage;
  }

  try {
    return execute(o, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::kParse;
  } catch (const LcaError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const StarError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_code::kValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_code::kValidation;
  }
}

}  // namespace hvertex
