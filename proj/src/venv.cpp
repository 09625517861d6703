#include "hvertex/venv.hpp"

#include <cstdlib>

#include "memo.hpp"

namespace hvertex {

namespace {

using detail::Memo;
using detail::WordHash;
using detail::WordPairHash;
using detail::BasisWordHash;
using detail::BasisPairHash;

SPoly lam() { return poly_var(lambda_var()); }

template <class F>
VElement map_words(const VElement& x, F&& f) {
  VElement r;
  for (auto& [w, c] : x.terms()) r.add_scaled(f(w), c);
  return r;
}

}  // namespace

struct VertexAlgebra::Caches {
  Memo<std::pair<Basis, Basis>, RPoly, BasisPairHash> gen_bracket;
  Memo<std::pair<Basis, Basis>, RElement, BasisPairHash> rl_bracket;
  Memo<std::pair<Basis, Word>, VElement, BasisWordHash> left_mult;
  Memo<std::pair<Word, Word>, VElement, WordPairHash> star;
  Memo<Word, VElement, WordHash> apply_t;
  Memo<std::pair<Word, Word>, VPoly, WordPairHash> bracket;
};

VElement v_word(const Word& w, const ScalarPoly& c) { return VElement::of(w, c); }

VElement from_r(const RElement& r) {
  VElement v;
  for (auto& [k, c] : r.terms()) {
    if (k == kScalarKey)
      v.add(Word{}, c);
    else
      v.add(Word{static_cast<Basis>(k)}, c);
  }
  return v;
}

VPoly from_r(const RPoly& p) {
  return p.map([](const RElement& r) { return from_r(r); });
}

Word tail(const Word& w, size_t from) { return Word(w.begin() + static_cast<long>(std::min(from, w.size())), w.end()); }

int degree(const VElement& a) {
  int d = -1;
  for (auto& [w, c] : a.terms()) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

ProductTree ProductTree::gen(Basis b) {
  ProductTree t;
  t.kind = Kind::Leaf;
  t.leaf = b;
  return t;
}
ProductTree ProductTree::vac() { return ProductTree{}; }
ProductTree ProductTree::number(const ScalarPoly& s) {
  ProductTree t;
  t.kind = Kind::Scalar;
  t.scalar = s;
  return t;
}
ProductTree ProductTree::product(ProductTree l, ProductTree r) {
  ProductTree t;
  t.kind = Kind::Product;
  t.children = {std::move(l), std::move(r)};
  return t;
}
ProductTree ProductTree::derivative(ProductTree c, int order) {
  ProductTree t;
  t.kind = Kind::Derivative;
  t.order = order;
  t.children = {std::move(c)};
  return t;
}
ProductTree ProductTree::sum(std::vector<ProductTree> terms) {
  ProductTree t;
  t.kind = Kind::Sum;
  t.children = std::move(terms);
  return t;
}

VertexAlgebra::VertexAlgebra(LCAlgebra alg, EngineOptions opts)
    : alg_(std::move(alg)), opts_(opts), caches_(std::make_unique<Caches>()) {}
VertexAlgebra::~VertexAlgebra() = default;
VertexAlgebra::VertexAlgebra(VertexAlgebra&&) noexcept = default;
VertexAlgebra& VertexAlgebra::operator=(VertexAlgebra&&) noexcept = default;

const RPoly& VertexAlgebra::gen_bracket(Basis a, Basis b) const {
  auto key = std::make_pair(a, b);
  if (auto* hit = caches_->gen_bracket.find(key)) return *hit;
  RPoly p = alg_.hbracket_R(r_gen(a), r_gen(b));
  if (opts_.step == Step::Zero)
    p = p.map([](const RElement& e) { return e.map_scalars([](const ScalarPoly& s) { return s.eval_hbar(Rational(0)); }); });
  return caches_->gen_bracket.put(key, std::move(p));
}

const RElement& VertexAlgebra::rl_bracket(Basis a, Basis b) const {
  auto key = std::make_pair(a, b);
  if (auto* hit = caches_->rl_bracket.find(key)) return *hit;
  SPoly lo = -poly_var(tau_var()) - SPoly(hbar());
  RPoly s = findiff::definite_sum(gen_bracket(a, b), lambda_var(), lo, SPoly(), opts_.step);
  s = resolve_marker(s, tau_var(), [](const RElement& c) { return shift_order(c); });
  return caches_->rl_bracket.put(key, s.constant_term());
}

VElement VertexAlgebra::left_mult_word(Basis g, const Word& b) const {
  if (b.empty() || g <= b[0]) {
    Word w;
    w.reserve(b.size() + 1);
    w.push_back(g);
    w.insert(w.end(), b.begin(), b.end());
    return v_word(w);
  }
  auto key = std::make_pair(g, b);
  if (auto* hit = caches_->left_mult.find(key)) return *hit;
  // g*(b0*C) = b0*(g*C) + [g, b0]_{R_L} * C
  Basis b0 = b[0];
  Word c = tail(b);
  VElement r = left_mult(b0, left_mult_word(g, c));
  for (auto& [k, coef] : rl_bracket(g, b0).terms()) {
    if (k == kScalarKey)
      r.add(c, coef);
    else
      r.add_scaled(left_mult_word(static_cast<Basis>(k), c), coef);
  }
  return caches_->left_mult.put(key, std::move(r));
}

VElement VertexAlgebra::left_mult(Basis g, const VElement& b) const {
  return map_words(b, [&](const Word& w) { return left_mult_word(g, w); });
}

VElement VertexAlgebra::apply_t_word(const Word& w) const {
  if (w.empty()) return VElement();
  if (auto* hit = caches_->apply_t.find(w)) return *hit;
  Basis w0 = w[0];
  Word rest = tail(w);
  int ord = order_of(w0) + 1;
  if (ord > kMaxOrder) throw std::overflow_error("derivative order exceeds " + std::to_string(kMaxOrder));
  VElement r = left_mult_word(basis(gen_of(w0), ord), rest);
  r += left_mult(w0, apply_t_word(rest));
  return caches_->apply_t.put(w, std::move(r));
}

VElement VertexAlgebra::apply_t(const VElement& a, int times) const {
  VElement r = a;
  for (int i = 0; i < times && !r.is_zero(); ++i) r = map_words(r, [&](const Word& w) { return apply_t_word(w); });
  return r;
}

VElement VertexAlgebra::apply_falling_t(const VElement& a, int n) const {
  VElement r = a;
  for (int i = 0; i < n && !r.is_zero(); ++i) r = apply_t(r) - r * (hbar() * ScalarPoly(i));
  return r;
}

VElement VertexAlgebra::star_words(const Word& a, const Word& b) const {
  if (a.empty()) return v_word(b);
  if (a.size() == 1) return left_mult_word(a[0], b);
  auto key = std::make_pair(a, b);
  if (auto* hit = caches_->star.find(key)) return *hit;
  // (a0*A)*B = a0*(A*B) + (sum_0^T A)*[a0_lambda B] + (sum_0^T a0)*[A_lambda B]
  Word a0{a[0]};
  Word rest = tail(a);
  VElement r = left_mult(a[0], star_words(rest, b));
  auto corr = [&](const Word& lhs, const Word& bracket_left) {
    auto fb = findiff::to_falling(bracket_words(bracket_left, b), lambda_var(), opts_.step);
    for (size_t n = 0; n < fb.coeffs.size(); ++n) {
      VElement f = fb.coeffs[n].constant_term();
      if (f.is_zero()) continue;
      VElement t = apply_falling_t(v_word(lhs), static_cast<int>(n) + 1) * ScalarPoly(Rational(1, static_cast<long>(n) + 1));
      r += star(t, f);
    }
  };
  corr(rest, a0);
  corr(a0, rest);
  return caches_->star.put(key, std::move(r));
}

VElement VertexAlgebra::star(const VElement& a, const VElement& b) const {
  VElement r;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms()) r.add_scaled(star_words(wa, wb), ca * cb);
  return r;
}

VElement VertexAlgebra::normal_form(const ProductTree& t) const {
  switch (t.kind) {
    case ProductTree::Kind::Leaf:
      return v_basis(t.leaf);
    case ProductTree::Kind::Vacuum:
      return v_vac();
    case ProductTree::Kind::Scalar:
      return v_vac(t.scalar);
    case ProductTree::Kind::Product:
      return star(normal_form(t.children.at(0)), normal_form(t.children.at(1)));
    case ProductTree::Kind::Derivative:
      return apply_t(normal_form(t.children.at(0)), t.order);
    case ProductTree::Kind::Sum: {
      VElement r;
      for (auto& c : t.children) r += normal_form(c);
      return r;
    }
  }
  return VElement();
}

VPoly VertexAlgebra::bracket(const VElement& a, const VElement& b) const {
  VPoly r;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms()) r += bracket_words(wa, wb).scaled(ca * cb);
  return r;
}

VPoly VertexAlgebra::bracket_words(const Word& a, const Word& b) const {
  if (a.empty() || b.empty()) return VPoly();
  if (a.size() == 1 && b.size() == 1) return from_r(gen_bracket(a[0], b[0]));
  auto key = std::make_pair(a, b);
  if (auto* hit = caches_->bracket.find(key)) return *hit;
  VPoly r;
  if (opts_.route == WickRoute::PreferRight)
    r = b.size() >= 2 ? right_wick(a, b) : left_wick(a, b);
  else
    r = a.size() >= 2 ? left_wick(a, b) : right_wick(a, b);
  return caches_->bracket.put(key, std::move(r));
}

VPoly VertexAlgebra::right_wick(const Word& a, const Word& b) const {
  // [A_lambda b0*C] = b0*[A_lambda C] + [A_lambda b0]*C + sum_0^{lambda+h} [[A_lambda b0]_mu C] dmu
  Word b0{b[0]};
  Word c = tail(b);
  VElement cv = v_word(c);
  VPoly r = bracket_words(a, c).map([&](const VElement& x) { return left_mult(b[0], x); });
  VPoly ab = bracket_words(a, b0);
  r += ab.map([&](const VElement& x) { return star(x, cv); });
  VPoly inner;
  for (auto& [m, x] : ab.terms()) inner += shift_mono(bracket(x, cv).rename(lambda_var(), mu_var()), m);
  r += findiff::definite_sum(inner, mu_var(), SPoly(), lam() + SPoly(hbar()), opts_.step);
  return r;
}

VPoly VertexAlgebra::left_wick(const Word& a, const Word& c) const {
  // [a0*A_lambda C] = a0*[A_{lambda+T} C] + A*[a0_{lambda+T} C] + sum_0^lambda [A_mu [a0_{lambda-mu-h} C]] dmu
  VElement a0 = v_basis(a[0]);
  Word rest = tail(a);
  VElement restv = v_word(rest);
  VPoly y = bracket_words(rest, c);
  VPoly z = bracket_words(Word{a[0]}, c);
  VPoly r;
  auto shifted = [&](const VElement& left, const VPoly& p) {
    int deg = p.degree(lambda_var());
    std::vector<VElement> tpow{left};
    for (int n = 0; n <= deg; ++n) {
      VElement pn = p.coeff(lambda_var(), n).constant_term();
      if (pn.is_zero()) continue;
      for (int j = 0; j <= n; ++j) {
        while (static_cast<int>(tpow.size()) <= j) tpow.push_back(apply_t(tpow.back()));
        VElement t = star(tpow[j], pn) * ScalarPoly(binomial(n, j));
        r.add(LMono::of(lambda_var(), n - j), t);
      }
    }
  };
  shifted(a0, y);
  shifted(restv, z);
  VPoly inner;
  SPoly arg = lam() - poly_var(mu_var()) - SPoly(hbar());
  for (int n = 0; n <= z.degree(lambda_var()); ++n) {
    VElement zn = z.coeff(lambda_var(), n).constant_term();
    if (zn.is_zero()) continue;
    inner += pow(arg, n) * bracket(restv, zn).rename(lambda_var(), mu_var());
  }
  r += findiff::definite_sum(inner, mu_var(), SPoly(), lam(), opts_.step);
  return r;
}

VPoly VertexAlgebra::resolve_tau(const VPoly& p) const {
  return resolve_marker(p, tau_var(), [&](const VElement& c) { return apply_t(c); });
}

VPoly VertexAlgebra::bracket_via_skew(const VElement& a, const VElement& b) const {
  SPoly arg = -lam() - poly_var(tau_var()) - SPoly(hbar() * ScalarPoly(2));
  return -resolve_tau(substitute(bracket(b, a), lambda_var(), arg));
}

VElement VertexAlgebra::nprod(const VElement& a, int n, const VElement& b) const {
  if (n == -1) return star(a, b);
  if (n < -1) {
    int m = -n - 1;
    return star(apply_falling_t(a, m) * ScalarPoly(Rational(1) / factorial(m)), b);
  }
  if (n > product_bound(a, b)) return VElement();
  auto fb = findiff::to_falling(bracket(a, b), lambda_var(), opts_.step);
  if (static_cast<size_t>(n) >= fb.coeffs.size()) return VElement();
  return fb.coeffs[n].constant_term() * ScalarPoly(factorial(n));
}

VPoly VertexAlgebra::sum_bracket(const VElement& a, const VElement& b) const {
  Var x = var("x_sum");
  VPoly r(star(a, b));
  r += findiff::definite_sum(bracket(a, b).rename(lambda_var(), x), x, SPoly(), lam(), opts_.step);
  return r;
}

VElement VertexAlgebra::commutator_from_bracket(const VElement& a, const VElement& b) const {
  SPoly lo = -poly_var(tau_var()) - SPoly(hbar());
  return resolve_tau(findiff::definite_sum(bracket(a, b), lambda_var(), lo, SPoly(), opts_.step)).constant_term();
}

VElement VertexAlgebra::borcherds_residual(const VElement& a, const VElement& b, const VElement& c, int m, int n,
                                           int k) const {
  // Every sum is finite: the cap exceeds all positive-product bounds below.
  Rational w = max_weight(a) + max_weight(b) + max_weight(c);
  long cap = -(-w).floor() + std::abs(m) + std::abs(n) + std::abs(k) + 4;
  ScalarPoly hb = hbar();
  auto hpow = [&](long i) { return i == 0 ? ScalarPoly(1) : hb.pow(static_cast<int>(i)); };
  VElement r;
  for (long j = 0; j <= cap; ++j) {
    Rational cnj = binomial(n, j);
    if (cnj.is_zero()) break;
    ScalarPoly sj(j % 2 == 0 ? cnj : -cnj);
    for (long i = 0; i <= cap; ++i) {
      Rational cni = binomial(-n - 1, i);
      if (cni.is_zero()) break;
      ScalarPoly s = sj * ScalarPoly(cni) * hpow(i);
      if (s.is_zero()) break;
      VElement bc = nprod(b, static_cast<int>(k + j + i), c);
      if (!bc.is_zero()) r.add_scaled(nprod(a, static_cast<int>(m + n - j), bc), s);
      VElement ac = nprod(a, static_cast<int>(m + j), c);
      if (!ac.is_zero())
        r.add_scaled(nprod(b, static_cast<int>(k + n - j + i), ac), n % 2 == 0 ? -s : s);
    }
  }
  for (long j = 0; j <= cap; ++j) {
    Rational cmj = binomial(m, j);
    if (cmj.is_zero()) break;
    VElement ab = nprod(a, static_cast<int>(n + j), b);
    if (ab.is_zero()) continue;
    for (long i = 0; i <= j; ++i) {
      ScalarPoly s = ScalarPoly(cmj * binomial(j, i)) * hpow(i);
      if (s.is_zero()) break;
      r.add_scaled(nprod(ab, static_cast<int>(k + m - j + i), c), -s);
    }
  }
  return r;
}

Rational VertexAlgebra::max_weight(const Word& w) const {
  Rational r(0);
  for (Basis b : w) r += alg_.weight(b);
  return r;
}

Rational VertexAlgebra::max_weight(const VElement& a) const {
  Rational r(0);
  bool first = true;
  for (auto& [w, c] : a.terms()) {
    Rational x = max_weight(w);
    if (first || x > r) r = x;
    first = false;
  }
  return r;
}

long VertexAlgebra::product_bound(const VElement& a, const VElement& b) const {
  return (max_weight(a) + max_weight(b) - Rational(1)).floor();
}

std::vector<std::string> VertexAlgebra::word_tokens(const Word& w) const {
  std::vector<std::string> out;
  for (Basis b : w) out.push_back(alg_.basis_token(b, true));
  return out;
}

std::string VertexAlgebra::render(const VElement& a) const { return render(VPoly(a)); }

std::string VertexAlgebra::render(const VPoly& p) const {
  std::vector<RenderTerm> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto lt = lmono_tokens(it->first);
    for (auto wt = it->second.terms().rbegin(); wt != it->second.terms().rend(); ++wt) {
      auto toks = word_tokens(wt->first);
      for (auto st = wt->second.terms().rbegin(); st != wt->second.terms().rend(); ++st) {
        RenderTerm t{st->second, scalar_mono_tokens(st->first)};
        t.factors.insert(t.factors.end(), lt.begin(), lt.end());
        t.factors.insert(t.factors.end(), toks.begin(), toks.end());
        terms.push_back(std::move(t));
      }
    }
  }
  return render_sum(terms);
}

}  // namespace hvertex
