#include "hvertex/enveloping.hpp"

#include <algorithm>

#include "memo.hpp"

namespace hvertex {

using detail::BasisPairHash;
using detail::BasisWordHash;
using detail::Memo;
using detail::WordHash;

SElement s_monomial(Word w, const ScalarPoly& c) {
  std::sort(w.begin(), w.end());
  return SElement::of(w, c);
}

namespace {

Word merge(const Word& a, const Word& b) {
  Word w;
  w.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(w));
  return w;
}

}  // namespace

SElement s_mult(const SElement& a, const SElement& b) {
  SElement r;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms()) r.add(merge(wa, wb), ca * cb);
  return r;
}

SElementPoly s_mult(const SElementPoly& a, const SElementPoly& b) {
  SElementPoly r;
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) r.add(ma * mb, s_mult(ca, cb));
  return r;
}

SElement s_pow(const SElement& a, int n) {
  SElement r = s_one();
  for (int i = 0; i < n; ++i) r = s_mult(r, a);
  return r;
}

SElement s_partial(const SElement& a, Basis b) {
  SElement r;
  for (auto& [w, c] : a.terms()) {
    auto lo = std::lower_bound(w.begin(), w.end(), b);
    auto hi = std::upper_bound(lo, w.end(), b);
    long mult = hi - lo;
    if (mult == 0) continue;
    Word rest(w.begin(), lo);
    rest.insert(rest.end(), lo + 1, w.end());
    r.add(rest, c * ScalarPoly(mult));
  }
  return r;
}

SElement s_derive(const SElement& a, int times) {
  SElement cur = a;
  for (int t = 0; t < times && !cur.is_zero(); ++t) {
    SElement next;
    for (auto& [w, c] : cur.terms())
      for (size_t i = 0; i < w.size(); ++i) {
        if (order_of(w[i]) >= kMaxOrder) throw std::overflow_error("derivative order overflow");
        Word v = w;
        v[i] = basis(gen_of(w[i]), order_of(w[i]) + 1);
        std::sort(v.begin(), v.end());
        next.add(v, c);
      }
    cur = std::move(next);
  }
  return cur;
}

SElement s_from_r(const RElement& r) {
  SElement s;
  for (auto& [k, c] : r.terms()) s.add(k == kScalarKey ? Word{} : Word{static_cast<Basis>(k)}, c);
  return s;
}

int degree(const SElement& a) {
  int d = -1;
  for (auto& [w, c] : a.terms()) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

std::vector<Basis> support(const SElement& a) {
  std::vector<Basis> out;
  for (auto& [w, c] : a.terms()) out.insert(out.end(), w.begin(), w.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

template <class E>
E drop_derivatives_impl(const E& a) {
  E r;
  for (auto& [w, c] : a.terms())
    if (std::all_of(w.begin(), w.end(), [](Basis b) { return order_of(b) == 0; })) r.add(w, c);
  return r;
}

std::vector<std::string> s_word_tokens(const LCAlgebra& alg, const Word& w) {
  std::vector<std::string> out;
  for (size_t i = 0; i < w.size();) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    std::string tok = alg.basis_token(w[i], true);
    if (j - i > 1) {
      if (order_of(w[i]) > 0) tok = "(" + tok + ")";
      tok += "^" + std::to_string(j - i);
    }
    out.push_back(tok);
    i = j;
  }
  return out;
}

}  // namespace

SElement drop_derivatives(const SElement& a) { return drop_derivatives_impl(a); }
UElement drop_derivatives(const UElement& a) { return drop_derivatives_impl(a); }

std::string render(const LCAlgebra& alg, const SElement& a) { return render(alg, SElementPoly(a)); }

std::string render(const LCAlgebra& alg, const SElementPoly& p) {
  std::vector<RenderTerm> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto lt = lmono_tokens(it->first);
    for (auto wt = it->second.terms().rbegin(); wt != it->second.terms().rend(); ++wt) {
      auto toks = s_word_tokens(alg, wt->first);
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

struct Enveloping::Caches {
  Memo<std::pair<Basis, Basis>, RElement, BasisPairHash> bracket;
  Memo<std::pair<Basis, Word>, UElement, BasisWordHash> left_mult;
  Memo<Word, UElement, WordHash> symmetrize;
};

Enveloping::Enveloping(BracketFn bracket) : fn_(std::move(bracket)), caches_(std::make_unique<Caches>()) {}
Enveloping::~Enveloping() = default;
Enveloping::Enveloping(Enveloping&&) noexcept = default;
Enveloping& Enveloping::operator=(Enveloping&&) noexcept = default;

const RElement& Enveloping::bracket(Basis a, Basis b) const {
  auto key = std::make_pair(a, b);
  if (auto* hit = caches_->bracket.find(key)) return *hit;
  return caches_->bracket.put(key, fn_(a, b));
}

RElement Enveloping::bracket(const RElement& a, const RElement& b) const {
  RElement r;
  for (auto& [ka, ca] : a.terms()) {
    if (ka == kScalarKey) continue;
    for (auto& [kb, cb] : b.terms()) {
      if (kb == kScalarKey) continue;
      r.add_scaled(bracket(static_cast<Basis>(ka), static_cast<Basis>(kb)), ca * cb);
    }
  }
  return r;
}

UElement Enveloping::left_mult_word(Basis g, const Word& w) const {
  if (w.empty() || g <= w[0]) {
    Word out;
    out.reserve(w.size() + 1);
    out.push_back(g);
    out.insert(out.end(), w.begin(), w.end());
    return v_word(out);
  }
  auto key = std::make_pair(g, w);
  if (auto* hit = caches_->left_mult.find(key)) return *hit;
  Word rest = tail(w);
  // g w0 R = w0 (g R) + [g, w0] R
  UElement r = left_mult(w[0], left_mult_word(g, rest));
  for (auto& [k, c] : bracket(g, w[0]).terms()) {
    if (k == kScalarKey)
      r.add(rest, c);
    else
      r.add_scaled(left_mult_word(static_cast<Basis>(k), rest), c);
  }
  return caches_->left_mult.put(key, std::move(r));
}

UElement Enveloping::left_mult(Basis g, const UElement& b) const {
  UElement r;
  for (auto& [w, c] : b.terms()) r.add_scaled(left_mult_word(g, w), c);
  return r;
}

UElement Enveloping::mult(const UElement& a, const UElement& b) const {
  UElement r;
  for (auto& [w, c] : a.terms()) {
    UElement cur = b;
    for (auto it = w.rbegin(); it != w.rend() && !cur.is_zero(); ++it) cur = left_mult(*it, cur);
    r.add_scaled(cur, c);
  }
  return r;
}

const UElement& Enveloping::symmetrize_word(const Word& w) const {
  if (auto* hit = caches_->symmetrize.find(w)) return *hit;
  UElement r;
  if (w.size() <= 1) {
    r = v_word(w);
  } else {
    // Average over the choice of leftmost factor.
    ScalarPoly inv(Rational(1, static_cast<long>(w.size())));
    for (size_t i = 0; i < w.size();) {
      size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      Word rest(w.begin(), w.begin() + static_cast<long>(i));
      rest.insert(rest.end(), w.begin() + static_cast<long>(i) + 1, w.end());
      r.add_scaled(left_mult(w[i], symmetrize_word(rest)), inv * ScalarPoly(static_cast<long>(j - i)));
      i = j;
    }
  }
  return caches_->symmetrize.put(w, std::move(r));
}

UElement Enveloping::symmetrize(const SElement& s) const {
  UElement r;
  for (auto& [w, c] : s.terms()) r.add_scaled(symmetrize_word(w), c);
  return r;
}

SElement Enveloping::unsymmetrize(const UElement& u) const {
  // The symmetrization of a monomial is that ordered monomial plus terms of
  // lower degree, so peel off leading terms.
  SElement r;
  UElement rest = u;
  while (!rest.is_zero()) {
    auto& [w, c] = *rest.terms().rbegin();
    Word top = w;
    ScalarPoly coeff = c;
    r.add(top, coeff);
    rest.add_scaled(symmetrize_word(top), -coeff);
  }
  return r;
}

SElement Enveloping::star(const SElement& a, const SElement& b) const {
  return unsymmetrize(mult(symmetrize(a), symmetrize(b)));
}

}  // namespace hvertex
