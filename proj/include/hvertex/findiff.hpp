#pragma once

#include <stdexcept>
#include <vector>

#include "hvertex/lambda_poly.hpp"

namespace hvertex {

// Step of the difference calculus: the formal hbar, or 0 (ordinary
// calculus: differences become derivatives, definite sums become integrals).
enum class Step { Hbar, Zero };

inline ScalarPoly step_value(Step s) { return s == Step::Hbar ? ScalarPoly::hbar() : ScalarPoly(); }

namespace findiff {

// Coefficients (index j = power of x) of (x)_{n,h}.
const std::vector<ScalarPoly>& falling_row(int n, Step step);
// Coefficients (index k) of x^m in the falling basis (x)_{k,h}.
const std::vector<ScalarPoly>& to_falling_row(int m, Step step);
// Monomial coefficients of the antidifference of x^m whose falling-basis
// expansion has zero constant term. For Step::Zero this is x^{m+1}/(m+1).
const std::vector<ScalarPoly>& antidifference_row(int m, Step step);
// Monomial coefficients of Delta_h[x^m].
const std::vector<ScalarPoly>& difference_row(int m, Step step);

// (var + shift)_{n,h} expanded in monomials.
SPoly falling_factorial(Var v, int n, const SPoly& shift = SPoly(), Step step = Step::Hbar);

template <class C>
struct FallingBasisPoly {
  Var var;
  // coeffs[n] multiplies (var)_{n,h}; polynomials in the other variables.
  std::vector<LambdaPoly<C>> coeffs;
};

template <class C>
FallingBasisPoly<C> to_falling(const LambdaPoly<C>& p, Var v, Step step = Step::Hbar) {
  FallingBasisPoly<C> r{v, {}};
  for (auto& [m, c] : p.terms()) {
    int e = m.exponent(v);
    LMono rest = m.without(v);
    auto& row = to_falling_row(e, step);
    if (r.coeffs.size() < row.size()) r.coeffs.resize(row.size());
    for (size_t k = 0; k < row.size(); ++k)
      if (!row[k].is_zero()) r.coeffs[k].add(rest, c * row[k]);
  }
  while (!r.coeffs.empty() && r.coeffs.back().is_zero()) r.coeffs.pop_back();
  return r;
}

template <class C>
LambdaPoly<C> to_monomial(const FallingBasisPoly<C>& f, Step step = Step::Hbar) {
  LambdaPoly<C> r;
  for (size_t n = 0; n < f.coeffs.size(); ++n) {
    auto& row = falling_row(static_cast<int>(n), step);
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j].is_zero()) continue;
      r += shift_mono(f.coeffs[n], LMono::of(f.var, static_cast<int>(j))).map([&](const C& c) { return c * row[j]; });
    }
  }
  return r;
}

template <class C>
LambdaPoly<C> finite_difference(const LambdaPoly<C>& p, Var v, Step step = Step::Hbar) {
  LambdaPoly<C> r;
  for (auto& [m, c] : p.terms()) {
    int e = m.exponent(v);
    auto& row = difference_row(e, step);
    for (size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) r.add(m.with(v, static_cast<int>(j)), c * row[j]);
  }
  return r;
}

namespace detail {

template <class C>
LambdaPoly<C> apply_antidifference(const LambdaPoly<C>& p, Var v, const SPoly& lo, const SPoly& hi, Step step) {
  if (lo.depends_on(v) || hi.depends_on(v)) throw std::invalid_argument("summation extremes depend on the summation variable");
  std::vector<SPoly> hp{SPoly(ScalarPoly(1))}, lp{SPoly(ScalarPoly(1))};
  std::map<int, SPoly> per_exponent;
  auto evaluated = [&](int e) -> const SPoly& {
    auto it = per_exponent.find(e);
    if (it != per_exponent.end()) return it->second;
    auto& row = antidifference_row(e, step);
    while (hp.size() < row.size()) {
      hp.push_back(hi * hp.back());
      lp.push_back(lo * lp.back());
    }
    SPoly acc;
    for (size_t j = 1; j < row.size(); ++j)
      if (!row[j].is_zero()) acc += (hp[j] - lp[j]).scaled(row[j]);
    return per_exponent.emplace(e, std::move(acc)).first->second;
  };
  LambdaPoly<C> r;
  for (auto& [m, c] : p.terms()) {
    const SPoly& acc = evaluated(m.exponent(v));
    LMono rest = m.without(v);
    for (auto& [mq, cq] : acc.terms()) r.add(rest * mq, c * cq);
  }
  return r;
}

}  // namespace detail

// Sum_{lo}^{hi} p delta v = F(hi) - F(lo) with F the antidifference in v.
template <class C>
LambdaPoly<C> definite_sum(const LambdaPoly<C>& p, Var v, const SPoly& lo, const SPoly& hi, Step step = Step::Hbar) {
  return detail::apply_antidifference(p, v, lo, hi, step);
}

// Integral_{lo}^{hi} p dv via monomial antiderivatives.
template <class C>
LambdaPoly<C> integral(const LambdaPoly<C>& p, Var v, const SPoly& lo, const SPoly& hi) {
  return detail::apply_antidifference(p, v, lo, hi, Step::Zero);
}

}  // namespace findiff
}  // namespace hvertex
