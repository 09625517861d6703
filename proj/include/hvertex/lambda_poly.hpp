#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hvertex/scalar.hpp"

namespace hvertex {

// Formal variable (lambda, mu, x, tau, ...). Interned by name.
struct Var {
  uint16_t id = 0;
  friend bool operator==(Var a, Var b) { return a.id == b.id; }
  friend bool operator!=(Var a, Var b) { return a.id != b.id; }
  friend bool operator<(Var a, Var b) { return a.id < b.id; }
};

Var var(std::string_view name);
const std::string& var_name(Var v);

// Frequently used variables.
Var lambda_var();
Var mu_var();
Var nu_var();
Var tau_var();
// tau is the operator marker standing for T_hbar in substitutions.

// Sparse exponent vector: sorted (var id, exponent > 0) pairs.
class LMono {
 public:
  using Entry = std::pair<uint16_t, uint16_t>;
  using Storage = boost::container::small_vector<Entry, 3>;

  LMono() = default;
  static LMono of(Var v, int e = 1) {
    LMono m;
    if (e > 0) m.e_.push_back({v.id, static_cast<uint16_t>(e)});
    return m;
  }

  int exponent(Var v) const {
    for (auto& [id, e] : e_)
      if (id == v.id) return e;
    return 0;
  }
  int degree() const {
    int d = 0;
    for (auto& [id, e] : e_) d += e;
    return d;
  }
  bool is_one() const { return e_.empty(); }
  // Copy with the exponent of v set to e.
  LMono with(Var v, int e) const;
  LMono without(Var v) const { return with(v, 0); }
  const Storage& entries() const { return e_; }

  friend LMono operator*(const LMono& a, const LMono& b);
  friend bool operator==(const LMono& a, const LMono& b) { return a.e_ == b.e_; }

 private:
  Storage e_;
};

// Graded, then lexicographic on (var id, exponent).
struct LMonoLess {
  bool operator()(const LMono& a, const LMono& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    auto& x = a.entries();
    auto& y = b.entries();
    size_t n = std::min(x.size(), y.size());
    for (size_t i = 0; i < n; ++i) {
      if (x[i].first != y[i].first) return x[i].first > y[i].first;
      if (x[i].second != y[i].second) return x[i].second < y[i].second;
    }
    return x.size() < y.size();
  }
};

std::vector<std::string> lmono_tokens(const LMono& m);

// Polynomial in formal variables with coefficients in C. C must provide
// +=, -=, is_zero(), == and multiplication by ScalarPoly on the right.
template <class C>
class LambdaPoly {
 public:
  using Terms = std::map<LMono, C, LMonoLess>;

  LambdaPoly() = default;
  LambdaPoly(const C& c) { add(LMono{}, c); }
  static LambdaPoly term(const LMono& m, const C& c) {
    LambdaPoly p;
    p.add(m, c);
    return p;
  }

  void add(const LMono& m, const C& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void sub(const LMono& m, const C& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      C n;
      n -= c;
      terms_.emplace(m, std::move(n));
    } else {
      it->second -= c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LambdaPoly& operator+=(const LambdaPoly& o) {
    for (auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  LambdaPoly& operator-=(const LambdaPoly& o) {
    for (auto& [m, c] : o.terms_) sub(m, c);
    return *this;
  }
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  LambdaPoly operator-() const {
    LambdaPoly r;
    r -= *this;
    return r;
  }
  LambdaPoly scaled(const ScalarPoly& s) const {
    LambdaPoly r;
    if (s.is_zero()) return r;
    for (auto& [m, c] : terms_) r.add(m, c * s);
    return r;
  }

  bool is_zero() const { return terms_.empty(); }
  friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LambdaPoly& a, const LambdaPoly& b) { return !(a == b); }

  const Terms& terms() const { return terms_; }

  int degree(Var v) const {
    int d = -1;
    for (auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
    return d;
  }
  bool depends_on(Var v) const { return degree(v) > 0; }

  // Coefficient of v^k, as a polynomial in the remaining variables.
  LambdaPoly coeff(Var v, int k) const {
    LambdaPoly r;
    for (auto& [m, c] : terms_)
      if (m.exponent(v) == k) r.add(m.without(v), c);
    return r;
  }
  // Coefficient of the unit monomial.
  C constant_term() const {
    auto it = terms_.find(LMono{});
    return it == terms_.end() ? C{} : it->second;
  }

  LambdaPoly derivative(Var v) const {
    LambdaPoly r;
    for (auto& [m, c] : terms_) {
      int e = m.exponent(v);
      if (e > 0) r.add(m.with(v, e - 1), c * ScalarPoly(e));
    }
    return r;
  }

  LambdaPoly rename(Var from, Var to) const {
    if (from == to) return *this;
    LambdaPoly r;
    for (auto& [m, c] : terms_) {
      int e = m.exponent(from);
      if (e == 0) {
        r.add(m, c);
      } else {
        if (m.exponent(to)) throw std::logic_error("rename target variable already present");
        r.add(m.without(from).with(to, e), c);
      }
    }
    return r;
  }

  template <class F>
  auto map(F&& f) const -> LambdaPoly<decltype(f(std::declval<const C&>()))> {
    LambdaPoly<decltype(f(std::declval<const C&>()))> r;
    for (auto& [m, c] : terms_) r.add(m, f(c));
    return r;
  }

 private:
  Terms terms_;
};

using SPoly = LambdaPoly<ScalarPoly>;

inline SPoly poly_var(Var v) { return SPoly::term(LMono::of(v), ScalarPoly(1)); }
inline SPoly poly_const(const ScalarPoly& s) { return SPoly(s); }
inline SPoly poly_hbar() { return SPoly(ScalarPoly::hbar()); }

// Multiplies a scalar-valued polynomial into a C-valued one.
template <class C>
LambdaPoly<C> operator*(const SPoly& a, const LambdaPoly<C>& b) {
  LambdaPoly<C> r;
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) r.add(ma * mb, cb * ca);
  return r;
}

// Multiplies every coefficient by the monomial m.
template <class C>
LambdaPoly<C> shift_mono(const LambdaPoly<C>& p, const LMono& m) {
  if (m.is_one()) return p;
  LambdaPoly<C> r;
  for (auto& [mm, c] : p.terms()) r.add(mm * m, c);
  return r;
}

inline SPoly pow(const SPoly& p, int n) {
  SPoly r(ScalarPoly(1));
  for (int i = 0; i < n; ++i) r = p * r;
  return r;
}

// Replaces v by q everywhere (plain polynomial substitution).
template <class C>
LambdaPoly<C> substitute(const LambdaPoly<C>& p, Var v, const SPoly& q) {
  std::vector<SPoly> powers{SPoly(ScalarPoly(1))};
  LambdaPoly<C> r;
  for (auto& [m, c] : p.terms()) {
    int e = m.exponent(v);
    if (e == 0) {
      r.add(m, c);
      continue;
    }
    while (static_cast<int>(powers.size()) <= e) powers.push_back(q * powers.back());
    LMono rest = m.without(v);
    for (auto& [mq, cq] : powers[e].terms()) r.add(rest * mq, c * cq);
  }
  return r;
}

// Flattened rendering helpers.
std::string render(const SPoly& p);

}  // namespace hvertex
