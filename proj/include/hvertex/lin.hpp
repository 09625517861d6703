#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <map>
#include <utility>

#include "hvertex/scalar.hpp"

namespace hvertex {

// Basis element v_(i,k) = T_hbar^k u_i packed as (i << 8) | k, so that the
// numeric order is the lexicographic order on (i, k).
using Basis = uint16_t;
inline constexpr int kMaxOrder = 255;

constexpr Basis basis(int gen, int order) { return static_cast<Basis>((gen << 8) | order); }
constexpr int gen_of(Basis b) { return b >> 8; }
constexpr int order_of(Basis b) { return b & 0xff; }

// Weakly increasing sequence of basis elements: an ordered PBW monomial
// (or a commutative monomial, stored sorted).
using Word = boost::container::small_vector<Basis, 6>;

struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Finite linear combination of keys with ScalarPoly coefficients.
template <class K, class Tag, class KLess = std::less<K>>
class Lin {
 public:
  using Key = K;
  using Terms = std::map<K, ScalarPoly, KLess>;

  Lin() = default;
  static Lin of(const K& k, const ScalarPoly& c = ScalarPoly(1)) {
    Lin r;
    r.add(k, c);
    return r;
  }

  void add(const K& k, const ScalarPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void sub(const K& k, const ScalarPoly& c) { add(k, -c); }
  // this += other * s
  void add_scaled(const Lin& o, const ScalarPoly& s) {
    if (s.is_zero()) return;
    for (auto& [k, c] : o.terms_) add(k, c * s);
  }

  Lin& operator+=(const Lin& o) {
    for (auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  Lin& operator-=(const Lin& o) {
    for (auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  friend Lin operator+(Lin a, const Lin& b) { return a += b; }
  friend Lin operator-(Lin a, const Lin& b) { return a -= b; }
  Lin operator-() const {
    Lin r;
    r -= *this;
    return r;
  }
  friend Lin operator*(const Lin& a, const ScalarPoly& s) {
    Lin r;
    if (s.is_zero()) return r;
    for (auto& [k, c] : a.terms_) r.add(k, c * s);
    return r;
  }
  friend Lin operator*(const ScalarPoly& s, const Lin& a) { return a * s; }

  bool is_zero() const { return terms_.empty(); }
  friend bool operator==(const Lin& a, const Lin& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Lin& a, const Lin& b) { return !(a == b); }

  ScalarPoly coeff(const K& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? ScalarPoly() : it->second;
  }
  const Terms& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  template <class F>
  Lin map_scalars(F&& f) const {
    Lin r;
    for (auto& [k, c] : terms_) r.add(k, f(c));
    return r;
  }

 private:
  Terms terms_;
};

}  // namespace hvertex
