#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hvertex/rational.hpp"

namespace hvertex {

// Slot 0 holds the exponent of hbar, slots 1.. the declared parameters.
inline constexpr int kScalarSlots = 8;

// Interned parameter names (level k, central charge c, ...). Ids start at 1.
int intern_param(std::string_view name);
// Returns 0 when unknown.
int find_param(std::string_view name);
const std::string& param_name(int id);

struct ScalarMono {
  std::array<uint16_t, kScalarSlots> e{};

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool is_one() const { return degree() == 0; }
  friend bool operator==(const ScalarMono& a, const ScalarMono& b) { return a.e == b.e; }
  friend ScalarMono operator*(const ScalarMono& a, const ScalarMono& b) {
    ScalarMono m;
    for (int i = 0; i < kScalarSlots; ++i) m.e[i] = a.e[i] + b.e[i];
    return m;
  }
};

// Graded lexicographic, parameters before hbar.
struct ScalarMonoLess {
  bool operator()(const ScalarMono& a, const ScalarMono& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (int i = 1; i < kScalarSlots; ++i)
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
    return a.e[0] < b.e[0];
  }
};

// Element of Q[hbar, params].
class ScalarPoly {
 public:
  using Terms = std::map<ScalarMono, Rational, ScalarMonoLess>;

  ScalarPoly() = default;
  ScalarPoly(const Rational& c) { if (!c.is_zero()) terms_.emplace(ScalarMono{}, c); }
  ScalarPoly(long c) : ScalarPoly(Rational(c)) {}

  static ScalarPoly hbar(int power = 1);
  static ScalarPoly param(int id, int power = 1);
  static ScalarPoly param(std::string_view name) { return param(intern_param(name)); }
  static ScalarPoly monomial(const ScalarMono& m, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  Rational constant_term() const;
  int hbar_degree() const;
  bool depends_on_hbar() const;

  ScalarPoly eval_hbar(const Rational& value) const;
  ScalarPoly eval_param(int id, const Rational& value) const;

  ScalarPoly& operator+=(const ScalarPoly& o);
  ScalarPoly& operator-=(const ScalarPoly& o);
  ScalarPoly& operator*=(const ScalarPoly& o) { return *this = *this * o; }
  ScalarPoly& operator*=(const Rational& c);
  friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
  friend ScalarPoly operator-(ScalarPoly a, const ScalarPoly& b) { return a -= b; }
  friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b);
  friend ScalarPoly operator*(ScalarPoly a, const Rational& c) { return a *= c; }
  ScalarPoly operator-() const;
  ScalarPoly pow(int n) const;

  friend bool operator==(const ScalarPoly& a, const ScalarPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ScalarPoly& a, const ScalarPoly& b) { return !(a == b); }

  const Terms& terms() const { return terms_; }
  void add_term(const ScalarMono& m, const Rational& c);

  // Canonical text, e.g. "2*h^2 + k - 1/2".
  std::string str() const;

 private:
  Terms terms_;
};

// "k^2*h"; empty for the unit monomial.
std::string render_scalar_mono(const ScalarMono& m);

// A flattened term of any rendered element: coefficient times a product of
// factor tokens. Factors are already in canonical order.
struct RenderTerm {
  Rational coeff;
  std::vector<std::string> factors;
};

// Joins terms as "a*b - (1/2)*c + 3"; "0" when empty.
std::string render_sum(const std::vector<RenderTerm>& terms);
// Tokens of a scalar monomial, params first, hbar last.
std::vector<std::string> scalar_mono_tokens(const ScalarMono& m);

}  // namespace hvertex
