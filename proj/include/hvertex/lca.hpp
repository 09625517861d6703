#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hvertex/findiff.hpp"
#include "hvertex/lambda_poly.hpp"
#include "hvertex/lin.hpp"

namespace hvertex {

// Element of R + C. Key -1 is the scalar line, otherwise a packed Basis.
// Depending on context the basis is T^k u_i (classical) or T_hbar^k u_i.
using RKey = int32_t;
inline constexpr RKey kScalarKey = -1;
struct RTag {};
using RElement = Lin<RKey, RTag>;
using RPoly = LambdaPoly<RElement>;

inline RElement r_scalar(const ScalarPoly& c) { return RElement::of(kScalarKey, c); }
inline RElement r_gen(Basis b, const ScalarPoly& c = ScalarPoly(1)) { return RElement::of(b, c); }
// Raises the derivative order of every basis term; kills scalars.
RElement shift_order(const RElement& a, int times = 1);

// Replaces marker^j by j-fold application of apply_once to the coefficient.
template <class C, class F>
LambdaPoly<C> resolve_marker(const LambdaPoly<C>& p, Var marker, F&& apply_once) {
  LambdaPoly<C> r;
  for (auto& [m, c] : p.terms()) {
    int e = m.exponent(marker);
    if (e == 0) {
      r.add(m, c);
      continue;
    }
    C x = c;
    for (int i = 0; i < e && !x.is_zero(); ++i) x = apply_once(x);
    r.add(m.without(marker), x);
  }
  return r;
}

struct GeneratorInfo {
  std::string name;
  Rational weight;
};

enum class LcaErrorKind { WeightMismatch, SkewInconsistent, UnknownGenerator, InvalidWeight, DuplicateBracket };

class LcaError : public std::runtime_error {
 public:
  LcaError(LcaErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  LcaErrorKind kind() const { return kind_; }

 private:
  LcaErrorKind kind_;
};

// Classical bracket [u_i lambda u_j] in the T^k basis.
struct BracketDecl {
  int i = 0;
  int j = 0;
  RPoly value;
};

struct LcaDefinition {
  std::string name;
  std::vector<std::string> params;
  std::vector<GeneratorInfo> generators;
  std::vector<BracketDecl> brackets;
};

struct LoadOptions {
  // Off only for mutation testing: accepts data that fails the checks.
  bool validate = true;
};

class LCAlgebra {
 public:
  static LCAlgebra load(const LcaDefinition& def, LoadOptions opts = {});

  const std::string& name() const { return name_; }
  const std::vector<std::string>& params() const { return params_; }
  int size() const { return static_cast<int>(gens_.size()); }
  const GeneratorInfo& generator(int i) const { return gens_.at(i); }
  // -1 when absent.
  int index_of(std::string_view name) const;
  // Delta_i + k for v_(i,k).
  Rational weight(Basis b) const { return gens_[gen_of(b)].weight + Rational(order_of(b)); }

  const RPoly& classical(int i, int j) const { return classical_[i * size() + j]; }
  const RPoly& hbracket_gen(int i, int j) const { return hbar_[i * size() + j]; }

  // Classical lambda-bracket, both arguments and result in the T basis.
  RPoly lambda_bracket_R(const RElement& a, const RElement& b) const;
  // hbar-bracket, both arguments and result in the T_hbar basis.
  RPoly hbracket_R(const RElement& a, const RElement& b) const;
  // hbar-bracket of the homogeneous elements T^m u_i, T^n u_j from their
  // classical products; result in the T_hbar basis.
  RPoly hbracket_homogeneous(Basis a, Basis b) const;

  RElement to_hbar_basis(const RElement& t_basis) const;
  RElement to_t_basis(const RElement& hbar_basis) const;

  // True when every generator bracket is scalar valued.
  bool is_free_field() const;

  std::string basis_token(Basis b, bool hbar_basis = true) const;
  std::string render(const RElement& a, bool hbar_basis = true) const;
  std::string render(const RPoly& p, bool hbar_basis = true) const;

 private:
  std::string name_;
  std::vector<std::string> params_;
  std::vector<GeneratorInfo> gens_;
  std::vector<RPoly> classical_;
  std::vector<RPoly> hbar_;
};

// [P_{nu} c] for P a polynomial with R-coefficients: brackets each
// coefficient, result in variable nu (which must not occur in P).
RPoly bracket_left_poly(const LCAlgebra& alg, const RPoly& p, const RElement& c, Var nu, bool hbar = true);
// [a_{lambda} Q] for Q a polynomial in other variables.
RPoly bracket_right_poly(const LCAlgebra& alg, const RElement& a, const RPoly& q, Var lam, bool hbar = true);

}  // namespace hvertex
