#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hvertex/findiff.hpp"
#include "hvertex/lca.hpp"
#include "hvertex/lin.hpp"

namespace hvertex {

// Ordered PBW monomial v_1 * (v_2 * (... * |0>)); the empty word is |0>.
struct VTag {};
using VElement = Lin<Word, VTag, WordLess>;
using VPoly = LambdaPoly<VElement>;

inline VElement v_vac(const ScalarPoly& c = ScalarPoly(1)) { return VElement::of(Word{}, c); }
inline VElement v_basis(Basis b, const ScalarPoly& c = ScalarPoly(1)) { return VElement::of(Word{b}, c); }
VElement v_word(const Word& w, const ScalarPoly& c = ScalarPoly(1));
// R + C inside V: scalars go to multiples of the vacuum.
VElement from_r(const RElement& r);
VPoly from_r(const RPoly& p);
Word tail(const Word& w, size_t from = 1);

// Input form for normal_form. Derivative applies T_hbar `order` times.
struct ProductTree {
  enum class Kind { Leaf, Vacuum, Scalar, Product, Derivative, Sum };
  Kind kind = Kind::Vacuum;
  Basis leaf = 0;
  ScalarPoly scalar;
  int order = 1;
  std::vector<ProductTree> children;

  static ProductTree gen(Basis b);
  static ProductTree vac();
  static ProductTree number(const ScalarPoly& s);
  static ProductTree product(ProductTree l, ProductTree r);
  static ProductTree derivative(ProductTree c, int order = 1);
  static ProductTree sum(std::vector<ProductTree> terms);
};

enum class WickRoute { PreferRight, PreferLeft };

struct EngineOptions {
  // Step::Zero gives the ordinary enveloping vertex algebra (hbar = 0,
  // definite sums replaced by integrals).
  Step step = Step::Hbar;
  WickRoute route = WickRoute::PreferRight;
};

class VertexAlgebra {
 public:
  explicit VertexAlgebra(LCAlgebra alg, EngineOptions opts = {});
  ~VertexAlgebra();
  VertexAlgebra(VertexAlgebra&&) noexcept;
  VertexAlgebra& operator=(VertexAlgebra&&) noexcept;

  const LCAlgebra& lca() const { return alg_; }
  const EngineOptions& options() const { return opts_; }
  Step step() const { return opts_.step; }
  // hbar, or 0 in the classical engine.
  ScalarPoly hbar() const { return step_value(opts_.step); }

  // Generator hbar-bracket (classical bracket when step is Zero), T_hbar basis.
  const RPoly& gen_bracket(Basis a, Basis b) const;
  // Lie bracket of R_L: sum_{-T-h}^0 [a_lambda b] dlambda.
  const RElement& rl_bracket(Basis a, Basis b) const;

  VElement left_mult(Basis g, const VElement& b) const;
  VElement star(const VElement& a, const VElement& b) const;
  VElement apply_t(const VElement& a, int times = 1) const;
  // (T_hbar)_{n,hbar} a.
  VElement apply_falling_t(const VElement& a, int n) const;
  VElement normal_form(const ProductTree& t) const;

  // hbar-bracket in lambda.
  VPoly bracket(const VElement& a, const VElement& b) const;
  // -[b_{-lambda-T-2hbar} a], the skewsymmetric route.
  VPoly bracket_via_skew(const VElement& a, const VElement& b) const;
  VElement nprod(const VElement& a, int n, const VElement& b) const;
  // a*b + sum_0^lambda [a_x b] dx.
  VPoly sum_bracket(const VElement& a, const VElement& b) const;
  // a*b - b*a computed from the bracket: sum_{-T-h}^0 [a_lambda b] dlambda.
  VElement commutator_from_bracket(const VElement& a, const VElement& b) const;

  // LHS - RHS of the coefficient form of the Borcherds identity for
  // a_(m) b_(k) c and (a_(n+j) b)_(k+m-j+i) c.
  VElement borcherds_residual(const VElement& a, const VElement& b, const VElement& c, int m, int n, int k) const;

  // Replaces tau^j by T_hbar^j acting on the coefficient.
  VPoly resolve_tau(const VPoly& p) const;

  // Upper bound for the weight of any homogeneous component.
  Rational max_weight(const VElement& a) const;
  Rational max_weight(const Word& w) const;
  // a_(n)b vanishes whenever n exceeds this bound.
  long product_bound(const VElement& a, const VElement& b) const;

  std::vector<std::string> word_tokens(const Word& w) const;
  std::string render(const VElement& a) const;
  std::string render(const VPoly& p) const;

 private:
  VElement left_mult_word(Basis g, const Word& b) const;
  VElement star_words(const Word& a, const Word& b) const;
  VElement apply_t_word(const Word& w) const;
  VPoly bracket_words(const Word& a, const Word& b) const;
  VPoly right_wick(const Word& a, const Word& b) const;
  VPoly left_wick(const Word& a, const Word& c) const;

  LCAlgebra alg_;
  EngineOptions opts_;
  struct Caches;
  std::unique_ptr<Caches> caches_;
};

int degree(const VElement& a);

}  // namespace hvertex
