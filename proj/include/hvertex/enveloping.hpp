#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hvertex/lca.hpp"
#include "hvertex/lin.hpp"
#include "hvertex/venv.hpp"

namespace hvertex {

// Commutative monomials (sorted words) of a symmetric algebra S(R) or S(g).
struct STag {};
using SElement = Lin<Word, STag, WordLess>;
using SElementPoly = LambdaPoly<SElement>;

// Ordered PBW monomials of an enveloping algebra. Same representation as
// VElement: U(R_L) and V(R) share the normal-form basis.
using UElement = VElement;
using UPoly = VPoly;

inline SElement s_one(const ScalarPoly& c = ScalarPoly(1)) { return SElement::of(Word{}, c); }
inline SElement s_basis(Basis b, const ScalarPoly& c = ScalarPoly(1)) { return SElement::of(Word{b}, c); }
SElement s_monomial(Word w, const ScalarPoly& c = ScalarPoly(1));
SElement s_mult(const SElement& a, const SElement& b);
SElementPoly s_mult(const SElementPoly& a, const SElementPoly& b);
SElement s_pow(const SElement& a, int n);
SElement s_partial(const SElement& a, Basis b);
// The derivation v_(i,k) -> v_(i,k+1).
SElement s_derive(const SElement& a, int times = 1);
SElement s_from_r(const RElement& r);
int degree(const SElement& a);
// Basis elements occurring in a, sorted.
std::vector<Basis> support(const SElement& a);
// Drops every monomial containing v_(i,k) with k >= 1.
SElement drop_derivatives(const SElement& a);
UElement drop_derivatives(const UElement& a);

std::string render(const LCAlgebra& alg, const SElement& a);
std::string render(const LCAlgebra& alg, const SElementPoly& p);

// Universal enveloping algebra of a Lie algebra spanned by Basis values,
// bracket valued in span + scalars (scalars central).
class Enveloping {
 public:
  using BracketFn = std::function<RElement(Basis, Basis)>;

  explicit Enveloping(BracketFn bracket);
  ~Enveloping();
  Enveloping(Enveloping&&) noexcept;
  Enveloping& operator=(Enveloping&&) noexcept;

  const RElement& bracket(Basis a, Basis b) const;
  RElement bracket(const RElement& a, const RElement& b) const;

  UElement left_mult(Basis g, const UElement& b) const;
  UElement mult(const UElement& a, const UElement& b) const;

  // Symmetrization S -> U and its inverse.
  UElement symmetrize(const SElement& s) const;
  SElement unsymmetrize(const UElement& u) const;
  // a * b := unsymmetrize(symmetrize(a) symmetrize(b)).
  SElement star(const SElement& a, const SElement& b) const;

 private:
  UElement left_mult_word(Basis g, const Word& w) const;
  const UElement& symmetrize_word(const Word& w) const;

  BracketFn fn_;
  struct Caches;
  std::unique_ptr<Caches> caches_;
};

}  // namespace hvertex
