#pragma once

#include <vector>

#include "hvertex/enveloping.hpp"
#include "hvertex/venv.hpp"

namespace hvertex {

// Zhu quotient of V(R): the Lie algebra g on the generators u_i = v_(i,0)
// with bracket h [u_i _{-h} u_j]_h modulo T_h R, and U(g).
class ZhuAlgebra {
 public:
  explicit ZhuAlgebra(const VertexAlgebra& v);

  const VertexAlgebra& vertex() const { return v_; }
  // Keys are basis(l, 0) or kScalarKey.
  const RElement& lie_bracket(int i, int j) const;
  const Enveloping& enveloping() const { return env_; }

  UElement mult(const UElement& a, const UElement& b) const { return env_.mult(a, b); }
  // V -> U(g): deletes monomials containing a T_h factor.
  UElement q(const VElement& a) const { return drop_derivatives(a); }
  // S(R) -> S(g).
  SElement p(const SElement& a) const { return drop_derivatives(a); }

  // Poisson bracket on S(g) from the generator brackets, by Leibniz.
  SElement poisson(const SElement& a, const SElement& b) const;
  // Generator bracket pairs violating antisymmetry or Jacobi.
  std::vector<std::string> validate() const;

 private:
  const VertexAlgebra& v_;
  Enveloping env_;
};

}  // namespace hvertex
