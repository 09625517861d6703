#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "hvertex/enveloping.hpp"
#include "hvertex/venv.hpp"
#include "hvertex/zhu.hpp"

namespace hvertex {

enum class StarErrorKind { NotSymplectic, OrderTooSmall, FreeFieldUnavailable };

class StarError : public std::runtime_error {
 public:
  StarError(StarErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  StarErrorKind kind() const { return kind_; }

 private:
  StarErrorKind kind_;
};

enum class StarMode { Oracle, GeneralFormula, FreeField };

// Substitution used for the D operators inside the general formula.
// AsHbar: D^{-lambda-d-h} (at h = 0 this is D^{-lambda-d}).
// Shifted: D^{lambda-d}, as written for the integral case.
enum class DReading { AsHbar, Shifted };

// Star-products on S(R) pulled back from V(R) through the symmetrization
// phi = psi . gamma. With a classical engine (Step::Zero) everything is the
// h = 0 theory: integrals instead of definite sums.
class StarEngine {
 public:
  explicit StarEngine(const VertexAlgebra& v);
  ~StarEngine();
  StarEngine(StarEngine&&) noexcept;

  const VertexAlgebra& vertex() const { return v_; }
  // U(R_L) with bracket sum_{-T-h}^0 [a_x b] dx.
  const Enveloping& rl() const { return rl_; }

  UElement u_rl_mult(const UElement& a, const UElement& b) const { return rl_.mult(a, b); }
  UElement gamma(const SElement& a) const { return rl_.symmetrize(a); }
  SElement gamma_inv(const UElement& a) const { return rl_.unsymmetrize(a); }
  // psi(a B) = a * B; the identity on normal forms.
  VElement psi(const UElement& a) const { return a; }
  UElement psi_inv(const VElement& a) const { return a; }
  VElement phi(const SElement& a) const { return psi(gamma(a)); }
  SElement phi_inv(const VElement& a) const { return gamma_inv(psi_inv(a)); }
  SElementPoly phi_inv(const VPoly& p) const;

  // Gutt product on S(R) for the Lie algebra R_L.
  SElement gutt(const SElement& a, const SElement& b) const { return rl_.star(a, b); }
  SElementPoly gutt(const SElement& a, const SElementPoly& b) const;
  SElementPoly gutt(const SElementPoly& a, const SElement& b) const;
  SElement chiral_star(const SElement& a, const SElement& b) const;

  // L^lambda_a(x) = psi^-1 sum_{-T-h}^lambda [psi(x)_z a] dz.
  UPoly L_op(const UElement& x, const RElement& a) const;

  SElementPoly sum_star_bracket(const SElement& a, const SElement& b, StarMode mode,
                                DReading reading = DReading::AsHbar) const;
  // I_{mu,*}(u_j, a) through nested brackets; polynomial in mu.
  SElementPoly D_op(Basis j, const SElement& a, Var mu) const;

 private:
  SElementPoly general_formula(const SElement& a, const SElement& b, DReading reading) const;
  SElementPoly free_field(const SElement& a, const SElement& b) const;
  // D^{...}_i(a) - u_i * a for the chosen reading; polynomial in lambda.
  SElementPoly m_op(Basis i, const SElement& a, DReading reading) const;
  SElementPoly m_op(Basis i, const SElementPoly& a, DReading reading) const;
  SElementPoly free_L(Basis i, const SElement& a) const;
  SElementPoly free_L(Basis i, const SElementPoly& a) const;
  const RPoly& nested(Basis j, const Word& seq, Var mu) const;
  RPoly r_bracket(const RPoly& p, Basis c, Var v) const;

  const VertexAlgebra& v_;
  Enveloping rl_;
  struct Caches;
  std::unique_ptr<Caches> caches_;
};

// Gutt product on S(g) from BCH (Dynkin form) truncated at the given order.
SElement gutt_bch(const Enveloping& env, const SElement& a, const SElement& b, int order);
// Moyal-Weyl product for a Zhu algebra with scalar brackets; pi is scaled.
SElement moyal_star(const ZhuAlgebra& zhu, const SElement& a, const SElement& b,
                    const ScalarPoly& scale = ScalarPoly(1));

// Deformation quantization of the Poisson vertex algebra S(R): the general
// formula on a classical (Step::Zero) engine.
SElementPoly quantize_lambda(const StarEngine& classical, const SElement& a, const SElement& b,
                             DReading reading = DReading::AsHbar);
// Classical Poisson lambda-bracket on S(R) by the Leibniz rules.
SElementPoly pva_bracket(const LCAlgebra& alg, const SElement& a, const SElement& b);

}  // namespace hvertex
