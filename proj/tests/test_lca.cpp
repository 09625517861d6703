#include <gtest/gtest.h>

#include "hvertex/builtins.hpp"
#include "hvertex/parser.hpp"
#include "test_util.hpp"

using namespace hvertex;

namespace {

SPoly lam() { return poly_var(lambda_var()); }
RPoly rp(const SPoly& s) { return s.map([](const ScalarPoly& c) { return r_scalar(c); }); }
RElement v(const LCAlgebra& a, const char* g, int k = 0) { return r_gen(basis(a.index_of(g), k)); }

RPoly reflect_hbar(const RPoly& p) {
  RPoly s = substitute(p, lambda_var(), -lam() - poly_var(tau_var()) - poly_hbar().scaled(ScalarPoly(2)));
  return resolve_marker(s, tau_var(), [](const RElement& c) { return shift_order(c); });
}

std::vector<RElement> basis_elements(const LCAlgebra& a, int max_order) {
  std::vector<RElement> out;
  for (int i = 0; i < a.size(); ++i)
    for (int k = 0; k <= max_order; ++k) out.push_back(r_gen(basis(i, k)));
  return out;
}

}  // namespace

TEST(Load, BetaGamma) {
  auto a = load_builtin("betagamma");
  EXPECT_EQ(a.size(), 2);
  EXPECT_EQ(a.classical(0, 1), rp(SPoly(ScalarPoly(1))));
  EXPECT_EQ(a.classical(1, 0), rp(SPoly(ScalarPoly(-1))));
  EXPECT_TRUE(a.classical(0, 0).is_zero());
  EXPECT_TRUE(a.is_free_field());
}

TEST(Load, VirasoroAndErrors) {
  auto vir = load_builtin("virasoro.lca");
  EXPECT_FALSE(vir.is_free_field());
  try {
    load_algebra_text("algebra bad\ngenerator u weight 1\nbracket [u, u] = lambda^2\n");
    FAIL() << "expected WeightMismatch";
  } catch (const LcaError& e) {
    EXPECT_EQ(e.kind(), LcaErrorKind::WeightMismatch);
  }
  try {
    load_algebra_text("algebra bad\nparam c\ngenerator L weight 2\nbracket [L, L] = T L + 3*lambda*L + (c/12)*lambda^3\n");
    FAIL() << "expected SkewInconsistent";
  } catch (const LcaError& e) {
    EXPECT_EQ(e.kind(), LcaErrorKind::SkewInconsistent);
  }
  try {
    load_algebra_text("algebra bad\ngenerator x weight 1/2\ngenerator y weight 1/2\nbracket [x, y] = 1\nbracket [y, x] = 1\n");
    FAIL() << "expected SkewInconsistent";
  } catch (const LcaError& e) {
    EXPECT_EQ(e.kind(), LcaErrorKind::SkewInconsistent);
  }
  EXPECT_NO_THROW(load_algebra_text("algebra ok\ngenerator x weight 1/2\ngenerator y weight 1/2\nbracket [x, y] = 1\nbracket [y, x] = -1\n"));
  try {
    load_algebra_text("algebra bad\ngenerator u weight -1\n");
    FAIL() << "expected InvalidWeight";
  } catch (const LcaError& e) {
    EXPECT_EQ(e.kind(), LcaErrorKind::InvalidWeight);
  }
  LoadOptions loose;
  loose.validate = false;
  EXPECT_NO_THROW(load_algebra_text("algebra bad\nparam c\ngenerator L weight 2\nbracket [L, L] = T L + 3*lambda*L + (c/12)*lambda^3\n", loose));
}

TEST(Classical, Sesquilinearity) {
  auto bg = load_builtin("betagamma");
  EXPECT_EQ(bg.lambda_bracket_R(v(bg, "x", 1), v(bg, "y")), rp(-lam()));
  EXPECT_TRUE(bg.lambda_bracket_R(v(bg, "x"), v(bg, "x")).is_zero());
  auto fb = load_builtin("free-boson");
  EXPECT_EQ(fb.lambda_bracket_R(v(fb, "alpha"), v(fb, "alpha", 1)), rp(pow(lam(), 2)));
}

TEST(HBracket, GeneratorExamples) {
  auto bg = load_builtin("betagamma");
  EXPECT_EQ(bg.hbracket_R(v(bg, "x"), v(bg, "y")), rp(SPoly(ScalarPoly(1))));
  auto fb = load_builtin("free-boson");
  EXPECT_EQ(fb.hbracket_R(v(fb, "alpha"), v(fb, "alpha")), rp(lam() + poly_hbar()));
  auto vir = load_builtin("virasoro");
  RPoly b = vir.hbracket_R(v(vir, "L"), v(vir, "L"));
  RPoly at = substitute(b, lambda_var(), -poly_hbar());
  EXPECT_EQ(at, RPoly(v(vir, "L", 1)));
  // The Virasoro central term contributes (c/12)(lambda + 2h)(lambda + h)lambda.
  EXPECT_EQ(vir.render(b), "(1/12)*c*lambda^3 + (1/4)*c*h*lambda^2 + 2*lambda*L + (1/6)*c*h^2*lambda + Th L + 2*h*L");
}

TEST(TBasis, ConversionExamples) {
  auto fb = load_builtin("free-boson");
  ScalarPoly h = ScalarPoly::hbar();
  EXPECT_EQ(fb.to_hbar_basis(v(fb, "alpha", 1)), v(fb, "alpha", 1) - v(fb, "alpha") * h);
  // T^2 u = v2 - 3h v1 + 2h^2 v0 for weight 1.
  EXPECT_EQ(fb.to_hbar_basis(v(fb, "alpha", 2)),
            v(fb, "alpha", 2) - v(fb, "alpha", 1) * (ScalarPoly(3) * h) + v(fb, "alpha") * (ScalarPoly(2) * h * h));
  EXPECT_EQ(fb.to_hbar_basis(v(fb, "alpha")), v(fb, "alpha"));
  EXPECT_EQ(fb.to_t_basis(v(fb, "alpha")), v(fb, "alpha"));
}

TEST(TBasis, MatchesOperatorExpansion) {
  // Oracle: apply T_h = T + h(Delta + m) repeatedly in the T basis.
  for (auto& name : builtin_names()) {
    auto a = load_builtin(name);
    for (int g = 0; g < a.size(); ++g) {
      RElement x = r_gen(basis(g, 0));
      for (int k = 1; k <= 5; ++k) {
        RElement next;
        for (auto& [key, c] : x.terms()) {
          auto b = static_cast<Basis>(key);
          next.add(basis(g, order_of(b) + 1), c);
          next.add(key, c * ScalarPoly::hbar() * ScalarPoly(a.weight(b)));
        }
        x = next;
        EXPECT_EQ(a.to_t_basis(r_gen(basis(g, k))), x);
        EXPECT_EQ(a.to_hbar_basis(x), r_gen(basis(g, k)));
      }
    }
  }
}

TEST(TBasis, RoundTripRandom) {
  testutil::Draw d(17);
  auto a = load_builtin("affine-sl2");
  for (int t = 0; t < 50; ++t) {
    RElement x;
    for (int s = 0; s < 4; ++s)
      x.add(basis(static_cast<int>(d.below(a.size())), static_cast<int>(d.between(0, 5))), testutil::random_scalar(d, 2, true));
    x.add(kScalarKey, testutil::random_scalar(d));
    EXPECT_EQ(a.to_t_basis(a.to_hbar_basis(x)), x);
    EXPECT_EQ(a.to_hbar_basis(a.to_t_basis(x)), x);
  }
}

TEST(HBracket, AxiomsOnAllBuiltins) {
  Var mu = mu_var(), nu = nu_var();
  for (auto& name : builtin_names()) {
    auto A = load_builtin(name);
    auto els = basis_elements(A, 2);
    for (auto& a : els)
      for (auto& b : els) {
        RPoly ab = A.hbracket_R(a, b);
        EXPECT_EQ(ab, -reflect_hbar(A.hbracket_R(b, a))) << name;
        // Independent route through the homogeneous formula in the T basis.
        Basis ta = static_cast<Basis>(a.terms().begin()->first), tb = static_cast<Basis>(b.terms().begin()->first);
        RPoly hom = A.hbracket_homogeneous(ta, tb);
        EXPECT_EQ(A.hbracket_R(A.to_hbar_basis(r_gen(ta)), A.to_hbar_basis(r_gen(tb))), hom) << name;
        EXPECT_EQ(A.hbracket_R(shift_order(a), b), (-lam() - poly_hbar()) * ab) << name;
        // hbar = 0 specialization recovers the classical bracket.
        auto at0 = [](const RPoly& p) {
          return p.map([](const RElement& e) { return e.map_scalars([](const ScalarPoly& s) { return s.eval_hbar(Rational(0)); }); });
        };
        EXPECT_EQ(at0(hom), A.lambda_bracket_R(r_gen(ta), r_gen(tb))) << name;
      }
    auto gens = basis_elements(A, 1);
    for (auto& a : gens)
      for (auto& b : gens)
        for (auto& c : gens) {
          RPoly lhs = bracket_left_poly(A, A.hbracket_R(a, b), c, nu);
          lhs = substitute(lhs, nu, lam() + poly_var(mu) + poly_hbar());
          RPoly r1 = bracket_right_poly(A, a, A.hbracket_R(b, c).rename(lambda_var(), mu), lambda_var());
          RPoly r2 = bracket_right_poly(A, b, A.hbracket_R(a, c), mu);
          EXPECT_EQ(lhs, r1 - r2) << name;
        }
  }
}

TEST(HBracket, RightSesquilinearity) {
  auto vir = load_builtin("virasoro");
  RElement L = v(vir, "L");
  RPoly base = vir.hbracket_R(L, L);
  RPoly expect = resolve_marker((lam() + poly_var(tau_var()) + poly_hbar()) * base, tau_var(),
                                [](const RElement& c) { return shift_order(c); });
  EXPECT_EQ(vir.hbracket_R(L, shift_order(L)), expect);
}
