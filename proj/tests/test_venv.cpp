#include <gtest/gtest.h>

#include "hvertex/builtins.hpp"
#include "hvertex/venv.hpp"

using namespace hvertex;

namespace {

struct Fixture {
  explicit Fixture(const char* name) : V(load_builtin(name)) {}
  VertexAlgebra V;
  Basis b(const char* g, int k = 0) const { return basis(V.lca().index_of(g), k); }
  VElement g(const char* n, int k = 0) const { return v_basis(b(n, k)); }
  VElement word(std::initializer_list<Basis> w) const { return v_word(Word(w)); }
};

SPoly lam() { return poly_var(lambda_var()); }
ScalarPoly h() { return ScalarPoly::hbar(); }

}  // namespace

TEST(NormalForm, BetaGammaExamples) {
  Fixture f("betagamma");
  auto& V = f.V;
  VElement x = f.g("x"), y = f.g("y");
  EXPECT_EQ(V.star(y, x), f.word({f.b("x"), f.b("y")}) - v_vac(h()));
  EXPECT_EQ(V.star(v_vac(), x), x);
  EXPECT_EQ(V.star(x, v_vac()), x);
  VElement left = V.star(V.star(x, x), y);
  VElement right = V.star(x, V.star(x, y));
  EXPECT_EQ(left - right, f.g("x", 1) * ScalarPoly(2));
  auto tree = ProductTree::product(ProductTree::gen(f.b("y")), ProductTree::gen(f.b("x")));
  EXPECT_EQ(V.normal_form(tree), V.star(y, x));
  EXPECT_EQ(V.render(V.star(y, x)), "x*y - h");
}

TEST(ApplyT, Examples) {
  Fixture f("betagamma");
  auto& V = f.V;
  EXPECT_TRUE(V.apply_t(v_vac()).is_zero());
  EXPECT_EQ(V.apply_t(f.g("x")), f.g("x", 1));
  VElement xy = f.word({f.b("x"), f.b("y")});
  EXPECT_EQ(V.apply_t(xy), f.word({f.b("x", 1), f.b("y")}) + f.word({f.b("x"), f.b("y", 1)}));
}

TEST(Bracket, Examples) {
  Fixture bg("betagamma");
  VElement x = bg.g("x"), y = bg.g("y");
  EXPECT_EQ(bg.V.bracket(x, bg.V.star(x, y)), VPoly(x));
  EXPECT_TRUE(bg.V.bracket(x, v_vac()).is_zero());
  EXPECT_TRUE(bg.V.bracket(v_vac(), x).is_zero());
  Fixture fb("free-boson");
  VElement a = fb.g("alpha");
  VPoly expect = (lam() + poly_hbar()).scaled(ScalarPoly(2)) * VPoly(a);
  EXPECT_EQ(fb.V.bracket(a, fb.V.star(a, a)), expect);
}

TEST(NProd, Examples) {
  Fixture fb("free-boson");
  VElement a = fb.g("alpha");
  EXPECT_EQ(fb.V.nprod(a, 0, a), v_vac(h()));
  EXPECT_EQ(fb.V.nprod(a, 1, a), v_vac());
  EXPECT_TRUE(fb.V.nprod(a, 2, a).is_zero());
  Fixture bg("betagamma");
  VElement x = bg.g("x"), y = bg.g("y");
  EXPECT_EQ(bg.V.nprod(x, -2, v_vac()), bg.g("x", 1));
  EXPECT_EQ(bg.V.nprod(x, -1, y), bg.V.star(x, y));
  EXPECT_EQ(bg.V.render(bg.V.nprod(x, -2, v_vac())), "Th x");
}

TEST(OperatorSubstitute, Examples) {
  Fixture bg("betagamma");
  VElement x = bg.g("x"), y = bg.g("y");
  // Skewsymmetric route reproduces [x_lambda y] = 1 from [y_lambda x] = -1.
  EXPECT_EQ(bg.V.bracket_via_skew(x, y), VPoly(v_vac()));
  VPoly p = lam() * VPoly(x);
  VPoly s = bg.V.resolve_tau(substitute(p, lambda_var(), lam() + poly_var(tau_var())));
  EXPECT_EQ(s, lam() * VPoly(x) + VPoly(bg.g("x", 1)));
}

TEST(SumBracket, Examples) {
  Fixture bg("betagamma");
  VElement x = bg.g("x"), y = bg.g("y");
  EXPECT_EQ(bg.V.sum_bracket(v_vac(), x), VPoly(x));
  EXPECT_EQ(bg.V.sum_bracket(x, y), VPoly(bg.word({bg.b("x"), bg.b("y")})) + lam() * VPoly(v_vac()));
  VPoly at0 = substitute(bg.V.sum_bracket(x, y), lambda_var(), SPoly());
  EXPECT_EQ(at0, VPoly(bg.V.star(x, y)));
}

TEST(Virasoro, Products) {
  Fixture vir("virasoro");
  VElement L = vir.g("L");
  // L_(0)L = T_h L + ... read off the bracket at lambda = -h gives Th L.
  VPoly b = vir.V.bracket(L, L);
  EXPECT_EQ(substitute(b, lambda_var(), -poly_hbar()), VPoly(vir.g("L", 1)));
  // L_(3)L = c/2 |0>
  EXPECT_EQ(vir.V.nprod(L, 3, L), v_vac(ScalarPoly::param("c") * ScalarPoly(Rational(1, 2))));
}

TEST(Borcherds, Examples) {
  Fixture bg("betagamma");
  auto& V = bg.V;
  VElement x = bg.g("x"), y = bg.g("y");
  EXPECT_TRUE(V.borcherds_residual(x, y, v_vac(), 0, 0, 0).is_zero());
  EXPECT_TRUE(V.borcherds_residual(x, y, x, -1, 3, -1).is_zero());
  EXPECT_TRUE(V.borcherds_residual(v_vac(), x, y, 1, 0, 0).is_zero());
}

TEST(Borcherds, GeneratorTriples) {
  for (const char* name : {"betagamma", "free-boson", "affine-sl2", "virasoro"}) {
    Fixture f(name);
    auto& V = f.V;
    int g = V.lca().size();
    for (int ia = 0; ia < g; ++ia)
      for (int ib = 0; ib < g; ++ib)
        for (int ic = 0; ic < g; ++ic)
          for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n)
              for (int k = -2; k <= 2; ++k) {
                VElement r = V.borcherds_residual(v_basis(basis(ia, 0)), v_basis(basis(ib, 0)),
                                                  v_basis(basis(ic, 0)), m, n, k);
                EXPECT_TRUE(r.is_zero()) << name << " " << m << " " << n << " " << k << ": " << V.render(r);
              }
  }
}

TEST(Borcherds, SensitiveToBrokenJacobi) {
  LCAlgebra bad = load_algebra_text(
      "algebra bad\nparam c\ngenerator L weight 2\nbracket [L, L] = T L + 3*lambda*L + (c/12)*lambda^3\n",
      LoadOptions{false});
  VertexAlgebra V(std::move(bad));
  VElement L = v_basis(basis(0, 0));
  bool found = false;
  for (int m = -1; m <= 2 && !found; ++m)
    for (int n = 0; n <= 2 && !found; ++n)
      for (int k = 0; k <= 2 && !found; ++k) found = !V.borcherds_residual(L, L, L, m, n, k).is_zero();
  EXPECT_TRUE(found);
}
