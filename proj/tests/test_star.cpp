#include <gtest/gtest.h>

#include "element_util.hpp"
#include "hvertex/star.hpp"

using namespace hvertex;
using namespace testutil;

namespace {

ScalarPoly h() { return ScalarPoly::hbar(); }
ScalarPoly half() { return ScalarPoly(Rational(1, 2)); }
SPoly lam() { return poly_var(lambda_var()); }

struct Fixture {
  explicit Fixture(const char* name, Step step = Step::Hbar)
      : V(load_builtin(name), EngineOptions{step, WickRoute::PreferRight}), Z(V), E(V) {}
  VertexAlgebra V;
  ZhuAlgebra Z;
  StarEngine E;
  Basis b(const char* g, int k = 0) const { return basis(V.lca().index_of(g), k); }
  SElement s(const char* g, int k = 0) const { return s_basis(b(g, k)); }
  SElement mono(std::initializer_list<Basis> w) const { return s_monomial(Word(w)); }
};

const char* kAll[] = {"betagamma", "free-boson", "affine-sl2", "virasoro"};

UPoly apply_L(const StarEngine& E, const UPoly& p, const RElement& a) {
  UPoly r;
  for (auto& [m, c] : p.terms()) r += shift_mono(E.L_op(c, a), m);
  return r;
}

}  // namespace

TEST(URL, Examples) {
  Fixture bg("betagamma");
  UElement x = v_basis(bg.b("x")), y = v_basis(bg.b("y"));
  EXPECT_EQ(bg.E.u_rl_mult(y, x), v_word(Word{bg.b("x"), bg.b("y")}) - v_vac(h()));
  EXPECT_EQ(bg.E.u_rl_mult(v_vac(), x), x);
  Fixture fb("free-boson");
  Basis a = fb.b("alpha");
  EXPECT_EQ(fb.E.u_rl_mult(v_basis(a), v_basis(a)), v_word(Word{a, a}));
}

TEST(Phi, Examples) {
  Fixture bg("betagamma");
  Basis x = bg.b("x"), y = bg.b("y");
  SElement xy = bg.mono({x, y});
  EXPECT_EQ(bg.E.phi(xy), v_word(Word{x, y}) - v_vac(h() * half()));
  EXPECT_EQ(bg.E.phi_inv(v_word(Word{x, y})), xy + s_one(h() * half()));
  EXPECT_EQ(bg.E.gamma(bg.s("x")), v_basis(x));
}

TEST(Phi, RoundTrip) {
  Draw d(2);
  for (auto* name : kAll) {
    Fixture f(name);
    for (int t = 0; t < 10; ++t) {
      SElement a = random_s(d, f.V.lca(), static_cast<int>(d.between(0, 3)), 2);
      EXPECT_EQ(f.E.phi_inv(f.E.phi(a)), a) << name;
      VElement v = random_v(d, f.V.lca(), static_cast<int>(d.between(0, 3)), 2);
      EXPECT_EQ(f.E.phi(f.E.phi_inv(v)), v) << name;
    }
  }
}

TEST(ChiralStar, Examples) {
  Fixture bg("betagamma");
  SElement x = bg.s("x"), y = bg.s("y"), xy = bg.mono({bg.b("x"), bg.b("y")});
  EXPECT_EQ(bg.E.chiral_star(x, y), xy + s_one(h() * half()));
  EXPECT_EQ(bg.E.chiral_star(y, x), xy - s_one(h() * half()));
  EXPECT_EQ(bg.E.chiral_star(x, s_one()), x);
  EXPECT_EQ(render(bg.V.lca(), bg.E.chiral_star(x, y)), "x*y + (1/2)*h");
}

TEST(LOp, Examples) {
  Fixture bg("betagamma");
  UElement x = v_basis(bg.b("x"));
  RElement y = r_gen(bg.b("y"));
  EXPECT_EQ(bg.E.L_op(x, y), (lam() + poly_hbar()) * UPoly(v_vac()));
  EXPECT_TRUE(bg.E.L_op(v_vac(), y).is_zero());
}

TEST(LOp, LieProperty) {
  Draw d(4);
  for (auto* name : kAll) {
    Fixture f(name);
    int n = f.V.lca().size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Basis a = basis(i, 0), b = basis(j, 0);
        RElement ra = r_gen(a), rb = r_gen(b);
        for (int t = 0; t < 3; ++t) {
          UPoly x(random_v(d, f.V.lca(), static_cast<int>(d.between(1, 2)), 1));
          UPoly lhs = apply_L(f.E, apply_L(f.E, x, ra), rb) - apply_L(f.E, apply_L(f.E, x, rb), ra);
          UPoly rhs = apply_L(f.E, x, f.V.rl_bracket(a, b));
          EXPECT_EQ(lhs, rhs) << name << " " << i << "," << j;
        }
      }
  }
}

TEST(SumStar, Examples) {
  Fixture bg("betagamma");
  SElement x = bg.s("x"), y = bg.s("y"), xy = bg.mono({bg.b("x"), bg.b("y")});
  SElementPoly expect = SElementPoly(xy + s_one(h() * half())) + lam() * SElementPoly(s_one());
  for (auto mode : {StarMode::Oracle, StarMode::GeneralFormula, StarMode::FreeField})
    EXPECT_EQ(bg.E.sum_star_bracket(x, y, mode), expect);
  EXPECT_EQ(bg.E.sum_star_bracket(s_one(), y, StarMode::GeneralFormula), SElementPoly(y));
  SElement x2 = bg.mono({bg.b("x"), bg.b("x")});
  EXPECT_EQ(bg.E.sum_star_bracket(x2, y, StarMode::GeneralFormula), bg.E.sum_star_bracket(x2, y, StarMode::Oracle));
}

TEST(SumStar, FreeFieldUnavailable) {
  Fixture sl("affine-sl2");
  try {
    sl.E.sum_star_bracket(sl.s("e"), sl.s("f"), StarMode::FreeField);
    FAIL() << "expected FreeFieldUnavailable";
  } catch (const StarError& e) {
    EXPECT_EQ(e.kind(), StarErrorKind::FreeFieldUnavailable);
  }
}

TEST(SumStar, GeneralFormulaMatchesOracle) {
  Draw d(9);
  for (auto* name : kAll) {
    Fixture f(name);
    for (int t = 0; t < 6; ++t) {
      int da = static_cast<int>(d.between(0, 2));
      int db = static_cast<int>(d.between(0, 2));
      SElement a = random_s(d, f.V.lca(), da, 1), b = random_s(d, f.V.lca(), db, 1);
      SElementPoly oracle = f.E.sum_star_bracket(a, b, StarMode::Oracle);
      EXPECT_EQ(f.E.sum_star_bracket(a, b, StarMode::GeneralFormula), oracle)
          << name << " a=" << render(f.V.lca(), a) << " b=" << render(f.V.lca(), b);
      if (f.V.lca().is_free_field()) EXPECT_EQ(f.E.sum_star_bracket(a, b, StarMode::FreeField), oracle) << name;
      EXPECT_EQ(oracle.constant_term(), f.E.chiral_star(a, b)) << name;
    }
  }
}

TEST(Gutt, Examples) {
  Fixture sl("affine-sl2");
  auto& env = sl.Z.enveloping();
  SElement e = sl.s("e"), f = sl.s("f"), H = sl.s("H");
  EXPECT_EQ(env.star(e, f), sl.mono({sl.b("e"), sl.b("f")}) + H * (h() * half()));
  EXPECT_EQ(env.star(e, s_one()), e);
  EXPECT_EQ(gutt_bch(env, e, f, 2), env.star(e, f));
  Fixture fb("free-boson");
  SElement a = fb.s("alpha");
  EXPECT_EQ(fb.Z.enveloping().star(a, a), s_pow(a, 2));
}

TEST(Gutt, BchMatchesPullback) {
  Fixture sl("affine-sl2");
  auto& env = sl.Z.enveloping();
  Draw d(6);
  for (int order = 2; order <= 4; ++order)
    for (int t = 0; t < 6; ++t) {
      int da = static_cast<int>(d.between(1, order - 1));
      int db = static_cast<int>(d.between(1, order - da));
      SElement a = random_s(d, sl.V.lca(), da, 0), b = random_s(d, sl.V.lca(), db, 0);
      EXPECT_EQ(gutt_bch(env, a, b, order), env.star(a, b)) << order;
    }
  try {
    gutt_bch(env, s_pow(sl.s("e"), 2), sl.s("f"), 2);
    FAIL() << "expected OrderTooSmall";
  } catch (const StarError& e) {
    EXPECT_EQ(e.kind(), StarErrorKind::OrderTooSmall);
  }
}

TEST(Moyal, Examples) {
  Fixture bg("betagamma");
  SElement x = bg.s("x"), y = bg.s("y"), xy = bg.mono({bg.b("x"), bg.b("y")});
  EXPECT_EQ(moyal_star(bg.Z, x, y), xy + s_one(h() * half()));
  EXPECT_EQ(moyal_star(bg.Z, y, x), xy - s_one(h() * half()));
  EXPECT_EQ(moyal_star(bg.Z, x, x), s_pow(x, 2));
  Fixture sl("affine-sl2");
  try {
    moyal_star(sl.Z, sl.s("e"), sl.s("f"));
    FAIL() << "expected NotSymplectic";
  } catch (const StarError& e) {
    EXPECT_EQ(e.kind(), StarErrorKind::NotSymplectic);
  }
}

TEST(Chiralization, ProjectsToGutt) {
  Draw d(8);
  for (auto* name : kAll) {
    Fixture f(name);
    for (int t = 0; t < 6; ++t) {
      int da = static_cast<int>(d.between(0, 2)), db = static_cast<int>(d.between(0, 2));
      SElement a = random_s(d, f.V.lca(), da, 1), b = random_s(d, f.V.lca(), db, 1);
      SElement lhs = f.Z.p(f.E.chiral_star(a, b));
      EXPECT_EQ(lhs, f.Z.enveloping().star(f.Z.p(a), f.Z.p(b))) << name;
      if (std::string(name) == "betagamma") EXPECT_EQ(lhs, moyal_star(f.Z, f.Z.p(a), f.Z.p(b)));
    }
  }
  Fixture bg("betagamma");
  SElement x = bg.s("x"), y = bg.s("y");
  EXPECT_EQ(bg.Z.p(bg.E.chiral_star(x, y) - bg.E.chiral_star(y, x)), s_one(h()));
}

TEST(Quantize, Examples) {
  Fixture bg("betagamma", Step::Zero);
  SElement x = bg.s("x"), y = bg.s("y"), xy = bg.mono({bg.b("x"), bg.b("y")});
  SElementPoly expect = SElementPoly(xy) + lam() * SElementPoly(s_one());
  EXPECT_EQ(quantize_lambda(bg.E, x, y), expect);
  EXPECT_EQ(bg.E.sum_star_bracket(x, y, StarMode::Oracle), expect);
}

// Both readings of the substitution in the D operators, against the oracle.
TEST(Quantize, ReadingsAgainstOracle) {
  Draw d(12);
  for (auto* name : kAll) {
    Fixture f(name, Step::Zero);
    int hbar_ok = 0, shifted_ok = 0, total = 0;
    for (int t = 0; t < 6; ++t) {
      SElement a = random_s(d, f.V.lca(), static_cast<int>(d.between(1, 2)), 1);
      SElement b = random_s(d, f.V.lca(), static_cast<int>(d.between(1, 2)), 1);
      SElementPoly oracle = f.E.sum_star_bracket(a, b, StarMode::Oracle);
      ++total;
      hbar_ok += quantize_lambda(f.E, a, b, DReading::AsHbar) == oracle;
      shifted_ok += quantize_lambda(f.E, a, b, DReading::Shifted) == oracle;
    }
    EXPECT_EQ(hbar_ok, total) << name;
    std::cout << name << ": shifted reading matches " << shifted_ok << "/" << total << "\n";
  }
}

namespace {

// Brackets scaled by a parameter eps: the eps^0 part of the quantized
// bracket is the product and d/dlambda of the eps^1 part is the classical
// lambda-bracket.
LCAlgebra scaled_algebra(const char* name) {
  std::string src(*builtin_source(name)), out = "param eps\n";
  size_t pos = 0;
  while (pos < src.size()) {
    size_t end = src.find('\n', pos);
    if (end == std::string::npos) end = src.size();
    std::string line = src.substr(pos, end - pos);
    size_t eq = line.find('=');
    if (line.rfind("bracket", 0) == 0 && eq != std::string::npos)
      line = line.substr(0, eq + 1) + " eps*(" + line.substr(eq + 1) + ")";
    out += line + "\n";
    pos = end + 1;
  }
  return load_algebra_text(out);
}

SElementPoly eps_part(const SElementPoly& p, int n) {
  int eps = find_param("eps");
  SElementPoly r;
  for (auto& [m, c] : p.terms()) {
    SElement e;
    for (auto& [w, s] : c.terms())
      for (auto& [sm, q] : s.terms())
        if (sm.e[eps] == n) {
          ScalarMono rest = sm;
          rest.e[eps] = 0;
          e.add(w, ScalarPoly::monomial(rest, q));
        }
    r.add(m, e);
  }
  return r;
}

}  // namespace

TEST(Quantize, DeformationAxioms) {
  Draw d(13);
  for (auto* name : kAll) {
    LCAlgebra plain = load_builtin(name);
    VertexAlgebra V(scaled_algebra(name), EngineOptions{Step::Zero, WickRoute::PreferRight});
    StarEngine E(V);
    for (int t = 0; t < 6; ++t) {
      int da = static_cast<int>(d.between(1, 2)), db = static_cast<int>(d.between(1, 2));
      SElement a = random_s(d, plain, da, 1), b = random_s(d, plain, db, 1);
      SElementPoly q = quantize_lambda(E, a, b);
      EXPECT_EQ(render(plain, eps_part(q, 0)), render(plain, SElementPoly(s_mult(a, b)))) << name;
      EXPECT_EQ(render(plain, eps_part(q, 1).derivative(lambda_var())), render(plain, pva_bracket(plain, a, b)))
          << name;
    }
  }
}
