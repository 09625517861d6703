#include <gtest/gtest.h>

#include <map>

#include "element_util.hpp"
#include "hvertex/zhu.hpp"

using namespace hvertex;
using namespace testutil;

namespace {

ScalarPoly h() { return ScalarPoly::hbar(); }

struct Fixture {
  explicit Fixture(const char* name, EngineOptions o = {}) : V(load_builtin(name), o), Z(V) {}
  VertexAlgebra V;
  ZhuAlgebra Z;
  int i(const char* g) const { return V.lca().index_of(g); }
  Basis b(const char* g, int k = 0) const { return basis(i(g), k); }
  UElement u(const char* g) const { return v_basis(b(g)); }
};

const char* kAll[] = {"betagamma", "free-boson", "affine-sl2", "virasoro"};

// ----- brute-force ideal oracle -----

using Vec = std::map<Word, Rational, WordLess>;

Vec specialize(const VElement& v) {
  Vec r;
  for (auto& [w, c] : v.terms()) {
    Rational x = testutil::specialize(c, Rational(3, 7), Rational(5, 3)).constant_term();
    if (!x.is_zero()) r[w] = x;
  }
  return r;
}

// Row echelon basis keyed by leading (largest) word.
struct Echelon {
  std::map<Word, Vec, WordLess> rows;

  Vec reduce(Vec v) const {
    while (!v.empty()) {
      auto lead = std::prev(v.end());
      auto it = rows.find(lead->first);
      if (it == rows.end()) return v;
      Rational f = lead->second / it->second.rbegin()->second;
      for (auto& [w, c] : it->second) {
        Rational& slot = v[w];
        slot -= f * c;
        if (slot.is_zero()) v.erase(w);
      }
    }
    return v;
  }
  void insert(const Vec& v) {
    Vec r = reduce(v);
    if (!r.empty()) rows.emplace(std::prev(r.end())->first, std::move(r));
  }
};

std::vector<Word> words_up_to(const LCAlgebra& alg, int deg, int max_order) {
  std::vector<Basis> letters;
  for (int g = 0; g < alg.size(); ++g)
    for (int k = 0; k <= max_order; ++k) letters.push_back(basis(g, k));
  std::sort(letters.begin(), letters.end());
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int d = 1; d <= deg; ++d) {
    std::vector<Word> next;
    for (auto& w : frontier)
      for (Basis l : letters)
        if (w.empty() || w.back() <= l) {
          Word x = w;
          x.push_back(l);
          next.push_back(x);
        }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

bool has_derivative(const Word& w) {
  return std::any_of(w.begin(), w.end(), [](Basis b) { return order_of(b) > 0; });
}

}  // namespace

TEST(ZhuBracket, Examples) {
  Fixture bg("betagamma");
  EXPECT_EQ(bg.Z.lie_bracket(bg.i("x"), bg.i("y")), r_scalar(h()));
  EXPECT_EQ(bg.Z.lie_bracket(bg.i("y"), bg.i("x")), r_scalar(-h()));
  Fixture sl("affine-sl2");
  EXPECT_EQ(sl.Z.lie_bracket(sl.i("e"), sl.i("f")), r_gen(sl.b("H"), h()));
  EXPECT_EQ(sl.Z.lie_bracket(sl.i("H"), sl.i("e")), r_gen(sl.b("e"), h() * ScalarPoly(2)));
  EXPECT_TRUE(sl.Z.lie_bracket(sl.i("H"), sl.i("H")).is_zero());
  Fixture vir("virasoro");
  EXPECT_TRUE(vir.Z.lie_bracket(0, 0).is_zero());
  Fixture fb("free-boson");
  EXPECT_TRUE(fb.Z.lie_bracket(0, 0).is_zero());
}

TEST(ZhuBracket, ValidatesForBuiltins) {
  for (auto* name : kAll) {
    Fixture f(name);
    EXPECT_TRUE(f.Z.validate().empty()) << name;
  }
}

TEST(UMult, Examples) {
  Fixture bg("betagamma");
  UElement x = bg.u("x"), y = bg.u("y");
  EXPECT_EQ(bg.Z.mult(y, x), v_word(Word{bg.b("x"), bg.b("y")}) - v_vac(h()));
  EXPECT_EQ(bg.Z.mult(v_vac(), x), x);
  EXPECT_EQ(bg.Z.mult(x, v_vac()), x);
  Fixture sl("affine-sl2");
  UElement e = sl.u("e"), f = sl.u("f"), H = sl.u("H");
  EXPECT_EQ(sl.Z.mult(sl.Z.mult(e, f), H), sl.Z.mult(e, sl.Z.mult(f, H)));
}

TEST(UMult, Associativity) {
  Draw d(11);
  for (auto* name : kAll) {
    Fixture f(name);
    for (int t = 0; t < 15; ++t) {
      int da = static_cast<int>(d.between(0, 2)), db = static_cast<int>(d.between(0, 2));
      int dc = static_cast<int>(d.between(0, 4 - std::max(da, db)));
      UElement a = random_v(d, f.V.lca(), da, 0), b = random_v(d, f.V.lca(), db, 0),
               c = random_v(d, f.V.lca(), dc, 0);
      EXPECT_EQ(f.Z.mult(f.Z.mult(a, b), c), f.Z.mult(a, f.Z.mult(b, c))) << name;
    }
  }
}

TEST(QZ, Examples) {
  Fixture bg("betagamma");
  auto& V = bg.V;
  EXPECT_TRUE(bg.Z.q(v_basis(bg.b("x", 1))).is_zero());
  VElement xy = v_word(Word{bg.b("x"), bg.b("y")}) - v_vac(h());
  EXPECT_EQ(bg.Z.q(xy), xy);
  EXPECT_TRUE(bg.Z.q(V.star(v_basis(bg.b("x")), v_basis(bg.b("y", 1)))).is_zero());
  SElement s = s_monomial(Word{bg.b("x", 1), bg.b("y")});
  EXPECT_TRUE(bg.Z.p(s).is_zero());
  SElement t = s_monomial(Word{bg.b("x"), bg.b("y")});
  EXPECT_EQ(bg.Z.p(t), t);
  EXPECT_EQ(bg.Z.poisson(s_basis(bg.b("x")), s_basis(bg.b("y"))).coeff(Word{}).eval_hbar(Rational(1)), ScalarPoly(1));
}

TEST(QZ, Homomorphism) {
  Draw d(5);
  for (auto* name : kAll) {
    Fixture f(name);
    for (int t = 0; t < 12; ++t) {
      VElement a = random_v(d, f.V.lca(), static_cast<int>(d.between(0, 2)), 1);
      VElement b = random_v(d, f.V.lca(), static_cast<int>(d.between(0, 3 - degree(a))), 1);
      EXPECT_EQ(f.Z.q(f.V.star(a, b)), f.Z.mult(f.Z.q(a), f.Z.q(b))) << name;
    }
  }
}

TEST(QZ, CommutatorRealization) {
  for (auto* name : kAll) {
    Fixture f(name);
    int n = f.V.lca().size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        UElement a = v_basis(basis(i, 0)), b = v_basis(basis(j, 0));
        VPoly br = f.V.bracket(a, b);
        VElement at = substitute(br, lambda_var(), SPoly(-h())).constant_term() * h();
        EXPECT_EQ(f.Z.mult(a, b) - f.Z.mult(b, a), f.Z.q(at)) << name;
      }
  }
}

// Every element (T_h w1) * w2 of degree <= 3 lies in the span of ordered
// monomials containing a derivative factor, and those monomials are spanned
// by such products: deletion of derivative monomials is the projection.
TEST(QZ, MatchesIdealReduction) {
  for (auto* name : kAll) {
    Fixture f(name);
    auto& V = f.V;
    int deg = 3;
    auto words = words_up_to(V.lca(), deg, 2);
    Echelon span;
    for (auto& w1 : words) {
      if (w1.empty()) continue;
      VElement tw = V.apply_t(v_word(w1));
      for (auto& w2 : words) {
        if (w1.size() + w2.size() > static_cast<size_t>(deg)) continue;
        VElement g = V.star(tw, v_word(w2));
        EXPECT_TRUE(f.Z.q(g).is_zero()) << name << " " << V.render(g);
        span.insert(specialize(g));
      }
    }
    for (auto& w : words_up_to(V.lca(), deg, 1)) {
      if (!has_derivative(w)) continue;
      EXPECT_TRUE(span.reduce(specialize(v_word(w))).empty()) << name << " " << V.render(v_word(w));
    }
  }
}

// At h = 0 the bracket q(a_(0) b) on the commutative Zhu image satisfies
// antisymmetry, Leibniz and Jacobi.
TEST(QZ, ClassicalPoissonStructure) {
  Draw d(3);
  for (auto* name : kAll) {
    Fixture f(name, EngineOptions{Step::Zero, WickRoute::PreferRight});
    auto& V = f.V;
    auto br = [&](const SElement& a, const SElement& b) {
      SElement r;
      for (auto& [wa, ca] : a.terms())
        for (auto& [wb, cb] : b.terms()) {
          UElement q = f.Z.q(V.nprod(v_word(wa), 0, v_word(wb)));
          for (auto& [w, c] : q.terms()) r.add(w, c * ca * cb);
        }
      return r;
    };
    auto sorted = [](SElement s) {
      SElement r;
      for (auto& [w, c] : s.terms()) r += s_monomial(w, c);
      return r;
    };
    for (int t = 0; t < 8; ++t) {
      SElement a = random_s(d, V.lca(), static_cast<int>(d.between(1, 2)), 0);
      SElement b = random_s(d, V.lca(), 1, 0);
      SElement c = random_s(d, V.lca(), 1, 0);
      EXPECT_EQ(sorted(br(a, b)), -sorted(br(b, a))) << name;
      EXPECT_EQ(sorted(br(a, s_mult(b, c))), s_mult(sorted(br(a, b)), c) + s_mult(b, sorted(br(a, c)))) << name;
      SElement jac = sorted(br(a, sorted(br(b, c)))) - sorted(br(b, sorted(br(a, c)))) - sorted(br(sorted(br(a, b)), c));
      EXPECT_TRUE(jac.is_zero()) << name;
    }
  }
}
