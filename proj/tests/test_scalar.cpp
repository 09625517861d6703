#include <gtest/gtest.h>

#include "hvertex/lambda_poly.hpp"
#include "test_util.hpp"

using namespace hvertex;
using testutil::Draw;

namespace {

ScalarPoly h() { return ScalarPoly::hbar(); }

}  // namespace

TEST(Rational, LowestTerms) {
  Rational a(6, -4);
  EXPECT_EQ(a.str(), "-3/2");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
}

TEST(Rational, Binomials) {
  EXPECT_EQ(binomial(5, 2), Rational(10));
  EXPECT_EQ(binomial(-1, 3), Rational(-1));
  EXPECT_EQ(binomial(-3, 2), Rational(6));
  EXPECT_EQ(binomial(2, 5), Rational(0));
  EXPECT_EQ(factorial(6), Rational(720));
}

TEST(ScalarPoly, Examples) {
  EXPECT_EQ((h() + ScalarPoly(1)) * (h() - ScalarPoly(1)), ScalarPoly::hbar(2) - ScalarPoly(1));
  ScalarPoly k = ScalarPoly::param("k");
  EXPECT_EQ((ScalarPoly(2) * ScalarPoly::hbar(2) + k).eval_hbar(Rational(0)), k);
  EXPECT_EQ(ScalarPoly(Rational(3, 2)) * h() + ScalarPoly(Rational(1, 2)) * h(), ScalarPoly(2) * h());
}

TEST(ScalarPoly, Rendering) {
  ScalarPoly k = ScalarPoly::param("k");
  EXPECT_EQ((ScalarPoly(2) * ScalarPoly::hbar(2) + k - ScalarPoly(Rational(1, 2))).str(), "2*h^2 + k - 1/2");
  EXPECT_EQ(ScalarPoly().str(), "0");
  EXPECT_EQ((-h()).str(), "-h");
  EXPECT_EQ((ScalarPoly(Rational(1, 2)) * h()).str(), "(1/2)*h");
}

TEST(ScalarPoly, RingAxiomsRandomized) {
  Draw d(11);
  for (int t = 0; t < 200; ++t) {
    auto a = testutil::random_scalar(d, 3, true);
    auto b = testutil::random_scalar(d, 3, true);
    auto c = testutil::random_scalar(d, 3, true);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(LambdaPoly, Examples) {
  Var l = lambda_var();
  SPoly lam = poly_var(l);
  SPoly p = pow(lam, 2) + lam.scaled(ScalarPoly(3));
  EXPECT_EQ(p.coeff(l, 1), SPoly(ScalarPoly(3)));
  SPoly sub = substitute(pow(lam, 2), l, -lam - poly_hbar());
  EXPECT_EQ(sub, pow(lam, 2) + lam.scaled(ScalarPoly(2) * h()) + SPoly(ScalarPoly::hbar(2)));
  EXPECT_EQ(pow(lam, 3).derivative(l), pow(lam, 2).scaled(ScalarPoly(3)));
  EXPECT_EQ(render(sub), "lambda^2 + 2*h*lambda + h^2");
}

TEST(LambdaPoly, ReflectionInvolutionAndCoeffRoundTrip) {
  Draw d(5);
  Var l = lambda_var(), m = mu_var();
  SPoly refl = -poly_var(l) - poly_hbar();
  for (int t = 0; t < 100; ++t) {
    SPoly p = testutil::random_spoly(d, {l, m}, 4);
    EXPECT_EQ(substitute(substitute(p, l, refl), l, refl), p);
    SPoly back;
    for (int k = 0; k <= p.degree(l); ++k) back += shift_mono(p.coeff(l, k), LMono::of(l, k));
    EXPECT_EQ(back, p);
  }
}
