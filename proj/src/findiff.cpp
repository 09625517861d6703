#include "hvertex/findiff.hpp"

#include <map>
#include <mutex>

namespace hvertex::findiff {

namespace {

// Signed Stirling numbers of the first kind s(n, j) and second kind S(m, k).
Rational stirling1(int n, int j) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Rational> memo;
  if (n == 0 && j == 0) return Rational(1);
  if (n == 0 || j == 0) return Rational(0);
  {
    std::lock_guard lock(mu);
    auto it = memo.find({n, j});
    if (it != memo.end()) return it->second;
  }
  Rational r = stirling1(n - 1, j - 1) - Rational(n - 1) * stirling1(n - 1, j);
  std::lock_guard lock(mu);
  memo.emplace(std::make_pair(n, j), r);
  return r;
}

Rational stirling2(int m, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Rational> memo;
  if (m == 0 && k == 0) return Rational(1);
  if (m == 0 || k == 0) return Rational(0);
  {
    std::lock_guard lock(mu);
    auto it = memo.find({m, k});
    if (it != memo.end()) return it->second;
  }
  Rational r = Rational(k) * stirling2(m - 1, k) + stirling2(m - 1, k - 1);
  std::lock_guard lock(mu);
  memo.emplace(std::make_pair(m, k), r);
  return r;
}

ScalarPoly h_pow(int e, Step step) {
  if (e == 0) return ScalarPoly(1);
  return step == Step::Hbar ? ScalarPoly::hbar(e) : ScalarPoly();
}

using Row = std::vector<ScalarPoly>;
using Builder = Row (*)(int, Step);

const Row& cached(int which, int n, Step step, Builder build) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, Row> memo;
  auto key = std::make_tuple(which, n, static_cast<int>(step));
  {
    std::lock_guard lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  Row r = build(n, step);
  std::lock_guard lock(mu);
  return memo.emplace(key, std::move(r)).first->second;
}

Row build_falling(int n, Step step) {
  Row r(n + 1);
  for (int j = 0; j <= n; ++j) r[j] = h_pow(n - j, step) * ScalarPoly(stirling1(n, j));
  return r;
}

Row build_to_falling(int m, Step step) {
  Row r(m + 1);
  for (int k = 0; k <= m; ++k) r[k] = h_pow(m - k, step) * ScalarPoly(stirling2(m, k));
  return r;
}

Row build_antidifference(int m, Step step) {
  // x^m = sum_k S(m,k) h^{m-k} (x)_k and (x)_k has antidifference (x)_{k+1}/(k+1).
  Row r(m + 2);
  auto& tf = to_falling_row(m, step);
  for (int k = 0; k <= m; ++k) {
    if (tf[k].is_zero()) continue;
    auto& ff = falling_row(k + 1, step);
    ScalarPoly scale = tf[k] * ScalarPoly(Rational(1, k + 1));
    for (int j = 0; j <= k + 1; ++j) r[j] += scale * ff[j];
  }
  return r;
}

Row build_difference(int m, Step step) {
  // ((x+h)^m - x^m)/h, or m x^{m-1} when h = 0.
  Row r(m > 0 ? m : 1);
  for (int j = 0; j < m; ++j) r[j] = ScalarPoly(binomial(m, j)) * h_pow(m - 1 - j, step);
  return r;
}

}  // namespace

const std::vector<ScalarPoly>& falling_row(int n, Step step) { return cached(0, n, step, build_falling); }
const std::vector<ScalarPoly>& to_falling_row(int m, Step step) { return cached(1, m, step, build_to_falling); }
const std::vector<ScalarPoly>& antidifference_row(int m, Step step) {
  return cached(2, m, step, build_antidifference);
}
const std::vector<ScalarPoly>& difference_row(int m, Step step) { return cached(3, m, step, build_difference); }

SPoly falling_factorial(Var v, int n, const SPoly& shift, Step step) {
  SPoly r(ScalarPoly(1));
  SPoly base = poly_var(v) + shift;
  for (int i = 0; i < n; ++i) r = (base - SPoly(h_pow(1, step) * ScalarPoly(i))) * r;
  return r;
}

}  // namespace hvertex::findiff
