// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "element_util.hpp"
#include "hvertex/star.hpp"
#include "hvertex/verify.hpp"

using namespace hvertex;
using namespace testutil;

namespace {

const char* kAll[] = {"betagamma", "free-boson", "affine-sl2", "virasoro"};

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

SuiteOptions opts(int degree, int trials) {
  SuiteOptions o;
  o.degree = degree;
  o.trials = trials;
  o.seed = 7;
  return o;
}

void suite_on(Outcome& out, const char* suite, const char* alg, const SuiteOptions& o) {
  auto r = run_suite(suite, alg, o);
  if (!r.pass()) out.fail(std::string(alg) + ": " + r.failures.front().identity + ": " + r.failures.front().counterexample);
}

void suite_on_all(Outcome& out, const char* suite, const SuiteOptions& o) {
  for (auto* a : kAll) suite_on(out, suite, a, o);
}

Outcome chiralization() {
  Outcome out;
  Draw d(7);
  for (auto* name : kAll) {
    VertexAlgebra V(load_builtin(name));
    ZhuAlgebra Z(V);
    StarEngine E(V);
    const LCAlgebra& A = V.lca();
    bool weyl = std::string(name) == "betagamma";
    for (int t = 0; t < 10; ++t) {
      int da = static_cast<int>(d.between(0, 4)), db = static_cast<int>(d.between(0, 4 - da / 2));
      SElement a = random_s(d, A, da, 1), b = random_s(d, A, db, 1);
      SElement lhs = Z.p(E.chiral_star(a, b));
      SElement gutt = Z.enveloping().star(Z.p(a), Z.p(b));
      if (lhs != gutt) out.fail(std::string(name) + ": p_Z(a*b) != Gutt for a=" + render(A, a) + " b=" + render(A, b));
      if (weyl && gutt != moyal_star(Z, Z.p(a), Z.p(b)))
        out.fail("betagamma: Gutt != Moyal for a=" + render(A, a) + " b=" + render(A, b));
    }
  }
  VertexAlgebra V(load_builtin("betagamma"));
  ZhuAlgebra Z(V);
  StarEngine E(V);
  SElement x = s_basis(basis(V.lca().index_of("x"), 0)), y = s_basis(basis(V.lca().index_of("y"), 0));
  if (Z.p(E.chiral_star(x, y) - E.chiral_star(y, x)) != s_one(ScalarPoly::hbar())) out.fail("x*y - y*x does not project to h");
  return out;
}

Outcome mutation() {
  Outcome out;
  std::string src(*builtin_source("virasoro"));
  src.replace(src.find("2*lambda*L"), 1, "3");
  auto r = run_suite("hlca", load_algebra_text(src, LoadOptions{false}), opts(2, 10));
  if (r.pass()) out.fail("hlca passes on the mutated Virasoro algebra");
  else if (r.failures.front().counterexample.empty()) out.fail("no counterexample rendered");
  else out.detail = r.failures.front().identity + ": " + r.failures.front().counterexample.substr(0, 80);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "finite differences", 5, [] { Outcome o; suite_on(o, "findiff", "betagamma", opts(2, 200)); return o; }},
      {2, "hbar-LCA axioms", 30, [] { Outcome o; suite_on_all(o, "hlca", opts(2, 20)); return o; }},
      {3, "hbar-VA products and Wick formulas", 120, [] { Outcome o; suite_on_all(o, "hva-products", opts(3, 50)); return o; }},
      {4, "hbar-Borcherds identity", 120, [] { Outcome o; suite_on_all(o, "borcherds", opts(2, 10)); return o; }},
      {5, "sum hbar-bracket", 60, [] { Outcome o; suite_on_all(o, "sum-bracket", opts(3, 10)); return o; }},
      {6, "Zhu algebra", 60, [] { Outcome o; suite_on_all(o, "zhu", opts(3, 20)); return o; }},
      {7, "star-product oracle equivalence", 300, [] { Outcome o; suite_on_all(o, "star-oracle", opts(5, 20)); return o; }},
      {8, "chiralization", 60, chiralization},
      {9, "deformation quantization", 60,
       [] {
         Outcome o;
         suite_on(o, "quantization", "betagamma", opts(3, 20));
         suite_on(o, "quantization", "free-boson", opts(3, 20));
         return o;
       }},
      {10, "mutation sensitivity", 30, mutation},
  };
  bool all = true;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.budget) o.fail("over budget");
    all = all && o.ok;
    std::ostringstream line;
    line << (o.ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << std::fixed << std::setprecision(1)
         << secs << " s, budget " << c.budget << " s)";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << std::endl;
  }
  return all ? 0 : 1;
}
