#include "hvertex/zhu.hpp"

namespace hvertex {

namespace {

RElement zhu_bracket(const VertexAlgebra& v, Basis a, Basis b) {
  const RPoly& br = v.gen_bracket(a, b);
  RPoly at = substitute(br, lambda_var(), -SPoly(v.hbar()));
  RElement c0 = at.constant_term();
  RElement r;
  for (auto& [k, c] : c0.terms())
    if (k == kScalarKey || order_of(static_cast<Basis>(k)) == 0) r.add(k, c * v.hbar());
  return r;
}

}  // namespace

ZhuAlgebra::ZhuAlgebra(const VertexAlgebra& v)
    : v_(v), env_([&v](Basis a, Basis b) { return zhu_bracket(v, a, b); }) {}

const RElement& ZhuAlgebra::lie_bracket(int i, int j) const { return env_.bracket(basis(i, 0), basis(j, 0)); }

SElement ZhuAlgebra::poisson(const SElement& a, const SElement& b) const {
  SElement r;
  for (Basis x : support(a)) {
    SElement da = s_partial(a, x);
    for (Basis y : support(b)) r += s_mult(s_mult(da, s_partial(b, y)), s_from_r(env_.bracket(x, y)));
  }
  return r;
}

std::vector<std::string> ZhuAlgebra::validate() const {
  std::vector<std::string> bad;
  int n = v_.lca().size();
  auto name = [&](int i) { return v_.lca().generator(i).name; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lie_bracket(i, j) != -lie_bracket(j, i)) bad.push_back("antisymmetry " + name(i) + "," + name(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RElement a = r_gen(basis(i, 0)), b = r_gen(basis(j, 0)), c = r_gen(basis(k, 0));
        RElement s = env_.bracket(a, env_.bracket(b, c)) + env_.bracket(b, env_.bracket(c, a)) +
                     env_.bracket(c, env_.bracket(a, b));
        if (!s.is_zero()) bad.push_back("jacobi " + name(i) + "," + name(j) + "," + name(k));
      }
  return bad;
}

}  // namespace hvertex
