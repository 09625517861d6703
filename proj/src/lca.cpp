#include "hvertex/lca.hpp"

#include <map>
#include <optional>

namespace hvertex {

RElement shift_order(const RElement& a, int times) {
  RElement r;
  for (auto& [k, c] : a.terms()) {
    if (k == kScalarKey) continue;
    int ord = order_of(static_cast<Basis>(k)) + times;
    if (ord > kMaxOrder) throw std::overflow_error("derivative order exceeds " + std::to_string(kMaxOrder));
    r.add(basis(gen_of(static_cast<Basis>(k)), ord), c);
  }
  return r;
}

namespace {

SPoly lam() { return poly_var(lambda_var()); }
SPoly tau() { return poly_var(tau_var()); }

// p(-lambda - tau - shift) with tau acting on coefficients by shift_order.
RPoly reflect(const RPoly& p, const ScalarPoly& shift) {
  RPoly s = substitute(p, lambda_var(), -lam() - tau() - SPoly(shift));
  return resolve_marker(s, tau_var(), [](const RElement& c) { return shift_order(c); });
}

// (lambda + tau + shift)^n applied to p, tau acting on coefficients.
RPoly right_shift_power(const RPoly& p, int n, const ScalarPoly& shift) {
  if (n == 0) return p;
  RPoly s = pow(lam() + tau() + SPoly(shift), n) * p;
  return resolve_marker(s, tau_var(), [](const RElement& c) { return shift_order(c); });
}

std::string describe_pair(const std::vector<GeneratorInfo>& g, int i, int j) {
  return "[" + g[i].name + ", " + g[j].name + "]";
}

}  // namespace

LCAlgebra LCAlgebra::load(const LcaDefinition& def, LoadOptions opts) {
  LCAlgebra a;
  a.name_ = def.name;
  a.params_ = def.params;
  a.gens_ = def.generators;
  for (auto& p : a.params_) intern_param(p);
  int n = a.size();
  for (auto& g : a.gens_)
    if (g.weight.sign() < 0) throw LcaError(LcaErrorKind::InvalidWeight, "generator " + g.name + " has negative weight");

  std::vector<std::optional<RPoly>> given(n * n);
  for (auto& b : def.brackets) {
    if (b.i < 0 || b.i >= n || b.j < 0 || b.j >= n)
      throw LcaError(LcaErrorKind::UnknownGenerator, "bracket refers to an unknown generator");
    if (given[b.i * n + b.j])
      throw LcaError(LcaErrorKind::DuplicateBracket, "bracket " + describe_pair(a.gens_, b.i, b.j) + " given twice");
    for (auto& [m, c] : b.value.terms()) {
      for (auto& [id, e] : m.entries())
        if (Var{id} != lambda_var())
          throw LcaError(LcaErrorKind::UnknownGenerator, "bracket " + describe_pair(a.gens_, b.i, b.j) + " uses variable " + var_name(Var{id}));
      for (auto& [k, s] : c.terms())
        if (k != kScalarKey && gen_of(static_cast<Basis>(k)) >= n)
          throw LcaError(LcaErrorKind::UnknownGenerator, "bracket refers to an unknown generator");
    }
    given[b.i * n + b.j] = b.value;
  }

  if (opts.validate) {
    for (auto& b : def.brackets) {
      Rational target = a.gens_[b.i].weight + a.gens_[b.j].weight - Rational(1);
      for (auto& [m, c] : b.value.terms()) {
        Rational expect = target - Rational(m.exponent(lambda_var()));
        for (auto& [k, s] : c.terms()) {
          Rational w = k == kScalarKey ? Rational(0) : a.weight(static_cast<Basis>(k));
          if (w != expect)
            throw LcaError(LcaErrorKind::WeightMismatch,
                           "bracket " + describe_pair(a.gens_, b.i, b.j) + ": term of weight " + w.str() +
                               " at lambda^" + std::to_string(m.exponent(lambda_var())) + ", expected weight " +
                               expect.str());
        }
      }
    }
  }

  a.classical_.assign(n * n, RPoly());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto& ij = given[i * n + j];
      auto& ji = given[j * n + i];
      if (ij) {
        a.classical_[i * n + j] = *ij;
        RPoly derived = -reflect(*ij, ScalarPoly());
        if (ji && opts.validate && *ji != derived)
          throw LcaError(LcaErrorKind::SkewInconsistent,
                         "brackets " + describe_pair(a.gens_, i, j) + " and " + describe_pair(a.gens_, j, i) + " disagree");
        if (i == j && opts.validate && derived != *ij)
          throw LcaError(LcaErrorKind::SkewInconsistent,
                         "bracket " + describe_pair(a.gens_, i, i) + " is not skewsymmetric");
        if (i != j) a.classical_[j * n + i] = ji ? *ji : derived;
      } else if (ji) {
        a.classical_[j * n + i] = *ji;
        a.classical_[i * n + j] = -reflect(*ji, ScalarPoly());
      }
    }
  }

  a.hbar_.assign(n * n, RPoly());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.hbar_[i * n + j] = a.hbracket_homogeneous(basis(i, 0), basis(j, 0));
  return a;
}

int LCAlgebra::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (gens_[i].name == name) return i;
  return -1;
}

RPoly LCAlgebra::lambda_bracket_R(const RElement& a, const RElement& b) const {
  RPoly r;
  for (auto& [ka, ca] : a.terms()) {
    if (ka == kScalarKey) continue;
    for (auto& [kb, cb] : b.terms()) {
      if (kb == kScalarKey) continue;
      auto ba = static_cast<Basis>(ka);
      auto bb = static_cast<Basis>(kb);
      RPoly base = classical(gen_of(ba), gen_of(bb));
      if (base.is_zero()) continue;
      RPoly t = right_shift_power(base, order_of(bb), ScalarPoly());
      t = pow(-lam(), order_of(ba)) * t;
      r += t.scaled(ca * cb);
    }
  }
  return r;
}

RPoly LCAlgebra::hbracket_R(const RElement& a, const RElement& b) const {
  RPoly r;
  ScalarPoly h = ScalarPoly::hbar();
  for (auto& [ka, ca] : a.terms()) {
    if (ka == kScalarKey) continue;
    for (auto& [kb, cb] : b.terms()) {
      if (kb == kScalarKey) continue;
      auto ba = static_cast<Basis>(ka);
      auto bb = static_cast<Basis>(kb);
      const RPoly& base = hbracket_gen(gen_of(ba), gen_of(bb));
      if (base.is_zero()) continue;
      RPoly t = right_shift_power(base, order_of(bb), h);
      t = pow(-lam() - poly_hbar(), order_of(ba)) * t;
      r += t.scaled(ca * cb);
    }
  }
  return r;
}

RPoly LCAlgebra::hbracket_homogeneous(Basis a, Basis b) const {
  RPoly cl = lambda_bracket_R(r_gen(a), r_gen(b));
  SPoly shift(ScalarPoly::hbar() * ScalarPoly(weight(a)));
  RPoly r;
  for (int n = 0; n <= cl.degree(lambda_var()); ++n) {
    RPoly cn = cl.coeff(lambda_var(), n);
    if (cn.is_zero()) continue;
    r += findiff::falling_factorial(lambda_var(), n, shift) * cn;
  }
  return r.map([&](const RElement& c) { return to_hbar_basis(c); });
}

RElement LCAlgebra::to_hbar_basis(const RElement& t) const {
  // T^{m+1}u = T_hbar(T^m u) - hbar(Delta + m) T^m u, row m holds T^m u in v_(.,j).
  RElement r;
  ScalarPoly h = ScalarPoly::hbar();
  for (auto& [k, c] : t.terms()) {
    if (k == kScalarKey) {
      r.add(k, c);
      continue;
    }
    auto b = static_cast<Basis>(k);
    int g = gen_of(b), m = order_of(b);
    std::vector<ScalarPoly> row{ScalarPoly(1)};
    for (int s = 0; s < m; ++s) {
      ScalarPoly f = h * ScalarPoly(gens_[g].weight + Rational(s));
      std::vector<ScalarPoly> next(row.size() + 1);
      for (size_t j = 0; j < row.size(); ++j) {
        next[j + 1] += row[j];
        next[j] -= f * row[j];
      }
      row = std::move(next);
    }
    for (int j = 0; j <= m; ++j) r.add(basis(g, j), c * row[j]);
  }
  return r;
}

RElement LCAlgebra::to_t_basis(const RElement& v) const {
  // v_(u,j+1) = T_hbar v_(u,j) and T_hbar(T^p u) = T^{p+1}u + hbar(Delta + p) T^p u.
  RElement r;
  ScalarPoly h = ScalarPoly::hbar();
  for (auto& [k, c] : v.terms()) {
    if (k == kScalarKey) {
      r.add(k, c);
      continue;
    }
    auto b = static_cast<Basis>(k);
    int g = gen_of(b), m = order_of(b);
    std::vector<ScalarPoly> row{ScalarPoly(1)};
    for (int s = 0; s < m; ++s) {
      std::vector<ScalarPoly> next(row.size() + 1);
      for (size_t p = 0; p < row.size(); ++p) {
        next[p + 1] += row[p];
        next[p] += h * ScalarPoly(gens_[g].weight + Rational(static_cast<long>(p))) * row[p];
      }
      row = std::move(next);
    }
    for (int p = 0; p <= m; ++p) r.add(basis(g, p), c * row[p]);
  }
  return r;
}

bool LCAlgebra::is_free_field() const {
  for (auto& p : hbar_)
    for (auto& [m, c] : p.terms())
      for (auto& [k, s] : c.terms())
        if (k != kScalarKey) return false;
  return true;
}

std::string LCAlgebra::basis_token(Basis b, bool hbar_basis) const {
  int k = order_of(b);
  const std::string& n = gens_.at(gen_of(b)).name;
  if (k == 0) return n;
  std::string op = hbar_basis ? "Th" : "T";
  return (k == 1 ? op : op + "^" + std::to_string(k)) + " " + n;
}

std::string LCAlgebra::render(const RElement& a, bool hbar_basis) const {
  return render(RPoly(a), hbar_basis);
}

std::string LCAlgebra::render(const RPoly& p, bool hbar_basis) const {
  std::vector<RenderTerm> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto lt = lmono_tokens(it->first);
    for (auto kt = it->second.terms().rbegin(); kt != it->second.terms().rend(); ++kt) {
      for (auto st = kt->second.terms().rbegin(); st != kt->second.terms().rend(); ++st) {
        RenderTerm t{st->second, scalar_mono_tokens(st->first)};
        t.factors.insert(t.factors.end(), lt.begin(), lt.end());
        if (kt->first != kScalarKey) t.factors.push_back(basis_token(static_cast<Basis>(kt->first), hbar_basis));
        terms.push_back(std::move(t));
      }
    }
  }
  return render_sum(terms);
}

RPoly bracket_left_poly(const LCAlgebra& alg, const RPoly& p, const RElement& c, Var nu, bool hbar) {
  RPoly r;
  for (auto& [m, coef] : p.terms()) {
    RPoly b = hbar ? alg.hbracket_R(coef, c) : alg.lambda_bracket_R(coef, c);
    r += shift_mono(b.rename(lambda_var(), nu), m);
  }
  return r;
}

RPoly bracket_right_poly(const LCAlgebra& alg, const RElement& a, const RPoly& q, Var lam, bool hbar) {
  RPoly r;
  for (auto& [m, coef] : q.terms()) {
    RPoly b = hbar ? alg.hbracket_R(a, coef) : alg.lambda_bracket_R(a, coef);
    r += shift_mono(b.rename(lambda_var(), lam), m);
  }
  return r;
}

}  // namespace hvertex
