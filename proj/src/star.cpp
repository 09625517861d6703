#include "hvertex/star.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "memo.hpp"

namespace hvertex {

using detail::BasisWordHash;
using detail::Memo;

namespace {

SPoly lam() { return poly_var(lambda_var()); }

Var nested_var(int s) { return var("l_" + std::to_string(s)); }
Var dmu_var() { return var("mu_d"); }

SElementPoly map_coeffs(const SElementPoly& p, const std::function<SElementPoly(const SElement&)>& f) {
  SElementPoly r;
  for (auto& [m, c] : p.terms()) r += shift_mono(f(c), m);
  return r;
}

SElement partial_seq(const SElement& a, const Word& seq) {
  SElement r = a;
  for (Basis b : seq) {
    if (r.is_zero()) break;
    r = s_partial(r, b);
  }
  return r;
}

// Sum over ordered index tuples drawn from support(b):
//   sum_k 1/k! sum_{i_1..i_k} d^k b / du_{i_1}..du_{i_k} * op_{i_k} ... op_{i_1}(a)
template <class Op, class Mult>
SElementPoly tuple_expansion(const SElement& a, const SElement& b, Op&& op, Mult&& mult) {
  SElementPoly out;
  std::vector<Basis> idx = support(b);
  std::function<void(const SElement&, const SElementPoly&, int)> walk = [&](const SElement& db,
                                                                              const SElementPoly& ma, int k) {
    ScalarPoly inv(Rational(1) / factorial(k));
    out += mult(db, ma).map([&](const SElement& e) { return e * inv; });
    for (Basis i : idx) {
      SElement next = s_partial(db, i);
      if (next.is_zero()) continue;
      SElementPoly mi = op(i, ma);
      if (mi.is_zero()) continue;
      walk(next, mi, k + 1);
    }
  };
  walk(b, SElementPoly(a), 0);
  return out;
}

}  // namespace

struct StarEngine::Caches {
  Memo<std::pair<Basis, Word>, RPoly, BasisWordHash> nested;
  Memo<std::pair<Basis, Word>, SElementPoly, BasisWordHash> m_hbar;
  Memo<std::pair<Basis, Word>, SElementPoly, BasisWordHash> m_shifted;
  Memo<std::pair<Basis, Word>, SElementPoly, BasisWordHash> free_l;
};

StarEngine::StarEngine(const VertexAlgebra& v)
    : v_(v), rl_([&v](Basis a, Basis b) { return v.rl_bracket(a, b); }), caches_(std::make_unique<Caches>()) {}
StarEngine::~StarEngine() = default;
StarEngine::StarEngine(StarEngine&&) noexcept = default;

SElementPoly StarEngine::phi_inv(const VPoly& p) const {
  SElementPoly r;
  for (auto& [m, c] : p.terms()) r.add(m, phi_inv(c));
  return r;
}

SElementPoly StarEngine::gutt(const SElement& a, const SElementPoly& b) const {
  SElementPoly r;
  for (auto& [m, c] : b.terms()) r.add(m, gutt(a, c));
  return r;
}

SElementPoly StarEngine::gutt(const SElementPoly& a, const SElement& b) const {
  SElementPoly r;
  for (auto& [m, c] : a.terms()) r.add(m, gutt(c, b));
  return r;
}

SElement StarEngine::chiral_star(const SElement& a, const SElement& b) const {
  return phi_inv(v_.star(phi(a), phi(b)));
}

UPoly StarEngine::L_op(const UElement& x, const RElement& a) const {
  Var z = var("z_l");
  VPoly br = v_.bracket(psi(x), from_r(a)).rename(lambda_var(), z);
  SPoly lo = -poly_var(tau_var()) - SPoly(v_.hbar());
  return v_.resolve_tau(findiff::definite_sum(br, z, lo, lam(), v_.step()));
}

RPoly StarEngine::r_bracket(const RPoly& p, Basis c, Var v) const {
  bool hbar = v_.step() == Step::Hbar;
  return bracket_left_poly(v_.lca(), p, r_gen(c), v, hbar);
}

const RPoly& StarEngine::nested(Basis j, const Word& seq, Var) const {
  auto key = std::make_pair(j, seq);
  if (auto* hit = caches_->nested.find(key)) return *hit;
  int k = static_cast<int>(seq.size());
  RPoly x(r_gen(j));
  for (int s = 1; s <= k && !x.is_zero(); ++s) x = r_bracket(x, seq[s - 1], nested_var(s));
  SPoly step(v_.hbar());
  SPoly lo = -poly_var(tau_var()) - step;
  for (int s = k; s >= 1 && !x.is_zero(); --s) {
    SPoly hi = s == 1 ? poly_var(dmu_var()) : poly_var(nested_var(s - 1)) + step;
    x = findiff::definite_sum(x, nested_var(s), lo, hi, v_.step());
  }
  x = resolve_marker(x, tau_var(), [](const RElement& c) { return shift_order(c); });
  return caches_->nested.put(key, std::move(x));
}

SElementPoly StarEngine::D_op(Basis j, const SElement& a, Var mu) const {
  SElementPoly out;
  std::vector<Basis> idx = support(a);
  std::function<void(const SElement&, Word&)> walk = [&](const SElement& da, Word& seq) {
    const RPoly& n = nested(j, seq, dmu_var());
    if (!n.is_zero()) {
      ScalarPoly inv(Rational(1) / factorial(static_cast<long>(seq.size())));
      SElementPoly np;
      for (auto& [m, c] : n.terms()) np.add(m, s_from_r(c));
      out += gutt(da, np).map([&](const SElement& e) { return e * inv; });
    }
    for (Basis i : idx) {
      SElement next = s_partial(da, i);
      if (next.is_zero()) continue;
      seq.push_back(i);
      walk(next, seq);
      seq.pop_back();
    }
  };
  Word seq;
  walk(a, seq);
  return mu == dmu_var() ? out : out.rename(dmu_var(), mu);
}

SElementPoly StarEngine::m_op(Basis i, const SElement& a, DReading reading) const {
  SElementPoly r;
  auto& memo = reading == DReading::AsHbar ? caches_->m_hbar : caches_->m_shifted;
  for (auto& [w, c] : a.terms()) {
    auto key = std::make_pair(i, w);
    const SElementPoly* hit = memo.find(key);
    if (!hit) {
      SElement mono = SElement::of(w);
      SElementPoly d = D_op(i, mono, dmu_var());
      SPoly arg = reading == DReading::AsHbar ? -lam() - poly_var(tau_var()) - SPoly(v_.hbar())
                                              : lam() - poly_var(tau_var());
      SElementPoly sub = substitute(d, dmu_var(), arg);
      sub = resolve_marker(sub, tau_var(), [](const SElement& e) { return s_derive(e); });
      sub -= SElementPoly(gutt(s_basis(i), mono));
      hit = &memo.put(key, std::move(sub));
    }
    r += hit->map([&](const SElement& e) { return e * c; });
  }
  return r;
}

SElementPoly StarEngine::m_op(Basis i, const SElementPoly& a, DReading reading) const {
  return map_coeffs(a, [&](const SElement& c) { return m_op(i, c, reading); });
}

SElementPoly StarEngine::free_L(Basis i, const SElement& a) const {
  SElementPoly r;
  Var x = var("x_l"), sigma = var("sigma_l");
  for (auto& [w, c] : a.terms()) {
    auto key = std::make_pair(i, w);
    const SElementPoly* hit = caches_->free_l.find(key);
    if (!hit) {
      SElement mono = SElement::of(w);
      SElementPoly acc;
      for (Basis j : support(mono)) {
        const RPoly& br = v_.gen_bracket(j, i);
        SPoly p;
        for (auto& [m, e] : br.terms()) {
          for (auto& [k, s] : e.terms()) {
            if (k != kScalarKey) throw StarError(StarErrorKind::FreeFieldUnavailable, "bracket is not scalar valued");
            p.add(m, s);
          }
        }
        p = substitute(p.rename(lambda_var(), x), x, poly_var(x) + poly_var(sigma));
        SPoly lo = -poly_var(tau_var()) - SPoly(v_.hbar());
        SPoly q = findiff::definite_sum(p, x, lo, lam(), v_.step());
        SElement dj = s_partial(mono, j);
        // Both markers act on the same factor d a / d u_j.
        for (auto& [m, s] : q.terms()) {
          int order = m.exponent(tau_var()) + m.exponent(sigma);
          acc.add(m.without(tau_var()).without(sigma), s_derive(dj, order) * s);
        }
      }
      hit = &caches_->free_l.put(key, std::move(acc));
    }
    r += hit->map([&](const SElement& e) { return e * c; });
  }
  return r;
}

SElementPoly StarEngine::free_L(Basis i, const SElementPoly& a) const {
  return map_coeffs(a, [&](const SElement& c) { return free_L(i, c); });
}

SElementPoly StarEngine::general_formula(const SElement& a, const SElement& b, DReading reading) const {
  return tuple_expansion(
      a, b, [&](Basis i, const SElementPoly& x) { return m_op(i, x, reading); },
      [&](const SElement& db, const SElementPoly& x) { return gutt(db, x); });
}

SElementPoly StarEngine::free_field(const SElement& a, const SElement& b) const {
  if (!v_.lca().is_free_field())
    throw StarError(StarErrorKind::FreeFieldUnavailable, "generator brackets are not scalar valued");
  return tuple_expansion(
      a, b, [&](Basis i, const SElementPoly& x) { return free_L(i, x); },
      [&](const SElement& db, const SElementPoly& x) { return gutt(db, x); });
}

SElementPoly StarEngine::sum_star_bracket(const SElement& a, const SElement& b, StarMode mode,
                                          DReading reading) const {
  switch (mode) {
    case StarMode::Oracle:
      return phi_inv(v_.sum_bracket(phi(a), phi(b)));
    case StarMode::GeneralFormula:
      return general_formula(a, b, reading);
    case StarMode::FreeField:
      return free_field(a, b);
  }
  return {};
}

SElement gutt_bch(const Enveloping& env, const SElement& a, const SElement& b, int order) {
  int p = degree(a), q = degree(b);
  if (p < 0 || q < 0) return SElement();
  int need = p + q;
  if (need >= 2 && order < need)
    throw StarError(StarErrorKind::OrderTooSmall,
                    "BCH order " + std::to_string(order) + " below " + std::to_string(need));
  int top = std::min(order, need);

  // Dynkin coefficients of BCH(x, y) - x - y per word in x (0) and y (1).
  std::map<std::vector<int>, Rational> words;
  std::vector<int> rs;
  std::function<void(int, int, int)> pick = [&](int n, int used_x, int used_y) {
    if (n > 0) {
      int len = used_x + used_y;
      if (len >= 2) {
        Rational c = Rational(n % 2 ? 1 : -1) / Rational(n) / Rational(len);
        std::vector<int> w;
        for (int s = 0; s < n; ++s) {
          c /= factorial(rs[2 * s]) * factorial(rs[2 * s + 1]);
          w.insert(w.end(), rs[2 * s], 0);
          w.insert(w.end(), rs[2 * s + 1], 1);
        }
        words[w] += c;
      }
    }
    for (int r = 0; r + used_x <= p; ++r)
      for (int s = 0; s + used_y <= q; ++s) {
        if (r + s == 0 || used_x + used_y + r + s > top) continue;
        rs.push_back(r);
        rs.push_back(s);
        pick(n + 1, used_x + r, used_y + s);
        rs.pop_back();
        rs.pop_back();
      }
  };
  pick(0, 0, 0);

  // Symbol D: (left derivatives, right derivatives) -> coefficient in g + C.
  using Key = std::pair<Word, Word>;
  std::map<Key, SElement> dsym;
  std::vector<Basis> sa = support(a), sb = support(b);
  for (auto& [w, c] : words) {
    if (c.is_zero()) continue;
    std::vector<Basis> slot(w.size());
    std::function<void(size_t)> assign = [&](size_t i) {
      if (i == w.size()) {
        RElement acc = r_gen(slot.back());
        for (size_t t = w.size() - 1; t-- > 0 && !acc.is_zero();) acc = env.bracket(r_gen(slot[t]), acc);
        if (acc.is_zero()) return;
        Word lw, rw;
        for (size_t t = 0; t < w.size(); ++t) (w[t] == 0 ? lw : rw).push_back(slot[t]);
        std::sort(lw.begin(), lw.end());
        std::sort(rw.begin(), rw.end());
        dsym[{lw, rw}] += s_from_r(acc) * ScalarPoly(c);
        return;
      }
      for (Basis bb : w[i] == 0 ? sa : sb) {
        slot[i] = bb;
        assign(i + 1);
      }
    };
    assign(0);
  }

  // exp(D), truncated by the degrees of a and b.
  std::map<Key, SElement> total{{Key{}, s_one()}}, term{{Key{}, s_one()}};
  for (int n = 1; !term.empty(); ++n) {
    std::map<Key, SElement> next;
    ScalarPoly inv(Rational(1, n));
    for (auto& [k1, c1] : term)
      for (auto& [k2, c2] : dsym) {
        if (static_cast<int>(k1.first.size() + k2.first.size()) > p) continue;
        if (static_cast<int>(k1.second.size() + k2.second.size()) > q) continue;
        Word lw = k1.first, rw = k1.second;
        lw.insert(lw.end(), k2.first.begin(), k2.first.end());
        rw.insert(rw.end(), k2.second.begin(), k2.second.end());
        std::sort(lw.begin(), lw.end());
        std::sort(rw.begin(), rw.end());
        SElement prod = s_mult(c1, c2) * inv;
        if (!prod.is_zero()) next[{lw, rw}] += prod;
      }
    for (auto it = next.begin(); it != next.end();) it = it->second.is_zero() ? next.erase(it) : std::next(it);
    for (auto& [k, c] : next) total[k] += c;
    term = std::move(next);
  }

  SElement out;
  for (auto& [k, c] : total) {
    if (c.is_zero()) continue;
    SElement da = partial_seq(a, k.first), db = partial_seq(b, k.second);
    if (da.is_zero() || db.is_zero()) continue;
    out += s_mult(c, s_mult(da, db));
  }
  return out;
}

SElement moyal_star(const ZhuAlgebra& zhu, const SElement& a, const SElement& b, const ScalarPoly& scale) {
  int n = zhu.vertex().lca().size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (auto& [k, c] : zhu.lie_bracket(i, j).terms())
        if (k != kScalarKey) throw StarError(StarErrorKind::NotSymplectic, "Zhu bracket is not scalar valued");
  std::vector<Basis> sa = support(a), sb = support(b);
  // Terms (A, B) of exp(pi / 2)(a (x) b); products are taken at the end.
  std::vector<std::pair<SElement, SElement>> cur{{a, b}};
  SElement out;
  ScalarPoly half = scale * ScalarPoly(Rational(1, 2));
  for (int k = 0; !cur.empty(); ++k) {
    ScalarPoly inv(Rational(1) / factorial(k));
    for (auto& [x, y] : cur) out += s_mult(x, y) * inv;
    std::vector<std::pair<SElement, SElement>> next;
    for (auto& [x, y] : cur)
      for (Basis i : sa) {
        SElement dx = s_partial(x, i);
        if (dx.is_zero()) continue;
        for (Basis j : sb) {
          ScalarPoly pij = zhu.enveloping().bracket(i, j).coeff(kScalarKey);
          if (pij.is_zero()) continue;
          SElement dy = s_partial(y, j);
          if (dy.is_zero()) continue;
          next.emplace_back(dx * (pij * half), dy);
        }
      }
    cur = std::move(next);
  }
  return out;
}

SElementPoly quantize_lambda(const StarEngine& classical, const SElement& a, const SElement& b, DReading reading) {
  if (classical.vertex().step() != Step::Zero) throw std::invalid_argument("quantize_lambda needs a classical engine");
  return classical.sum_star_bracket(a, b, StarMode::GeneralFormula, reading);
}

namespace {

// {A_lambda b} for a single basis element b.
SElementPoly pva_left(const LCAlgebra& alg, const Word& a, Basis b) {
  if (a.empty()) return {};
  Basis a0 = a[0];
  Word rest = tail(a);
  RPoly base = alg.lambda_bracket_R(r_gen(a0), r_gen(b));
  SElementPoly base_s;
  for (auto& [m, c] : base.terms()) base_s.add(m, s_from_r(c));
  auto leibniz = [&](const SElementPoly& br, const SElement& other) {
    // br evaluated at lambda + d, d acting on other.
    SElementPoly r;
    for (auto& [m, c] : br.terms()) {
      int n = m.exponent(lambda_var());
      LMono rest_m = m.without(lambda_var());
      for (int j = 0; j <= n; ++j) {
        SElement dj = s_derive(other, j);
        if (dj.is_zero()) continue;
        r.add(rest_m * LMono::of(lambda_var(), n - j), s_mult(c, dj) * ScalarPoly(binomial(n, j)));
      }
    }
    return r;
  };
  SElementPoly r = leibniz(base_s, SElement::of(rest));
  if (!rest.empty()) r += leibniz(pva_left(alg, rest, b), s_basis(a0));
  return r;
}

}  // namespace

SElementPoly pva_bracket(const LCAlgebra& alg, const SElement& a, const SElement& b) {
  SElementPoly r;
  for (auto& [wa, ca] : a.terms())
    for (auto& [wb, cb] : b.terms()) {
      // Right Leibniz over the factors of wb.
      for (size_t i = 0; i < wb.size(); ++i) {
        Word others(wb.begin(), wb.begin() + static_cast<long>(i));
        others.insert(others.end(), wb.begin() + static_cast<long>(i) + 1, wb.end());
        SElement o = SElement::of(others, ca * cb);
        r += s_mult(pva_left(alg, wa, wb[i]), SElementPoly(o));
      }
    }
  return r;
}

}  // namespace hvertex
