#include "hvertex/lambda_poly.hpp"

#include <deque>
#include <mutex>

namespace hvertex {

namespace {

struct VarTable {
  std::mutex mu;
  std::deque<std::string> names;
};

VarTable& vars() {
  static VarTable t;
  return t;
}

}  // namespace

Var var(std::string_view name) {
  auto& t = vars();
  std::lock_guard lock(t.mu);
  for (size_t i = 0; i < t.names.size(); ++i)
    if (t.names[i] == name) return Var{static_cast<uint16_t>(i)};
  t.names.emplace_back(name);
  return Var{static_cast<uint16_t>(t.names.size() - 1)};
}

const std::string& var_name(Var v) {
  auto& t = vars();
  std::lock_guard lock(t.mu);
  return t.names.at(v.id);
}

Var lambda_var() {
  static const Var v = var("lambda");
  return v;
}
Var mu_var() {
  static const Var v = var("mu");
  return v;
}
Var nu_var() {
  static const Var v = var("nu");
  return v;
}
Var tau_var() {
  static const Var v = var("tau");
  return v;
}

LMono LMono::with(Var v, int e) const {
  LMono r;
  bool placed = false;
  for (auto& [id, x] : e_) {
    if (!placed && id >= v.id) {
      if (e > 0) r.e_.push_back({v.id, static_cast<uint16_t>(e)});
      placed = true;
      if (id == v.id) continue;
    }
    r.e_.push_back({id, x});
  }
  if (!placed && e > 0) r.e_.push_back({v.id, static_cast<uint16_t>(e)});
  return r;
}

LMono operator*(const LMono& a, const LMono& b) {
  LMono r;
  size_t i = 0, j = 0;
  auto& x = a.e_;
  auto& y = b.e_;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.e_.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      r.e_.push_back(y[j++]);
    } else {
      r.e_.push_back({x[i].first, static_cast<uint16_t>(x[i].second + y[j].second)});
      ++i;
      ++j;
    }
  }
  return r;
}

std::vector<std::string> lmono_tokens(const LMono& m) {
  std::vector<std::string> out;
  for (auto& [id, e] : m.entries()) {
    std::string n = var_name(Var{id});
    out.push_back(e == 1 ? n : n + "^" + std::to_string(e));
  }
  return out;
}

std::string render(const SPoly& p) {
  std::vector<RenderTerm> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto lt = lmono_tokens(it->first);
    for (auto st = it->second.terms().rbegin(); st != it->second.terms().rend(); ++st) {
      RenderTerm t{st->second, scalar_mono_tokens(st->first)};
      t.factors.insert(t.factors.end(), lt.begin(), lt.end());
      terms.push_back(std::move(t));
    }
  }
  return render_sum(terms);
}

}  // namespace hvertex
