#include "hvertex/scalar.hpp"

#include <mutex>
#include <stdexcept>

namespace hvertex {

namespace {

struct ParamTable {
  ParamTable() {
    names.reserve(kScalarSlots);
    names.emplace_back("h");
  }
  std::mutex mu;
  std::vector<std::string> names;
};

ParamTable& params() {
  static ParamTable t;
  return t;
}

}  // namespace

int intern_param(std::string_view name) {
  auto& t = params();
  std::lock_guard lock(t.mu);
  for (size_t i = 1; i < t.names.size(); ++i)
    if (t.names[i] == name) return static_cast<int>(i);
  if (static_cast<int>(t.names.size()) >= kScalarSlots)
    throw std::length_error("too many scalar parameters (limit " + std::to_string(kScalarSlots - 1) + ")");
  t.names.emplace_back(name);
  return static_cast<int>(t.names.size() - 1);
}

int find_param(std::string_view name) {
  auto& t = params();
  std::lock_guard lock(t.mu);
  for (size_t i = 1; i < t.names.size(); ++i)
    if (t.names[i] == name) return static_cast<int>(i);
  return 0;
}

const std::string& param_name(int id) {
  auto& t = params();
  std::lock_guard lock(t.mu);
  return t.names.at(id);
}

ScalarPoly ScalarPoly::hbar(int power) {
  ScalarMono m;
  m.e[0] = static_cast<uint16_t>(power);
  return monomial(m, Rational(1));
}

ScalarPoly ScalarPoly::param(int id, int power) {
  ScalarMono m;
  m.e.at(id) = static_cast<uint16_t>(power);
  return monomial(m, Rational(1));
}

ScalarPoly ScalarPoly::monomial(const ScalarMono& m, const Rational& c) {
  ScalarPoly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

Rational ScalarPoly::constant_term() const {
  auto it = terms_.find(ScalarMono{});
  return it == terms_.end() ? Rational(0) : it->second;
}

int ScalarPoly::hbar_degree() const {
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max<int>(d, m.e[0]);
  return d;
}

bool ScalarPoly::depends_on_hbar() const {
  for (auto& [m, c] : terms_)
    if (m.e[0]) return true;
  return false;
}

ScalarPoly ScalarPoly::eval_hbar(const Rational& value) const { return eval_param(0, value); }

ScalarPoly ScalarPoly::eval_param(int id, const Rational& value) const {
  ScalarPoly r;
  for (auto& [m, c] : terms_) {
    ScalarMono mm = m;
    Rational cc = c;
    for (int i = 0; i < m.e[id]; ++i) cc *= value;
    mm.e[id] = 0;
    r.add_term(mm, cc);
  }
  return r;
}

void ScalarPoly::add_term(const ScalarMono& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ScalarPoly& ScalarPoly::operator-=(const ScalarPoly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ScalarPoly& ScalarPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, x] : terms_) x *= c;
  return *this;
}

ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
  ScalarPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.terms_.size() == 1 && a.terms_.begin()->first.is_one()) return b * a.terms_.begin()->second;
  if (b.terms_.size() == 1 && b.terms_.begin()->first.is_one()) return a * b.terms_.begin()->second;
  for (auto& [ma, ca] : a.terms_)
    for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

ScalarPoly ScalarPoly::pow(int n) const {
  ScalarPoly r(1);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

std::vector<std::string> scalar_mono_tokens(const ScalarMono& m) {
  std::vector<std::string> out;
  auto tok = [](const std::string& name, int e) { return e == 1 ? name : name + "^" + std::to_string(e); };
  for (int i = 1; i < kScalarSlots; ++i)
    if (m.e[i]) out.push_back(tok(param_name(i), m.e[i]));
  if (m.e[0]) out.push_back(tok("h", m.e[0]));
  return out;
}

std::string render_scalar_mono(const ScalarMono& m) {
  std::string s;
  for (auto& t : scalar_mono_tokens(m)) {
    if (!s.empty()) s += "*";
    s += t;
  }
  return s;
}

std::string ScalarPoly::str() const {
  std::vector<RenderTerm> terms;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    terms.push_back({it->second, scalar_mono_tokens(it->first)});
  return render_sum(terms);
}

std::string render_sum(const std::vector<RenderTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& t : terms) {
    Rational a = t.coeff.sign() < 0 ? -t.coeff : t.coeff;
    if (first) {
      if (t.coeff.sign() < 0) out += "-";
    } else {
      out += t.coeff.sign() < 0 ? " - " : " + ";
    }
    first = false;
    std::string body;
    for (auto& f : t.factors) {
      if (!body.empty()) body += "*";
      body += f;
    }
    if (body.empty()) {
      out += a.str();
    } else if (a.is_one()) {
      out += body;
    } else if (a.is_integer()) {
      out += a.str() + "*" + body;
    } else {
      out += "(" + a.str() + ")*" + body;
    }
  }
  return out;
}

}  // namespace hvertex
