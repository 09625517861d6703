#include "hvertex/rational.hpp"

#include <stdexcept>

namespace hvertex {

Rational::Rational(long n, long d) : q_(n, d) {
  if (d == 0) throw std::domain_error("zero denominator");
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view t, bool allow_sign) {
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) throw bad();
    std::string num = s[0] == '+' ? s.substr(1) : s;
    return Rational(mpq_class(mpz_class(num)));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  if (num[0] == '+') num = num.substr(1);
  mpz_class d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  mpq_class q(mpz_class(num), d);
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

long Rational::floor() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  if (!f.fits_slong_p()) throw std::overflow_error("rational floor out of range");
  return f.get_si();
}

long Rational::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p())
    throw std::overflow_error("rational is not a small integer: " + str());
  return q_.get_num().get_si();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(mpq_class(f));
}

Rational binomial(long n, long k) {
  if (k < 0) return Rational(0);
  // n(n-1)...(n-k+1)/k!
  mpq_class r(1);
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return Rational(r);
}

}  // namespace hvertex
