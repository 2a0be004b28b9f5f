#include "annulus/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "annulus/error.hpp"

namespace annulus {

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw Error(ErrorCode::InvalidInput, "division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty rational");
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw std::invalid_argument("mixed");
      const bool neg = s[0] == '-';
      const std::string body = (s[0] == '-' || s[0] == '+') ? s.substr(1) : s;
      const auto d = body.find('.');
      std::string digits = body.substr(0, d) + body.substr(d + 1);
      if (digits.empty()) throw std::invalid_argument("no digits");
      for (char c : digits)
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit");
      mpz_class n(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - d - 1);
      mpq_class q(neg ? mpz_class(-n) : n, den);
      return Rational(q);
    }
    mpq_class q(s, 10);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return Rational(q);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidInput, "cannot parse rational '" + std::string(text) + "'");
  }
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite double");
  return Rational(mpq_class(v));
}

std::string Rational::str() const { return value_.get_str(10); }

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::frac() const { return *this - Rational(mpq_class(floor())); }

Rational Rational::mod(long m) const {
  const Rational scaled = *this / Rational(m);
  return Rational(m) * scaled.frac();
}

double Rational::to_double() const {
  const mpz_class& n = value_.get_num();
  const mpz_class& d = value_.get_den();
  // Below 2^53 both convert exactly and one IEEE division rounds correctly.
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53)
    return n.get_d() / d.get_d();
  return value_.get_d();
}

}  // namespace annulus
