#include "mdpavg/rational.hpp"

#include <cmath>
#include <sstream>

#include "mdpavg/error.hpp"

namespace mdpavg {
namespace {

bool all_digits(std::string_view s, bool allow_sign) {
  if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

double log_of(const BigInt& z) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num, true) || !all_digits(den, false)) {
    throw InputError("expected a rational num/den, got '" + std::string(text) + "'");
  }
  BigInt d(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational q(BigInt(std::string(num), 10), d);
  q.canonicalize();
  return q;
}

std::string to_fraction(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  if (q == 0) return "0";
  // Enough binary precision for the requested digits plus guard bits.
  mpf_class f(q, static_cast<mp_bitcnt_t>(digits * 4 + 64));
  std::ostringstream out;
  out.precision(digits);
  out << f;
  return out.str();
}

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational power(const Rational& q, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  return r;
}

double log_of(const Rational& q) {
  if (q <= 0) throw DomainError("log of a non-positive rational");
  return log_of(q.get_num()) - log_of(q.get_den());
}

}  // namespace mdpavg
