#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mdpavg {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses `num/den` or a plain integer. Throws InputError on anything else or
/// on a zero denominator. The result is canonical.
Rational parse_rational(std::string_view text);

/// `num/den`, or just `num` when the denominator is 1.
std::string to_fraction(const Rational& q);

/// Decimal with `digits` significant digits.
std::string to_decimal(const Rational& q, int digits = 12);

/// num/den in canonical form.
Rational ratio(const BigInt& num, const BigInt& den);

BigInt binomial(unsigned long n, unsigned long k);

/// q^e with 0^0 = 1.
Rational power(const Rational& q, unsigned long e);

/// Natural log of a positive rational, accurate to double precision even when
/// the value is far outside the double range.
double log_of(const Rational& q);

}  // namespace mdpavg
