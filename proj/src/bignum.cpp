#include "mdt/bignum.hpp"

#include <cmath>
#include <gmp.h>

#include "mdt/errors.hpp"

namespace mdt {

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt factorial(std::int64_t n) {
  if (n < 0) throw InvalidArgument("factorial of a negative number");
  BigInt out;
  mpz_fac_ui(out.backend().data(), static_cast<unsigned long>(n));
  return out;
}

Rational power(const Rational& base, unsigned exponent) {
  return Rational(boost::multiprecision::pow(boost::multiprecision::numerator(base), exponent),
                  boost::multiprecision::pow(boost::multiprecision::denominator(base), exponent));
}

double log_big(const BigInt& value) {
  if (value <= 0) throw InvalidArgument("log of a non-positive integer");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.backend().data());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

double log_rational(const Rational& value) {
  if (value <= 0) throw InvalidArgument("log of a non-positive rational");
  return log_big(numerator(value)) - log_big(denominator(value));
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty rational literal");
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw InvalidArgument("mixed rational literal: " + s);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const auto scale = s.size() - dot - 1;
      BigInt num(digits);
      BigInt den = 1;
      for (std::size_t i = 0; i < scale; ++i) den *= 10;
      return Rational(num, den);
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw InvalidArgument("zero denominator: " + s);
      return Rational(num, den);
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error&) {
    throw InvalidArgument("malformed rational literal: " + s);
  }
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) { return value.str(); }

}  // namespace mdt
