#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace mdt {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

BigInt binomial(std::int64_t n, std::int64_t k);
BigInt factorial(std::int64_t n);
Rational power(const Rational& base, unsigned exponent);

// Natural log of a positive integer, accurate for values far beyond double range.
double log_big(const BigInt& value);
double log_rational(const Rational& value);

// Parses "a", "a/b" or a decimal literal such as "1.5".
Rational parse_rational(std::string_view text);
std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

}  // namespace mdt
