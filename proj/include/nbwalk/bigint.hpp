#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>

namespace nbwalk {

using BigInt = mpz_class;
using Rational = mpq_class;

// Exact binomial coefficient, zero when k < 0 or k > n or n < 0.
// Rows up to kPascalRows come from a memoized per-thread Pascal triangle;
// larger rows fall back to GMP's mpz_bin_uiui.
BigInt binomial(std::int64_t n, std::int64_t k);
inline constexpr std::int64_t kPascalRows = 512;

BigInt power(std::int64_t base, unsigned long exponent);

// Lossless decimal forms: "123", "-4" and "p/q" (always with a denominator).
std::string to_decimal(const BigInt& value);
std::string to_fraction(const Rational& value);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

double to_double(const Rational& value);

// Sum with a fixed binary-tree reduction so the result is independent of
// how callers chunk the work.
double pairwise_sum(std::span<const double> values);

}  // namespace nbwalk
