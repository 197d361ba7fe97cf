#pragma once

// Exact and log-space combinatorial primitives shared by the theory code.

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "rxc/error.hpp"

namespace rxc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// (x)_r = x(x-1)...(x-r+1), with (x)_0 = 1. Works for integers, BigInt,
/// Rational and floating types.
template <class T>
T falling_factorial(const T& x, std::int64_t r) {
  T result = T(1);
  T term = x;
  for (std::int64_t i = 0; i < r; ++i) {
    result *= term;
    term -= T(1);
  }
  return result;
}

inline BigInt binomial(std::int64_t a, std::int64_t b) {
  if (b < 0 || b > a) return BigInt(0);
  if (b > a - b) b = a - b;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    result *= a - b + i;
    result /= i;
  }
  return result;
}

inline BigInt power(std::int64_t base, std::int64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

/// ln C(a, b) via log-gamma in extended precision.
inline long double log_binomial(std::int64_t a, std::int64_t b) {
  if (b < 0 || b > a) throw error(errc::domain_error, "log_binomial of an empty binomial");
  const auto la = static_cast<long double>(a);
  const auto lb = static_cast<long double>(b);
  return std::lgamma(la + 1.0L) - std::lgamma(lb + 1.0L) - std::lgamma(la - lb + 1.0L);
}

/// Natural log of a positive big integer without overflowing a double.
inline long double log_of(const BigInt& x) {
  if (x <= 0) throw error(errc::domain_error, "log of a non-positive integer");
  const auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(x)) + 1;
  if (bits <= 60) return std::log(static_cast<long double>(static_cast<std::uint64_t>(x)));
  const auto shift = static_cast<unsigned>(bits - 60);
  const auto top = static_cast<std::uint64_t>(BigInt(x >> shift));
  return std::log(static_cast<long double>(top)) + static_cast<long double>(shift) * std::log(2.0L);
}

inline long double log_of(const Rational& q) {
  return log_of(boost::multiprecision::numerator(q)) - log_of(boost::multiprecision::denominator(q));
}

/// ln(exp(a) + exp(b)), tolerant of -inf.
inline long double log_add(long double a, long double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace rxc
