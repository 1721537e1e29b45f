#pragma once

// Dual arithmetic: every numeric routine in the library is written once
// against `Scalar` and instantiated for exact GMP rationals and for double.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace partlab {

using Rational = mpq_class;

template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, double>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

template <Scalar S>
S from_int(long long v) {
  if constexpr (is_exact_v<S>) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
    return Rational(z);
  } else {
    return static_cast<double>(v);
  }
}

template <Scalar S>
S from_ratio(long long num, long long den) {
  if constexpr (is_exact_v<S>) {
    Rational q(from_int<Rational>(num) / from_int<Rational>(den));
    q.canonicalize();
    return q;
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

template <Scalar S>
bool is_zero(const S& x) {
  if constexpr (is_exact_v<S>) {
    return sgn(x) == 0;
  } else {
    return x == 0.0;
  }
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1.
template <Scalar S>
S rising_factorial(const S& x, std::uint64_t n) {
  S out = from_int<S>(1);
  S term = x;
  for (std::uint64_t i = 0; i < n; ++i) {
    out *= term;
    term += 1;
  }
  return out;
}

/// Binomial coefficient C(n, k); exact in rational mode.
template <Scalar S>
S binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return from_int<S>(0);
  if constexpr (is_exact_v<S>) {
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), n, k);
    return Rational(z);
  } else {
    if (k > n - k) k = n - k;
    double out = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) {
      out *= static_cast<double>(n - k + i);
      out /= static_cast<double>(i);
    }
    return out;
  }
}

template <Scalar S>
S power(const S& x, std::uint64_t e) {
  S out = from_int<S>(1);
  S base = x;
  while (e > 0) {
    if (e & 1U) out *= base;
    base *= base;
    e >>= 1U;
  }
  return out;
}

template <Scalar S>
S abs_value(const S& x) {
  if (x < 0) return S(-x);
  return x;
}

/// Parses "p/q", "p" or a decimal literal. Decimals are converted exactly.
Rational parse_rational(std::string_view text);

/// True when the literal is written as an integer or a fraction "p/q".
bool is_rational_literal(std::string_view text);

double parse_double(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string format_scalar(const Rational& q);

/// Shortest round-trip decimal representation.
std::string format_scalar(double x);

}  // namespace partlab
