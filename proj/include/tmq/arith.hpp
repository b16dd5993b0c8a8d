#pragma once

// Exact-arithmetic aliases and small number-theoretic helpers shared by
// every module.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tmq {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "num/den", "num" or a finite decimal like "0.25" into a canonical rational.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Nearest double of a rational (correctly rounded to within one ulp).
double to_double(const Rational& q);

/// log|z| for arbitrarily large integers; z must be nonzero.
long double log_abs(const Integer& z);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

bool is_prime(std::uint64_t n);

/// Prime factors of n (distinct, ascending).
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Multiplicative order of a modulo m, gcd(a, m) = 1, m >= 2.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

/// Modular inverse of a modulo m (gcd(a, m) = 1).
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

/// Splits n = 2^h * odd; returns (h, odd). n must be nonzero.
std::pair<unsigned, Integer> split_two_power(const Integer& n);

inline int parity_sign(unsigned bits) { return (bits & 1U) ? -1 : 1; }

}  // namespace tmq
