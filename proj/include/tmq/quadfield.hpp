#pragma once

#include "tmq/arith.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmq {

enum class PrimeClass { P1, P21, P23, Other };

std::string to_string(PrimeClass c);

/// Order of 2 in (Z/pZ)*; p must be an odd prime.
std::uint64_t order_of_two(std::uint64_t p);

PrimeClass classify_prime(std::uint64_t p);

/// epsilon = u + v omega with omega = (1 + sqrt p)/2.
struct FundamentalUnit {
    Integer u;
    Integer v;
    int norm = 0;             // +1 or -1, verified exactly
    long double value = 0;    // epsilon as a real number
    long double log_value = 0;

    std::string to_string() const;  // "u+vω" style, e.g. "3+2ω"
};

/// Norm u^2 + u v - v^2 (p-1)/4 of u + v omega.
Integer unit_norm(const Integer& u, const Integer& v, std::uint64_t p);

/// Smallest unit > 1 of the ring of integers of Q(sqrt p), p = 1 mod 4 prime,
/// read off the continued fraction of omega on exact quadratic-surd states.
FundamentalUnit fundamental_unit(std::uint64_t p);

/// Quadratic character of p by Euler's criterion (0 on multiples of p).
int legendre(std::uint64_t a, std::uint64_t p);

/// L(1, chi_p) = -(1/sqrt p) sum_{a=1}^{p-1} chi_p(a) log sin(pi a / p), p = 1 mod 4.
long double l_value(std::uint64_t p);

struct ClassNumber {
    std::uint64_t h = 0;
    long double raw = 0;        // sqrt(p) L / (2 log epsilon) before rounding
    bool near_integer = true;   // |raw - h| <= 1e-6
    long double closure = 0;    // |2 h log epsilon - sqrt(p) L|
};

ClassNumber class_number(std::uint64_t p);

struct PrimeClassRecord {
    std::uint64_t p = 0;
    std::uint64_t s = 0;
    PrimeClass cls = PrimeClass::Other;
    std::optional<double> beta;       // empty for Other when not delegated
    long double lambda1 = 0;
    std::optional<long double> lambda2;
    std::optional<std::uint64_t> h;
    std::optional<FundamentalUnit> epsilon;
    std::optional<long double> regulator;
    std::optional<bool> hua_ok;       // L(1, chi_p) < log(p)/2 + 1, P21 only
    bool class_number_drift = false;  // pre-rounding class number not near an integer
};

/// Class fields and the class-specific invariants; beta is set for P1, P21 and P23.
PrimeClassRecord prime_record(std::uint64_t p);

/// Per-class beta formula; nullopt (unsupported) for class Other.
std::optional<double> beta_for_class(const PrimeClassRecord& rec);

/// Record completed for class Other with beta = log(max |xi_a|)/(s log 2).
PrimeClassRecord prime_record_with_eigen_beta(std::uint64_t p);

struct SizeIncreasingScan {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> p1, p21, p23, other;
};

/// Primes 3 <= p < limit with beta > 1/2, grouped by class.
SizeIncreasingScan scan_size_increasing(std::uint64_t limit);

/// Odd primes 3 <= p < limit.
std::vector<std::uint64_t> odd_primes_below(std::uint64_t limit);

}  // namespace tmq
