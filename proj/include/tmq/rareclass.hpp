#pragma once

#include "tmq/arith.hpp"
#include "tmq/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmq {

/// S_{p,i}(n) = sum of eta_j over 0 <= j < n, j = i mod p, by direct summation.
Integer rarefied_sum_direct(std::uint64_t p, std::uint64_t i, std::uint64_t n);

/// Same value through the binary digit recursion, O(p log n).
Integer rarefied_sum(std::uint64_t p, std::uint64_t i, const Integer& n);

struct RarefiedVector {
    std::uint64_t p = 0;
    Integer n;
    std::vector<Integer> entries;

    Integer column_sum() const;
};

RarefiedVector rarefied_vector(std::uint64_t p, const Integer& n);

/// Machine-integer variant of the recursion for n < 2^63.
std::vector<std::int64_t> rarefied_vector_i64(std::uint64_t p, std::uint64_t n);

/// Sum_{m<n} eta_m, which takes only the values -1, 0, 1.
int tm_prefix_sum(const Integer& n);

enum class Beta1State { Positive, Zero, Boundary };

std::string to_string(Beta1State state);

struct CosetEigenvalue {
    std::uint64_t representative = 0;   // smallest element of the coset a<2>
    std::complex<long double> xi;
    std::uint64_t multiplicity = 0;     // = s
};

struct TransferMatrix {
    std::uint64_t p = 0;
    std::uint64_t s = 0;
    IntMatrix entries;                  // M[i][j] = S_{p, i-j mod p}(2^s)
    std::vector<CosetEigenvalue> eigenvalues;
    long double lambda1 = 0;
    long double lambda2 = 0;            // next modulus below lambda1 (0 if none)
    double beta = 0;
    double beta1 = 0;
    Beta1State beta1_state = Beta1State::Zero;
    unsigned r = 1;                     // smallest r in {1,2,4} with (xi/lambda1)^r = 1 on the dominant cosets
    std::vector<std::uint64_t> dominant;  // DFT modes k whose eigenvalue has modulus lambda1

    std::vector<Integer> apply(const std::vector<Integer>& v) const;
};

/// Builds M and checks S(2^s n) = M S(n) for n = 1..50 (throws std::logic_error on mismatch).
/// p must be an odd integer >= 3; eigen data is filled for primes only.
TransferMatrix transfer_matrix(std::uint64_t p);

/// xi_a = (-2i)^s prod_{j in a<2>} sin(2 pi j / p), one per coset of <2> in (Z/pZ)*.
std::vector<CosetEigenvalue> eigenvalues_explicit(std::uint64_t p);

struct SpectrumCrossCheck {
    std::vector<long double> explicit_moduli;   // sorted descending, with multiplicities, includes the zero mode
    std::vector<long double> charpoly_moduli;
    long double max_deviation = 0;
};

/// Compares |xi_a| (multiplicity s, plus one zero) with root moduli of det(xI - M).
SpectrumCrossCheck spectrum_cross_check(std::uint64_t p);

struct ScalingExponents {
    double beta = 0;
    double beta1 = 0;
    Beta1State beta1_state = Beta1State::Zero;
};

ScalingExponents scaling_exponents(std::uint64_t p);

struct ProfileSample {
    Integer n;
    double x = 0;        // frac(log n / (r s log 2))
    double value = 0;    // dominant-mode profile value psi_hat_{p,j}(n)
    double raw = 0;      // S_{p,j}(n) / n^beta
};

struct FractalProfile {
    std::uint64_t p = 0;
    std::uint64_t j = 0;
    unsigned r = 1;
    std::uint64_t s = 0;
    double beta = 0;
    std::vector<ProfileSample> samples;
    double inf = 0, sup = 0;           // over psi_hat
    double raw_inf = 0, raw_sup = 0;   // over S / n^beta
    double error_constant = 0;         // max |S - n^beta psi_hat| / n^beta1
    bool sign_change = false;          // psi_hat takes both signs or touches zero
};

/// psi_hat(n) is the projection of S(n) onto the eigenmodes of modulus lambda1,
/// divided by n^beta: the limit of S(2^{rsm} n) / (2^{rsm} n)^beta as m grows.
std::vector<double> profile_values(const Integer& n, const TransferMatrix& tm);

/// Same, from an already computed S(n).
std::vector<double> profile_values(const Integer& n, const std::vector<Integer>& s, const TransferMatrix& tm);

/// Samples n = floor(2^{(m0 + x) r s}) on x = i / resolution with the largest m0 such that
/// 2^{(m0+1) r s} <= 2^horizon_exponent.
FractalProfile fractal_profile(std::uint64_t p, std::uint64_t j, unsigned horizon_exponent,
                               unsigned resolution = 1024);

/// All residues at once, sharing the sample grid.
std::vector<FractalProfile> fractal_profiles(std::uint64_t p, unsigned horizon_exponent,
                                             unsigned resolution = 1024);

struct CoquetValue {
    double psi = 0;
    int eps = 0;
    bool eps_valid = true;    // eps in {0, +-1} and 3(S - n^beta psi) within 1e-6 of it
    bool reconstructs = true; // S = n^beta psi + eps/3 recovered exactly after rounding
};

CoquetValue coquet_decompose(std::uint64_t n);

struct CoquetScan {
    std::uint64_t n_max = 0;
    std::uint64_t eps_violations = 0;
    double psi_min = 0, psi_max = 0;
    std::uint64_t argmin = 0, argmax = 0;
    double raw_min = 0, raw_max = 0;
};

/// psi_hat and raw S_{3,0}(n)/n^beta extremes over 1 <= n <= n_max, Coquet remainder checks
/// for n <= eps_check_max.
CoquetScan coquet_scan(std::uint64_t n_max, std::uint64_t eps_check_max);

/// Closed-form ends of the Coquet interval: (1/3)^beta 2 sqrt(3)/3 and (55/3) 65^{-beta}.
std::pair<double, double> coquet_interval();

struct NewmanReport {
    std::uint64_t n_max = 0;
    std::uint64_t violations = 0;           // either inequality fails
    std::uint64_t positivity_violations = 0;
    double lower_bound = 0, upper_bound = 0;
    double min_ratio = 0, max_ratio = 0;
    std::uint64_t argmin = 0, argmax = 0;
};

NewmanReport newman_check(std::uint64_t n_max);

struct PositivityReport {
    std::uint64_t p = 0;
    std::uint64_t n_max = 0;
    std::uint64_t violations = 0;           // n <= n_max with S_{p,0}(n) <= 0
    std::uint64_t largest_violation = 0;    // 0 if none
    std::uint64_t last_decade_violations = 0;  // those with n > n_max / 10
    bool stabilized() const { return last_decade_violations == 0; }
};

PositivityReport positivity_scan(std::uint64_t p, std::uint64_t n_max);

struct GrabnerReport {
    std::uint64_t p = 0, p3 = 0, p5 = 0;
    std::uint64_t n_max = 0;
    double log_constant = 0;        // max |residual| / log N over 2 <= N <= n_max
    double max_abs_residual = 0;
    bool n1_exact = false;          // N = 1 residual agrees between recursion and direct sums
    double dominant_exponent = 0;   // mean phase-locked slope of log S_{p,0}(pN)
    std::vector<double> phase_slopes;
    double beta3 = 0, beta5 = 0;
};

/// Residual S_{p,0}(pN) - S_{3^r1,0}(pN)/5^r2 - S_{5^r2,0}(pN)/3^r1 for p = 3^r1 5^r2.
/// The dominant exponent is fitted along N = c 4^j (c odd < 16) with 2^20 <= pN <= 2^52.
GrabnerReport grabner_composite(unsigned r1, unsigned r2, std::uint64_t n_max);

}  // namespace tmq
