#pragma once

#include "tmq/tmcore.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace tmq {

using Complex = std::complex<double>;

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(Complex z);
    Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& sum, double& comp, double x);
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

/// Physical wave vector k = 4*pi*q/(a+b).
double wavevector(const Rational& q, const QuasicrystalParams& params);

/// Sum_{n=1}^{l} omega(n) exp(-i k f(n)) for a real k.
Complex fourier_sum(std::uint64_t l, double k, const QuasicrystalParams& params,
                    const WeightFn& weights = unit_weight);

/// Same sum with a rational reduced wave vector q (k = 4*pi*q/(a+b)); the
/// phases k f(n)/(2*pi) = q n + q c eta_{n-1} [n odd] are reduced exactly.
Complex fourier_sum_exact(std::uint64_t l, const Rational& q, const QuasicrystalParams& params,
                          const WeightFn& weights = unit_weight);

/// Fourier sum with explicit prefix: weights taken from prefix values.
Complex fourier_sum(const SignedSequencePrefix& prefix, std::uint64_t l, double k,
                    const QuasicrystalParams& params);

struct ApproximantValue {
    std::uint64_t l = 0;
    double k = 0;
    double density = 0;
};

/// nu_l(k) = |fourier_sum|^2 / l.
double approximant_density(std::uint64_t l, double k, const QuasicrystalParams& params,
                           const WeightFn& weights = unit_weight);

double approximant_density_exact(std::uint64_t l, const Rational& q, const QuasicrystalParams& params,
                                 const WeightFn& weights = unit_weight);

/// Densities at every size in `sizes` (ascending) from one pass over n.
std::vector<ApproximantValue> approximant_densities(const std::vector<std::uint64_t>& sizes, const Rational& q,
                                                    const QuasicrystalParams& params,
                                                    const WeightFn& weights = unit_weight);

std::vector<ApproximantValue> approximant_densities(const std::vector<std::uint64_t>& sizes, double k,
                                                    const QuasicrystalParams& params,
                                                    const WeightFn& weights = unit_weight);

/// Sum_{j<l} eta_j exp(-2 pi i j x), the period-1 factor of the diffraction sums.
Complex eta_sum(std::uint64_t l, double x);

/// Same with an exact rational x.
Complex eta_sum_exact(std::uint64_t l, const Rational& x);

/// 4^n prod_{j<n} sin^2(pi 2^j x).
double riesz_product(unsigned n, double x);

/// c_m(k) = (-1)^m exp(-i k alpha2/2) sinc(alpha2 k/2 + m pi).
Complex coefficient_cm(std::int64_t m, double k, const QuasicrystalParams& params);

struct KappaPair {
    Complex kappa;           // partial sum over even |m| <= M
    Complex kappa_eta;       // partial sum over odd |m| <= M
    Complex kappa_2m;        // same sums at 2M
    Complex kappa_eta_2m;
    Complex kappa_closed;
    Complex kappa_eta_closed;
    std::int64_t m_max = 0;
    bool converged = true;   // |S(M) - S(2M)| <= tolerance for both sums
};

KappaPair kappa_pair(double k, const QuasicrystalParams& params, std::int64_t m_max, double tolerance = 1e-6);

/// Closed forms of kappa and kappa_eta at k.
std::pair<Complex, Complex> kappa_closed(double k, const QuasicrystalParams& params);

/// kappa_eta vanishes exactly iff k(a-b) is in 2 pi Z, i.e. 2 q (a-b)/(a+b) is an integer.
bool kappa_eta_vanishes(const Rational& q, const QuasicrystalParams& params);

/// Denominator of q (lowest terms) is a power of two.
bool is_bragg(const Rational& q);

struct AlphaValue {
    double alpha = 0;
    bool extinct = false;  // the eta sum vanishes, the exponent is -infinity
};

/// alpha_l(x) = log(|Sum_{j<l} eta_j exp(-2 pi i j x)|^2 / l) / log l.
AlphaValue scaling_exponent_alpha(std::uint64_t l, double x);

/// alpha_{2^n}(x) through the Riesz product in log form (no underflow).
AlphaValue scaling_exponent_alpha_dyadic(unsigned n, double x);

/// alpha_{2^n}(x) for x = numerator / 2^bits with exact doubling mod 1;
/// valid for n + 64 <= bits.
AlphaValue scaling_exponent_alpha_dyadic(unsigned n, const Integer& numerator, unsigned bits);

struct PowerFit {
    double alpha = 0;      // slope of log nu against log l
    double intercept = 0;
    double residual = 0;   // root-mean-square residual in log space
    std::size_t points = 0;
};

/// Least-squares fit of log(values) against log(sizes). Requires >= 4 points;
/// throws std::domain_error if any value is (numerically) zero.
PowerFit fit_power_law(const std::vector<double>& sizes, const std::vector<double>& values);

/// A density counts as zero when |sum|^2 is below the rounding floor of an l-term sum.
bool density_is_zero(double density, std::uint64_t l);

PowerFit fitted_alpha(double k, const std::vector<std::uint64_t>& sizes, const QuasicrystalParams& params);

PowerFit fitted_alpha(const Rational& q, const std::vector<std::uint64_t>& sizes, const QuasicrystalParams& params);

/// Sizes p*2^j + 1 for j in [j_min, j_max].
std::vector<std::uint64_t> rarefied_sizes(std::uint64_t p, unsigned j_min, unsigned j_max);

/// Sizes 2^j for j in [j_min, j_max].
std::vector<std::uint64_t> dyadic_sizes(unsigned j_min, unsigned j_max);

}  // namespace tmq
