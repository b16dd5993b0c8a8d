#pragma once

#include "tmq/diffract.hpp"
#include "tmq/quadfield.hpp"
#include "tmq/rareclass.hpp"
#include "tmq/tmcore.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmq {

/// q = t / (2^h p) in lowest terms with p odd.
struct NormalizedWaveVector {
    Integer t;
    unsigned h = 0;
    Integer p;
    Rational q;
    double k = 0;
};

NormalizedWaveVector normalize_wavevector(const Rational& q, const QuasicrystalParams& params);

enum class VerdictKind { Bragg, SingularContinuous, Excluded, AlmostSureNull };
enum class ExponentSource { None, ClassFormula, Eigenvalues, Grabner, Fitted };

std::string to_string(VerdictKind kind);
std::string to_string(ExponentSource source);

struct SpectralVerdict {
    VerdictKind kind = VerdictKind::AlmostSureNull;
    std::optional<NormalizedWaveVector> wave;
    std::optional<double> alpha;
    std::optional<double> beta;
    Complex kappa_eta;
    bool kappa_eta_exact_zero = false;  // 2q(a-b)/(a+b) is an integer
    bool kappa_eta_boundary = false;    // numeric and exact zero tests disagree
    ExponentSource source = ExponentSource::None;
    bool exponent_unproven = false;
    bool conjectural = false;
    std::optional<PowerFit> fit;
    std::string subsequence;
    /// 2 log|mu_t| / (s log 2) - 1 for the DFT mode of t (prime p only); differs
    /// from alpha when t lies outside the dominant cosets.
    std::optional<double> coset_alpha;
};

struct ClassifyOptions {
    bool fit = false;               // also fit alpha empirically along l = p 2^j + 1
    unsigned horizon_exponent = 20; // largest fitted size is below 2^horizon_exponent
    unsigned j_min = 2;
};

/// Bragg when the odd part of the denominator is 1, Excluded when kappa_eta(k) = 0,
/// SingularContinuous otherwise.
SpectralVerdict classify(const Rational& q, const QuasicrystalParams& params,
                         const ClassifyOptions& options = {});

/// Wave vectors outside (4 pi/(a+b)) Q are only decided up to a null set.
SpectralVerdict classify_irrational(double k, const QuasicrystalParams& params);

/// alpha = 2 beta(p) - 1 for an odd prime p; independent of h.
double alpha_exact(std::uint64_t p, unsigned h);

struct HalvingReduction {
    double prefactor = 0;   // 2^h prod_{j<h} sin^2(pi 2^j t/(2^h p))
    double reduced = 0;     // (1/2^{n-h}) |sum_{j=1}^{2^{n-h}} eta_{j-1} e^{-2 pi i j t/p}|^2
    double full = 0;        // (1/2^n) |sum_{j=1}^{2^n} eta_{j-1} e^{-2 pi i j t/(2^h p)}|^2
    double relative_error = 0;
};

HalvingReduction halving_reduction(const Integer& t, unsigned h, std::uint64_t p, unsigned n);

struct QratCheck {
    double lhs = 0;            // (1/(Np+1)) |sum_{n=1}^{Np+1} eta_{n-1} e^{-2 pi i n t/p}|^2
    double rhs_literal = 0;    // same normalization with S_{p,j}(Np)
    double rhs_corrected = 0;  // with S_{p,j}(Np+1)
    double literal_error = 0;  // relative
    double corrected_error = 0;
    bool corrected_exact = false;  // autocorrelations in Z[w] agree exactly
};

QratCheck qrat_check(std::uint64_t p, std::uint64_t t, std::uint64_t big_n);

struct RarefactionDomain {
    std::uint64_t p = 0;
    std::uint64_t t = 0;
    std::complex<double> xi;                 // e^{-2 pi i t/p}
    std::vector<std::pair<double, double>> box;  // [inf psi_hat_j, sup psi_hat_j]
    std::vector<std::complex<double>> vertices;  // zonotope image of the box
    double min_mod = 0;
    double max_mod = 0;
    bool contains_zero = false;
    double curve_min_mod = 0;  // over sampled points (sum_j psi_hat_j(x) xi^j)
    double curve_max_mod = 0;
    std::string warning;
};

/// Image of the empirical psi box under y -> sum y_j xi^j. The image is a zonotope,
/// so the extremes of |z| are exact once the box is fixed.
RarefactionDomain rarefaction_domain(std::uint64_t t, std::uint64_t p, unsigned horizon_exponent,
                                     unsigned resolution = 1024);

/// Zonotope extremes for an explicit box; exposed for testing.
RarefactionDomain zonotope_domain(std::uint64_t t, std::uint64_t p, const std::vector<std::pair<double, double>>& box);

struct LimsupCheck {
    double empirical = 0;           // max over sampled l = Np+1 of nu_l / l^alpha
    double predicted_kappa = 0;     // |kappa_eta|^2 maxMod^2
    double predicted_eta_part = 0;  // |sin(k(a-b)/2)|^2 2^{-2 beta} * (curve max over xi_{2t})^2
    double kappa_ratio = 0;         // empirical / predicted_kappa
    double eta_part_ratio = 0;
};

LimsupCheck limsup_check(const Rational& q, const QuasicrystalParams& params, unsigned horizon_exponent);

bool extinction_possible(const RarefactionDomain& domain);

struct ExtinctionScan {
    std::size_t subsequences = 0;
    std::size_t sizes_per_subsequence = 0;
    double min_ratio = 0;           // min over all sampled l of nu_l / l^alpha
    double threshold = 0;
    bool bounded_away = false;      // min_ratio >= threshold
};

/// Samples `count` random subsequences of l = Np+1 in [2^10, 2^horizon_exponent] and reports
/// the smallest nu_l / l^alpha. Rejects Bragg wave vectors.
ExtinctionScan extinction_scan(const Rational& q, const QuasicrystalParams& params, unsigned horizon_exponent,
                               std::size_t count, std::uint64_t seed);

enum class GrowthRegime { SizeIncreasing, Etale, SizeDecreasing };

std::string to_string(GrowthRegime regime);

/// Sign of alpha with the split at +-1e-12; alpha must lie in (-1, 1).
GrowthRegime growth_regime(double alpha);

struct MarcinkiewiczEstimate {
    double estimate = 0;          // max over l in [L/2, L] of (1/l) sum_{n<=l} |w(n)|
    double at_half = 0;           // value at l = L/2
    double at_full = 0;           // value at l = L
};

MarcinkiewiczEstimate marcinkiewicz_norm(const WeightFn& weights, std::uint64_t horizon);

struct InvarianceRow {
    std::uint64_t horizon = 0;
    double intensity1 = 0;        // |sum_{n<=L} w1(n) e^{-ik f(n)}|^2 / L^2
    double intensity2 = 0;
    double norm1 = 0, norm2 = 0;  // Marcinkiewicz estimates
    double diff_norm = 0;         // estimate for w1 - w2
    bool bound1 = true, bound2 = true;  // I_w <= ||w||^2 + tol
};

struct InvarianceReport {
    std::vector<InvarianceRow> rows;
    bool bounds_hold = true;
    double final_gap = 0;         // |I1 - I2| at the largest horizon
};

InvarianceReport class_invariance_check(const WeightFn& w1, const WeightFn& w2, const Rational& q,
                                        const QuasicrystalParams& params, const std::vector<std::uint64_t>& horizons);

/// Deterministic pseudo-random weights in [-amplitude, amplitude].
WeightFn random_weights(std::uint64_t seed, double amplitude = 1.0);

}  // namespace tmq
