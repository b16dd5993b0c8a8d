#include "tmq/diffract.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tmq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit_phase(long double turns) {
    // exp(-2 pi i * turns), turns reduced to [-1/2, 1/2] first.
    long double r = turns - std::nearbyint(turns);
    double angle = static_cast<double>(-2.0L * std::numbers::pi_v<long double> * r);
    return {std::cos(angle), std::sin(angle)};
}

// Exact reduction of k f(n) / (2 pi) = q n + q c eta_{n-1} [n odd] modulo 1,
// carried as an integer numerator over a common denominator D.
class ExactPhases {
public:
    ExactPhases(const Rational& q, const QuasicrystalParams& params) {
        Rational qc = q * params.contrast();
        Integer den;
        mpz_lcm(den.get_mpz_t(), q.get_den_mpz_t(), qc.get_den_mpz_t());
        if (!den.fits_ulong_p() || den > Integer("4611686018427387904"))
            throw std::domain_error("denominator of the reduced wave vector is too large");
        d_ = den.get_ui();
        a_ = residue(q * den);
        b_ = residue(qc * den);
        if (d_ <= kTableLimit) {
            table_.resize(d_);
            for (std::uint64_t r = 0; r < d_; ++r)
                table_[r] = unit_phase(static_cast<long double>(r) / static_cast<long double>(d_));
        }
    }

    Complex operator()(std::uint64_t n) const {
        using U = unsigned __int128;
        std::uint64_t r = static_cast<std::uint64_t>((U(n % d_) * a_) % d_);
        if (n & 1U) {
            std::uint64_t shift = tm_sign(n - 1) > 0 ? b_ : (d_ - b_) % d_;
            r = static_cast<std::uint64_t>((U(r) + shift) % d_);
        }
        if (!table_.empty()) return table_[r];
        return unit_phase(static_cast<long double>(r) / static_cast<long double>(d_));
    }

private:
    static constexpr std::uint64_t kTableLimit = 1U << 16;

    std::uint64_t residue(const Rational& integral) const {
        Integer z = integral.get_num();
        Integer m;
        mpz_fdiv_r_ui(m.get_mpz_t(), z.get_mpz_t(), d_);
        return m.get_ui();
    }

    std::uint64_t d_ = 1;
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
    std::vector<Complex> table_;
};

class RealPhases {
public:
    RealPhases(double k, const QuasicrystalParams& params)
        : t1_(static_cast<long double>(k) * to_double(params.half_sum()) / (2.0L * std::numbers::pi_v<long double>)),
          t2_(static_cast<long double>(k) * to_double(params.half_diff()) / (2.0L * std::numbers::pi_v<long double>)) {}

    Complex operator()(std::uint64_t n) const {
        long double turns = static_cast<long double>(n) * t1_;
        if (n & 1U) turns += tm_sign(n - 1) * t2_;
        return unit_phase(turns);
    }

private:
    long double t1_;
    long double t2_;
};

template <class Phases>
std::vector<ApproximantValue> densities_one_pass(const std::vector<std::uint64_t>& sizes, const Phases& phase,
                                                 double k, const WeightFn& weights) {
    std::vector<ApproximantValue> out;
    out.reserve(sizes.size());
    CompensatedSum acc;
    std::uint64_t n = 0;
    for (std::uint64_t l : sizes) {
        if (l == 0) throw std::invalid_argument("approximant size must be >= 1");
        if (l < n) throw std::invalid_argument("approximant sizes must be ascending");
        for (; n < l; ) {
            ++n;
            double w = weights(n);
            if (w != 0.0) acc.add(w * phase(n));
        }
        out.push_back({l, k, std::norm(acc.value()) / static_cast<double>(l)});
    }
    return out;
}

}  // namespace

void CompensatedSum::add_part(double& sum, double& comp, double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

void CompensatedSum::add(Complex z) {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
}

double wavevector(const Rational& q, const QuasicrystalParams& params) {
    return 2.0 * kTwoPi * to_double(Rational(q / (params.a() + params.b())));
}

Complex fourier_sum(std::uint64_t l, double k, const QuasicrystalParams& params, const WeightFn& weights) {
    RealPhases phase(k, params);
    CompensatedSum acc;
    for (std::uint64_t n = 1; n <= l; ++n) {
        double w = weights(n);
        if (w != 0.0) acc.add(w * phase(n));
    }
    return acc.value();
}

Complex fourier_sum_exact(std::uint64_t l, const Rational& q, const QuasicrystalParams& params,
                          const WeightFn& weights) {
    ExactPhases phase(q, params);
    CompensatedSum acc;
    for (std::uint64_t n = 1; n <= l; ++n) {
        double w = weights(n);
        if (w != 0.0) acc.add(w * phase(n));
    }
    return acc.value();
}

Complex fourier_sum(const SignedSequencePrefix& prefix, std::uint64_t l, double k,
                    const QuasicrystalParams& params) {
    if (l >= prefix.length()) throw std::invalid_argument("fourier_sum: prefix shorter than l + 1");
    RealPhases phase(k, params);
    CompensatedSum acc;
    for (std::uint64_t n = 1; n <= l; ++n) acc.add(static_cast<double>(prefix[n]) * phase(n));
    return acc.value();
}

double approximant_density(std::uint64_t l, double k, const QuasicrystalParams& params, const WeightFn& weights) {
    if (l == 0) throw std::invalid_argument("approximant size must be >= 1");
    return std::norm(fourier_sum(l, k, params, weights)) / static_cast<double>(l);
}

double approximant_density_exact(std::uint64_t l, const Rational& q, const QuasicrystalParams& params,
                                 const WeightFn& weights) {
    if (l == 0) throw std::invalid_argument("approximant size must be >= 1");
    return std::norm(fourier_sum_exact(l, q, params, weights)) / static_cast<double>(l);
}

std::vector<ApproximantValue> approximant_densities(const std::vector<std::uint64_t>& sizes, const Rational& q,
                                                    const QuasicrystalParams& params, const WeightFn& weights) {
    return densities_one_pass(sizes, ExactPhases(q, params), wavevector(q, params), weights);
}

std::vector<ApproximantValue> approximant_densities(const std::vector<std::uint64_t>& sizes, double k,
                                                    const QuasicrystalParams& params, const WeightFn& weights) {
    return densities_one_pass(sizes, RealPhases(k, params), k, weights);
}

Complex eta_sum(std::uint64_t l, double x) {
    CompensatedSum acc;
    long double lx = x;
    for (std::uint64_t j = 0; j < l; ++j) acc.add(static_cast<double>(tm_sign(j)) * unit_phase(j * lx));
    return acc.value();
}

Complex eta_sum_exact(std::uint64_t l, const Rational& x) {
    if (!x.get_den().fits_ulong_p()) throw std::domain_error("eta_sum_exact: denominator too large");
    std::uint64_t d = x.get_den().get_ui();
    Integer tz;
    mpz_fdiv_r_ui(tz.get_mpz_t(), x.get_num_mpz_t(), d);
    std::uint64_t t = tz.get_ui();
    std::vector<Complex> table;
    if (d <= (1U << 16)) {
        table.resize(d);
        for (std::uint64_t r = 0; r < d; ++r) table[r] = unit_phase(static_cast<long double>(r) / d);
    }
    CompensatedSum acc;
    std::uint64_t r = 0;
    for (std::uint64_t j = 0; j < l; ++j) {
        Complex z = table.empty() ? unit_phase(static_cast<long double>(r) / d) : table[r];
        acc.add(static_cast<double>(tm_sign(j)) * z);
        r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) + t) % d);
    }
    return acc.value();
}

double riesz_product(unsigned n, double x) {
    double value = 1.0;
    double y = x - std::floor(x);
    for (unsigned j = 0; j < n; ++j) {
        double s = std::sin(std::numbers::pi * y);
        value *= 4.0 * s * s;
        y = 2.0 * y;  // exact doubling, then exact reduction mod 1
        y -= std::floor(y);
    }
    return value;
}

Complex coefficient_cm(std::int64_t m, double k, const QuasicrystalParams& params) {
    double alpha2 = to_double(params.alpha2());
    double x = alpha2 * k / 2.0 + static_cast<double>(m) * std::numbers::pi;
    double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
    Complex rot = std::polar(1.0, -k * alpha2 / 2.0);
    return ((m % 2 == 0) ? 1.0 : -1.0) * sinc * rot;
}

std::pair<Complex, Complex> kappa_closed(double k, const QuasicrystalParams& params) {
    double alpha2 = to_double(params.alpha2());
    Complex full = std::polar(1.0, -k * alpha2);
    Complex half = std::polar(1.0, -k * alpha2 / 2.0);
    Complex mean = (1.0 + full) / 2.0;
    return {0.5 * (mean + half), 0.5 * (mean - half)};
}

KappaPair kappa_pair(double k, const QuasicrystalParams& params, std::int64_t m_max, double tolerance) {
    if (m_max < 1) throw std::invalid_argument("kappa_pair: M must be >= 1");
    KappaPair out;
    out.m_max = m_max;
    // Sum symmetric pairs c_m + c_{-m}. With x = alpha2 k/2 the coefficient
    // is exp(-ix) sin(x)/(x + m pi), which avoids evaluating sin at large arguments.
    double alpha2 = to_double(params.alpha2());
    double x = alpha2 * k / 2.0;
    Complex rot = std::polar(1.0, -x);
    double sx = std::sin(x);
    auto coeff = [&](std::int64_t m) -> double {
        double den = x + static_cast<double>(m) * std::numbers::pi;
        if (den == 0.0) return (m % 2 == 0) ? 1.0 : -1.0;  // sin(x)/x -> 1 times (-1)^m
        return sx / den;
    };
    double even = coeff(0), even_c = 0, odd = 0, odd_c = 0;
    auto accumulate = [](double& s, double& c, double v) {
        double t = s + v;
        c += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
        s = t;
    };
    for (std::int64_t m = 1; m <= 2 * m_max; ++m) {
        double pair = coeff(m) + coeff(-m);
        if (m % 2 == 0)
            accumulate(even, even_c, pair);
        else
            accumulate(odd, odd_c, pair);
        if (m == m_max) {
            out.kappa = (even + even_c) * rot;
            out.kappa_eta = (odd + odd_c) * rot;
        }
    }
    out.kappa_2m = (even + even_c) * rot;
    out.kappa_eta_2m = (odd + odd_c) * rot;
    std::tie(out.kappa_closed, out.kappa_eta_closed) = kappa_closed(k, params);
    out.converged = std::abs(out.kappa - out.kappa_2m) <= tolerance &&
                    std::abs(out.kappa_eta - out.kappa_eta_2m) <= tolerance;
    return out;
}

bool kappa_eta_vanishes(const Rational& q, const QuasicrystalParams& params) {
    Rational v = 2 * q * params.contrast();
    return v.get_den() == 1;
}

bool is_bragg(const Rational& q) {
    const Integer& d = q.get_den();
    return mpz_popcount(d.get_mpz_t()) == 1;
}

AlphaValue scaling_exponent_alpha(std::uint64_t l, double x) {
    if (l < 2) throw std::invalid_argument("scaling_exponent_alpha: l must be >= 2");
    if ((l & (l - 1)) == 0) return scaling_exponent_alpha_dyadic(static_cast<unsigned>(__builtin_ctzll(l)), x);
    double s2 = std::norm(eta_sum(l, x));
    double dl = static_cast<double>(l);
    if (density_is_zero(s2 / dl, l)) return {-std::numeric_limits<double>::infinity(), true};
    return {std::log(s2 / dl) / std::log(dl), false};
}

AlphaValue scaling_exponent_alpha_dyadic(unsigned n, double x) {
    if (n < 1) throw std::invalid_argument("scaling_exponent_alpha: l must be >= 2");
    double y = x - std::floor(x);
    double log_sum = 0;
    for (unsigned j = 0; j < n; ++j) {
        double s = std::sin(std::numbers::pi * y);
        if (s == 0.0) return {-std::numeric_limits<double>::infinity(), true};
        log_sum += std::log(std::fabs(s));
        y = 2.0 * y;
        y -= std::floor(y);
    }
    return {1.0 + 2.0 * log_sum / (n * std::numbers::ln2), false};
}

AlphaValue scaling_exponent_alpha_dyadic(unsigned n, const Integer& numerator, unsigned bits) {
    if (n < 1) throw std::invalid_argument("scaling_exponent_alpha: l must be >= 2");
    if (n + 64 > bits) throw std::invalid_argument("scaling_exponent_alpha: not enough bits for n doublings");
    Integer r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), numerator.get_mpz_t(), bits);
    double log_sum = 0;
    for (unsigned j = 0; j < n; ++j) {
        if (r == 0) return {-std::numeric_limits<double>::infinity(), true};
        long exp = 0;
        double mant = mpz_get_d_2exp(&exp, r.get_mpz_t());
        double y = std::ldexp(mant, static_cast<int>(exp) - static_cast<int>(bits));
        if (y > 0.5) y = 1.0 - y;
        double s = std::sin(std::numbers::pi * y);
        log_sum += std::log(s);
        mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 1);
        mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), bits);
    }
    return {1.0 + 2.0 * log_sum / (n * std::numbers::ln2), false};
}

bool density_is_zero(double density, std::uint64_t l) {
    double floor_abs = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(l);
    return density * static_cast<double>(l) <= floor_abs * floor_abs;
}

PowerFit fit_power_law(const std::vector<double>& sizes, const std::vector<double>& values) {
    if (sizes.size() != values.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (sizes.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 sizes");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::domain_error("fit_power_law: zero density at a sampled size");
        xs.push_back(std::log(sizes[i]));
        ys.push_back(std::log(values[i]));
    }
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: sizes must be distinct");
    PowerFit fit;
    fit.alpha = sxy / sxx;
    fit.intercept = my - fit.alpha * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (fit.intercept + fit.alpha * xs[i]);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    fit.points = xs.size();
    return fit;
}

namespace {

PowerFit fit_values(const std::vector<ApproximantValue>& values) {
    std::vector<double> ls, nus;
    for (const auto& v : values) {
        if (density_is_zero(v.density, v.l))
            throw std::domain_error("fitted_alpha: density vanishes at l = " + std::to_string(v.l));
        ls.push_back(static_cast<double>(v.l));
        nus.push_back(v.density);
    }
    return fit_power_law(ls, nus);
}

}  // namespace

PowerFit fitted_alpha(double k, const std::vector<std::uint64_t>& sizes, const QuasicrystalParams& params) {
    return fit_values(approximant_densities(sizes, k, params));
}

PowerFit fitted_alpha(const Rational& q, const std::vector<std::uint64_t>& sizes, const QuasicrystalParams& params) {
    return fit_values(approximant_densities(sizes, q, params));
}

std::vector<std::uint64_t> rarefied_sizes(std::uint64_t p, unsigned j_min, unsigned j_max) {
    std::vector<std::uint64_t> out;
    for (unsigned j = j_min; j <= j_max; ++j) out.push_back(p * (std::uint64_t{1} << j) + 1);
    return out;
}

std::vector<std::uint64_t> dyadic_sizes(unsigned j_min, unsigned j_max) {
    std::vector<std::uint64_t> out;
    for (unsigned j = j_min; j <= j_max; ++j) out.push_back(std::uint64_t{1} << j);
    return out;
}

}  // namespace tmq
