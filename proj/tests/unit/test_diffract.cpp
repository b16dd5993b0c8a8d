#include <doctest.h>

#include "tmq/diffract.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tmq;

namespace {

// Plain sum over the vertices 1..l with no phase reduction tricks.
Complex naive_sum(std::uint64_t l, double k, const QuasicrystalParams& params) {
    std::complex<long double> acc = 0;
    for (std::uint64_t n = 1; n <= l; ++n) {
        long double x = static_cast<long double>(to_double(point(static_cast<std::int64_t>(n), params)));
        acc += std::polar(1.0L, -static_cast<long double>(k) * x);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

Complex naive_eta(std::uint64_t l, double x) {
    std::complex<long double> acc = 0;
    for (std::uint64_t j = 0; j < l; ++j) {
        int s = __builtin_popcountll(j) % 2 ? -1 : 1;
        acc += static_cast<long double>(s) * std::polar(1.0L, -2.0L * std::numbers::pi_v<long double> * j * x);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

TEST_CASE("fourier sums match the direct vertex sum") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (auto [a, b] : {std::pair{"2", "1"}, std::pair{"5/2", "1"}}) {
        auto params = QuasicrystalParams::parse(a, b);
        for (int trial = 0; trial < 20; ++trial) {
            double k = u(rng);
            for (std::uint64_t l : {1, 17, 300}) {
                Complex fast = fourier_sum(l, k, params);
                Complex slow = naive_sum(l, k, params);
                CHECK(std::abs(fast - slow) < 1e-9 * l);
            }
        }
    }
}

TEST_CASE("exact rational phases agree with real phases") {
    auto params = QuasicrystalParams::parse("2", "1");
    for (auto q : {Rational(1, 3), Rational(2, 7), Rational(5, 12), Rational(1, 4)}) {
        double k = wavevector(q, params);
        for (std::uint64_t l : {10, 257, 1000}) {
            CHECK(std::abs(fourier_sum_exact(l, q, params) - fourier_sum(l, k, params)) < 1e-9 * l);
        }
    }
}

TEST_CASE("density at k = 0 equals l") {
    auto params = QuasicrystalParams::parse("2", "1");
    for (std::uint64_t l : {1, 5, 64, 1000}) CHECK(approximant_density(l, 0.0, params) == doctest::Approx(l));
    auto vals = approximant_densities({3, 9, 27}, Rational(0), params);
    for (const auto& v : vals) CHECK(v.density == doctest::Approx(v.l));
}

TEST_CASE("one-pass densities match individual densities") {
    auto params = QuasicrystalParams::parse("3", "1");
    std::vector<std::uint64_t> sizes{4, 50, 51, 600};
    auto vals = approximant_densities(sizes, Rational(1, 5), params);
    for (const auto& v : vals) CHECK(v.density == doctest::Approx(approximant_density_exact(v.l, Rational(1, 5), params)));
    CHECK_THROWS(approximant_densities({5, 4}, Rational(1, 5), params));
}

TEST_CASE("Riesz product equals the squared eta sum") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double x = u(rng);
        for (unsigned n = 0; n <= 10; ++n) {
            double direct = std::norm(naive_eta(std::uint64_t{1} << n, x));
            CHECK(riesz_product(n, x) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
        }
    }
    CHECK(std::abs(eta_sum_exact(1024, Rational(1, 3)) - naive_eta(1024, 1.0 / 3.0)) < 1e-9);
}

TEST_CASE("kappa partial sums approach the closed form") {
    auto params = QuasicrystalParams::parse("2", "1");
    for (double k : {0.3, 0.9, 2.5}) {
        auto pair = kappa_pair(k, params, 20000, 1e-4);
        CHECK(pair.converged);
        CHECK(std::abs(pair.kappa - pair.kappa_closed) < 1e-4);
        CHECK(std::abs(pair.kappa_eta - pair.kappa_eta_closed) < 1e-4);
        Complex c0 = coefficient_cm(0, k, params);
        double x = to_double(params.alpha2()) * k / 2.0;
        CHECK(std::abs(c0 - std::polar(std::sin(x) / x, -x)) < 1e-15);
    }
}

TEST_CASE("kappa_eta zero locus") {
    auto params = QuasicrystalParams::parse("4", "1");
    CHECK(kappa_eta_vanishes(Rational(5, 3), params));
    CHECK_FALSE(kappa_eta_vanishes(Rational(1, 3), params));
    auto [kap, kap_eta] = kappa_closed(wavevector(Rational(5, 3), params), params);
    CHECK(std::abs(kap_eta) < 1e-12);
    CHECK(is_bragg(Rational(3, 8)));
    CHECK_FALSE(is_bragg(Rational(1, 6)));
}

TEST_CASE("scaling exponent") {
    CHECK(scaling_exponent_alpha(2, 0.5).alpha == doctest::Approx(1.0));
    CHECK(scaling_exponent_alpha(8, 0.0).extinct);
    for (double x : {0.1, 0.37, 0.81}) {
        double direct = std::norm(naive_eta(1024, x)) / 1024.0;
        CHECK(scaling_exponent_alpha(1024, x).alpha == doctest::Approx(std::log(direct) / std::log(1024.0)));
        double direct_non_dyadic = std::norm(naive_eta(1000, x)) / 1000.0;
        CHECK(scaling_exponent_alpha(1000, x).alpha == doctest::Approx(std::log(direct_non_dyadic) / std::log(1000.0)));
    }
    // Exact doubling of 3/2^12 matches the floating-point version.
    CHECK(scaling_exponent_alpha_dyadic(10, Integer(3) << 64, 76).alpha ==
          doctest::Approx(scaling_exponent_alpha_dyadic(10, 3.0 / 4096.0).alpha));
}

TEST_CASE("power-law fit recovers a synthetic slope") {
    std::vector<double> x, y;
    for (int j = 4; j < 20; ++j) {
        double l = std::ldexp(1.0, j);
        x.push_back(l);
        y.push_back(2.5 * std::pow(l, -0.3));
    }
    auto fit = fit_power_law(x, y);
    CHECK(fit.alpha == doctest::Approx(-0.3));
    CHECK(std::exp(fit.intercept) == doctest::Approx(2.5));
    CHECK(fit.residual < 1e-10);
    CHECK_THROWS(fit_power_law({1, 2}, {1, 2}));
    CHECK(rarefied_sizes(3, 2, 4) == std::vector<std::uint64_t>{13, 25, 49});
}
