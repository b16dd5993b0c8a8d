#include <doctest.h>

#include "tmq/quadfield.hpp"

#include <cmath>

using namespace tmq;

TEST_CASE("prime classes follow the order of 2") {
    for (std::uint64_t p : odd_primes_below(400)) {
        std::uint64_t s = 1, x = 2 % p;
        while (x != 1) x = x * 2 % p, ++s;
        CHECK(order_of_two(p) == s);
        PrimeClass expected = PrimeClass::Other;
        if (s == p - 1) expected = PrimeClass::P1;
        else if (2 * s == p - 1) expected = p % 4 == 1 ? PrimeClass::P21 : PrimeClass::P23;
        CHECK(classify_prime(p) == expected);
    }
}

TEST_CASE("Legendre symbol agrees with Euler's criterion") {
    for (std::uint64_t p : {5, 13, 17, 41}) {
        for (std::uint64_t a = 1; a < p; ++a) {
            bool square = false;
            for (std::uint64_t x = 1; x < p; ++x) square |= x * x % p == a;
            CHECK(legendre(a, p) == (square ? 1 : -1));
        }
    }
}

TEST_CASE("fundamental units by brute force search") {
    for (std::uint64_t p : {5, 13, 17, 29, 37, 41, 53}) {
        auto unit = fundamental_unit(p);
        CHECK(std::abs(unit.norm) == 1);
        CHECK(unit_norm(unit.u, unit.v, p) == unit.norm);
        // smallest x + y sqrt(p) > 1 with x^2 - p y^2 = +-4, halved
        double best = 0;
        for (long y = 1; y < 2000 && best == 0; ++y) {
            for (long sign : {-4, 4}) {
                long x2 = static_cast<long>(p) * y * y + sign;
                long x = std::lround(std::sqrt(static_cast<double>(x2)));
                if (x > 0 && x * x == x2) {
                    double e = (x + y * std::sqrt(static_cast<double>(p))) / 2.0;
                    if (best == 0 || e < best) best = e;
                }
            }
        }
        CHECK(static_cast<double>(unit.value) == doctest::Approx(best));
    }
    CHECK(fundamental_unit(17).to_string() == "3+2ω");
}

TEST_CASE("class numbers") {
    for (std::uint64_t p : {5, 13, 17, 29, 41, 97}) CHECK(class_number(p).h == 1);
    auto c229 = class_number(229);
    CHECK(c229.h == 3);
    CHECK(c229.near_integer);
}

TEST_CASE("records for the first split primes") {
    auto r17 = prime_record(17);
    CHECK(r17.cls == PrimeClass::P21);
    REQUIRE(r17.beta);
    CHECK(*r17.beta == doctest::Approx(prime_record_with_eigen_beta(17).beta.value()).epsilon(1e-9));
    CHECK(beta_for_class(prime_record(31)) == std::nullopt);
    auto r7 = prime_record(7);
    CHECK(r7.cls == PrimeClass::P23);
    CHECK(*r7.beta == doctest::Approx(std::log(7.0) / (2.0 * 3.0 * std::log(2.0))));
}
