#include <doctest.h>

#include "tmq/tmcore.hpp"

using namespace tmq;

namespace {

int naive_sign(std::uint64_t n) {
    int s = 1;
    for (; n; n >>= 1)
        if (n & 1) s = -s;
    return s;
}

}  // namespace

TEST_CASE("Thue-Morse signs and prefix") {
    auto prefix = tm_prefix(5000);
    REQUIRE(prefix.length() == 5000);
    for (std::uint64_t n = 0; n < 5000; ++n) {
        CHECK(prefix[n] == naive_sign(n));
        CHECK(tm_sign(n) == naive_sign(n));
        CHECK(tm_sign(Integer(static_cast<unsigned long>(n))) == naive_sign(n));
    }
    Integer big = Integer(1) << 200;
    CHECK(digit_sum(big + 3) == 3);
}

TEST_CASE("vertices accumulate tiles a where eta is +1 and b where it is -1") {
    for (auto [a, b] : {std::pair{"2", "1"}, std::pair{"7/3", "1/2"}, std::pair{"5", "4"}}) {
        auto params = QuasicrystalParams::parse(a, b);
        Rational x = 0;
        for (std::int64_t n = 0; n < 600; ++n) {
            CHECK(point(n, params) == x);
            CHECK(point(-n, params) == -x);
            x += tm_sign(static_cast<std::uint64_t>(n)) == 1 ? params.a() : params.b();
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS(QuasicrystalParams::parse("1", "2"));
    CHECK_THROWS(QuasicrystalParams::parse("1", "1"));
    CHECK_THROWS(QuasicrystalParams::parse("1", "0"));
    auto params = QuasicrystalParams::parse("2", "1");
    CHECK(params.contrast() == Rational(1, 3));
    CHECK(params.alpha2() == 2);
}

TEST_CASE("vertex_index inverts point") {
    auto params = QuasicrystalParams::parse("3", "2");
    for (std::int64_t n = -300; n <= 300; ++n) {
        auto idx = vertex_index(point(n, params), params);
        REQUIRE(idx.has_value());
        CHECK(*idx == n);
    }
    CHECK_FALSE(vertex_index(Rational(1, 2), params).has_value());
}

TEST_CASE("Meyer difference set stays in the finite set") {
    auto report = meyer_spot_check(-200, 200, QuasicrystalParams::parse("2", "1"));
    CHECK(report.pairs_checked > 0);
    CHECK(report.failures == 0);
}

TEST_CASE("averaging sequences") {
    auto c = AveragingSequence::canonical(4);
    CHECK(c.lengths == std::vector<std::uint64_t>{1, 2, 3, 4});
    auto d = AveragingSequence::power_of_two(2, 4);
    CHECK(d.lengths == std::vector<std::uint64_t>{4, 8, 16});
    CHECK_THROWS(AveragingSequence::custom({3, 3}));
    CHECK(canonical_approximant(5, QuasicrystalParams::parse("2", "1")).size() == 5);
}
