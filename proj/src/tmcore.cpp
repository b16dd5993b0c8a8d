#include "tmq/tmcore.hpp"

#include <stdexcept>

namespace tmq {

unsigned digit_sum(const Integer& n) {
    if (n < 0) throw std::invalid_argument("digit_sum: negative argument");
    return static_cast<unsigned>(mpz_popcount(n.get_mpz_t()));
}

int tm_sign(const Integer& n) { return (digit_sum(n) & 1U) ? -1 : 1; }

SignedSequencePrefix tm_prefix(std::size_t length) {
    SignedSequencePrefix out;
    out.values.reserve(length);
    if (length == 0) return out;
    out.values.push_back(1);
    while (out.values.size() < length) {
        std::size_t half = out.values.size();
        for (std::size_t i = 0; i < half && out.values.size() < length; ++i)
            out.values.push_back(static_cast<std::int8_t>(-out.values[i]));
    }
    return out;
}

QuasicrystalParams::QuasicrystalParams(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
    if (!(b_ > 0) || !(b_ < a_)) throw std::invalid_argument("tile lengths must satisfy 0 < b < a");
}

QuasicrystalParams QuasicrystalParams::parse(const std::string& a, const std::string& b) {
    return QuasicrystalParams(parse_rational(a), parse_rational(b));
}

Integer QuasicrystalParams::gab_content() const {
    Integer den;
    mpz_lcm(den.get_mpz_t(), a_.get_den_mpz_t(), b_.get_den_mpz_t());
    Integer ia = a_.get_num() * (den / a_.get_den());
    Integer ib = b_.get_num() * (den / b_.get_den());
    Integer g;
    mpz_gcd(g.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
    return gab(ia / g, ib / g);
}

Rational point(const Integer& n, const QuasicrystalParams& params) {
    if (n < 0) return -point(Integer(-n), params);
    Rational base = Rational(n) * params.half_sum();
    if (mpz_even_p(n.get_mpz_t())) return base;
    return base + params.half_diff() * tm_sign(Integer(n - 1));
}

Rational point(std::int64_t n, const QuasicrystalParams& params) {
    if (n < 0) return -point(-n, params);
    Rational base = Rational(Integer(static_cast<long>(n))) * params.half_sum();
    if (n % 2 == 0) return base;
    return base + params.half_diff() * tm_sign(static_cast<std::uint64_t>(n - 1));
}

Integer gab(const Integer& a, const Integer& b) {
    if (!(b > 0) || !(b < a)) throw std::invalid_argument("gab: need 0 < b < a");
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw std::invalid_argument("gab: a and b must be coprime");
    Integer d = a - b, s = a + b;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), s.get_mpz_t());
    return g;
}

PointSet point_range(std::int64_t n_min, std::int64_t n_max, const QuasicrystalParams& params) {
    PointSet out{params, n_min, n_max, {}};
    if (n_max >= n_min) out.coordinates.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (std::int64_t n = n_min; n <= n_max; ++n) out.coordinates.push_back(point(n, params));
    return out;
}

PointSet canonical_approximant(std::int64_t l, const QuasicrystalParams& params) {
    if (l < 1) throw std::invalid_argument("canonical_approximant: l must be >= 1");
    return point_range(1, l, params);
}

AveragingSequence AveragingSequence::canonical(std::uint64_t count) {
    AveragingSequence seq;
    seq.kind = AveragingKind::Canonical;
    for (std::uint64_t l = 1; l <= count; ++l) seq.lengths.push_back(l);
    return seq;
}

AveragingSequence AveragingSequence::power_of_two(unsigned n_min, unsigned n_max) {
    if (n_max > 62) throw std::invalid_argument("power_of_two: exponent too large");
    AveragingSequence seq;
    seq.kind = AveragingKind::PowerOfTwo;
    for (unsigned n = n_min; n <= n_max; ++n) seq.lengths.push_back(std::uint64_t{1} << n);
    return seq;
}

AveragingSequence AveragingSequence::custom(std::vector<std::uint64_t> lengths) {
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] == 0) throw std::invalid_argument("averaging sizes must be positive");
        if (i > 0 && lengths[i] <= lengths[i - 1])
            throw std::invalid_argument("averaging sizes must be strictly increasing");
    }
    AveragingSequence seq;
    seq.kind = AveragingKind::Custom;
    seq.lengths = std::move(lengths);
    return seq;
}

std::string to_string(AveragingKind kind) {
    switch (kind) {
        case AveragingKind::Canonical: return "canonical";
        case AveragingKind::PowerOfTwo: return "power-of-two";
        case AveragingKind::Custom: return "custom";
    }
    return "unknown";
}

std::optional<Integer> vertex_index(const Rational& x, const QuasicrystalParams& params) {
    // f(n) is within (a-b)/2 < (a+b)/2 of n(a+b)/2, so n is one of a few candidates.
    Rational scaled = x / params.half_sum();
    Integer guess;
    mpz_fdiv_q(guess.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    for (int d = -1; d <= 2; ++d) {
        Integer n = guess + d;
        if (point(n, params) == x) return n;
    }
    return std::nullopt;
}

MeyerReport meyer_spot_check(std::int64_t n_min, std::int64_t n_max, const QuasicrystalParams& params) {
    const Rational& a = params.a();
    const Rational& b = params.b();
    const std::vector<Rational> shifts = {a, -a, b, -b, 2 * a, -2 * a, 2 * b, -2 * b,
                                          a + b, a - b, b - a, -a - b};
    PointSet pts = point_range(n_min, n_max, params);
    MeyerReport report;
    for (const auto& x : pts.coordinates) {
        for (const auto& y : pts.coordinates) {
            ++report.pairs_checked;
            Rational d = x - y;
            bool ok = false;
            for (const auto& f : shifts) {
                if (vertex_index(Rational(d - f), params)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) ++report.failures;
        }
    }
    return report;
}

}  // namespace tmq
