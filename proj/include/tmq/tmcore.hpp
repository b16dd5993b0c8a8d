#pragma once

#include "tmq/arith.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tmq {

/// Number of ones in the binary expansion of n.
inline unsigned digit_sum(std::uint64_t n) { return static_cast<unsigned>(__builtin_popcountll(n)); }

unsigned digit_sum(const Integer& n);

/// Thue-Morse sign (-1)^{s(n)}.
inline int tm_sign(std::uint64_t n) { return (__builtin_popcountll(n) & 1) ? -1 : 1; }

int tm_sign(const Integer& n);

/// Prefix of the Thue-Morse signs built by the substitution 1 -> 1 -1
/// (block doubling), independent of the popcount definition.
struct SignedSequencePrefix {
    std::vector<std::int8_t> values;
    std::size_t length() const { return values.size(); }
    int operator[](std::size_t n) const { return values[n]; }
};

SignedSequencePrefix tm_prefix(std::size_t length);

/// Tile lengths of the two-letter quasicrystal, 0 < b < a, both exact.
class QuasicrystalParams {
public:
    QuasicrystalParams(Rational a, Rational b);

    static QuasicrystalParams parse(const std::string& a, const std::string& b);

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    Rational half_sum() const { return (a_ + b_) / 2; }   // alpha_1
    Rational half_diff() const { return (a_ - b_) / 2; }  // -alpha_0
    Rational alpha0() const { return -(a_ - b_) / 2; }
    Rational alpha1() const { return (a_ + b_) / 2; }
    Rational alpha2() const { return 2 * (a_ - b_); }

    /// (a-b)/(a+b) in lowest terms; the odd points sit at offsets c*eta from n*(a+b)/2.
    Rational contrast() const { return (a_ - b_) / (a_ + b_); }

    /// gcd(a-b, a+b) after scaling (a, b) to coprime integers.
    Integer gab_content() const;

private:
    Rational a_;
    Rational b_;
};

/// Vertex f(n) of the point set, exact. f(0)=0 and f(-n)=-f(n).
Rational point(const Integer& n, const QuasicrystalParams& params);
Rational point(std::int64_t n, const QuasicrystalParams& params);

/// gcd(a-b, a+b) for coprime integers 0 < b < a.
Integer gab(const Integer& a, const Integer& b);

struct PointSet {
    QuasicrystalParams params;
    std::int64_t n_min = 0;
    std::int64_t n_max = -1;
    std::vector<Rational> coordinates;

    std::size_t size() const { return coordinates.size(); }
};

/// Points f(n) for n in [n_min, n_max].
PointSet point_range(std::int64_t n_min, std::int64_t n_max, const QuasicrystalParams& params);

/// U_l = [0, f(l)] intersected with the nonzero points: f(1), ..., f(l).
PointSet canonical_approximant(std::int64_t l, const QuasicrystalParams& params);

enum class AveragingKind { Canonical, PowerOfTwo, Custom };

/// A strictly increasing list of approximant sizes l; each U_l is the
/// canonical truncation, so every member is a subsequence of it.
struct AveragingSequence {
    AveragingKind kind = AveragingKind::Canonical;
    std::vector<std::uint64_t> lengths;
    std::string weight_support = "n >= 1";

    static AveragingSequence canonical(std::uint64_t count);
    static AveragingSequence power_of_two(unsigned n_min, unsigned n_max);
    static AveragingSequence custom(std::vector<std::uint64_t> lengths);
};

std::string to_string(AveragingKind kind);

/// Bounded real weights omega(n); the default comb is 1 for n >= 1.
using WeightFn = std::function<double(std::uint64_t)>;

inline double unit_weight(std::uint64_t n) { return n >= 1 ? 1.0 : 0.0; }

/// Index n with f(n) == x, if x is a vertex.
std::optional<Integer> vertex_index(const Rational& x, const QuasicrystalParams& params);

struct MeyerReport {
    std::size_t pairs_checked = 0;
    std::size_t failures = 0;
};

/// Checks that every difference of two points with indices in [n_min, n_max]
/// lies in Lambda + F, F = {+-a, +-b, +-2a, +-2b, +-a+-b}.
MeyerReport meyer_spot_check(std::int64_t n_min, std::int64_t n_max, const QuasicrystalParams& params);

}  // namespace tmq
