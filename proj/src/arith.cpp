#include "tmq/arith.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tmq {

namespace {

bool all_digits(const std::string& s, std::size_t from) {
    if (from >= s.size()) return false;
    for (std::size_t i = from; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

Integer parse_integer(const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (!all_digits(s, start)) throw std::invalid_argument("malformed integer '" + s + "'");
    Integer z;
    z.set_str(s[0] == '+' ? s.substr(1) : s, 10);
    return z;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    if (auto slash = text.find('/'); slash != std::string::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        std::string den_text = text.substr(slash + 1);
        if (den_text.empty() || !all_digits(den_text, 0))
            throw std::invalid_argument("malformed rational '" + text + "'");
        Integer den = parse_integer(den_text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        std::string digits = whole;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.erase(0, 1);
        if (digits.empty()) digits = "0";
        if (!all_digits(digits, 0) || (!frac.empty() && !all_digits(frac, 0)))
            throw std::invalid_argument("malformed decimal '" + text + "'");
        Integer num;
        num.set_str(digits + frac, 10);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational q(negative ? Integer(-num) : num, den);
        q.canonicalize();
        return q;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

long double log_abs(const Integer& z) {
    if (z == 0) throw std::domain_error("log of zero");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(static_cast<long double>(mant))) +
           static_cast<long double>(exp) * std::log(2.0L);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    if (mod == 1) return 0;
    unsigned __int128 result = 1;
    unsigned __int128 b = base % mod;
    while (exp) {
        if (exp & 1) result = (result * b) % mod;
        b = (b * b) % mod;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Deterministic witness set for all 64-bit n.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (m < 2 || std::gcd(a % m, m) != 1)
        throw std::invalid_argument("multiplicative_order: a must be invertible modulo m >= 2");
    // Carmichael-free route: start from phi(m) and strip prime factors.
    std::uint64_t phi = m;
    for (auto f : prime_factors(m)) phi = phi / f * (f - 1);
    std::uint64_t order = phi;
    for (auto f : prime_factors(phi)) {
        while (order % f == 0 && mod_pow(a, order / f, m) == 1) order /= f;
    }
    return order;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        __int128 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

std::pair<unsigned, Integer> split_two_power(const Integer& n) {
    if (n == 0) throw std::invalid_argument("split_two_power: zero");
    Integer odd = abs(n);
    unsigned h = static_cast<unsigned>(mpz_scan1(odd.get_mpz_t(), 0));
    mpz_fdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), h);
    return {h, odd};
}

}  // namespace tmq
