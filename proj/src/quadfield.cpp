#include "tmq/quadfield.hpp"

#include "tmq/rareclass.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tmq {

namespace {

void require_odd_prime(std::uint64_t p) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

void require_one_mod_four(std::uint64_t p) {
    require_odd_prime(p);
    if (p % 4 != 1) throw std::invalid_argument("p must be a prime congruent to 1 mod 4");
}

long double to_ld(const Integer& z) {
    if (z == 0) return 0.0L;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::ldexp(static_cast<long double>(mant), static_cast<int>(exp));
}

}  // namespace

std::string to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::P1: return "P1";
        case PrimeClass::P21: return "P21";
        case PrimeClass::P23: return "P23";
        case PrimeClass::Other: return "Other";
    }
    return "unknown";
}

std::uint64_t order_of_two(std::uint64_t p) {
    require_odd_prime(p);
    return multiplicative_order(2, p);
}

PrimeClass classify_prime(std::uint64_t p) {
    std::uint64_t s = order_of_two(p);
    if (s == p - 1) return PrimeClass::P1;
    if (2 * s == p - 1) return (p % 4 == 1) ? PrimeClass::P21 : PrimeClass::P23;
    return PrimeClass::Other;
}

std::string FundamentalUnit::to_string() const {
    std::string out = u.get_str();
    out += (v < 0) ? "-" : "+";
    Integer av = abs(v);
    if (av != 1) out += av.get_str();
    out += "ω";
    return out;
}

Integer unit_norm(const Integer& u, const Integer& v, std::uint64_t p) {
    Integer quarter = Integer(static_cast<unsigned long>((p - 1) / 4));
    return u * u + u * v - v * v * quarter;
}

FundamentalUnit fundamental_unit(std::uint64_t p) {
    require_one_mod_four(p);
    Integer root;
    Integer pz(static_cast<unsigned long>(p));
    mpz_sqrt(root.get_mpz_t(), pz.get_mpz_t());
    // omega = (P + sqrt p)/Q with P = 1, Q = 2; Q always divides p - P^2.
    Integer P = 1, Q = 2;
    Integer h_prev = 1, h_prev2 = 0;
    Integer k_prev = 0, k_prev2 = 1;
    for (std::uint64_t iter = 0; iter < 20 * p + 100; ++iter) {
        Integer a;
        Integer num = P + root;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        Integer h = a * h_prev + h_prev2;
        Integer k = a * k_prev + k_prev2;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        // Convergent h/k of omega; (h - k) + k omega is a unit when its norm is +-1.
        Integer u = h - k, v = k;
        Integer n = unit_norm(u, v, p);
        if (n == 1 || n == -1) {
            FundamentalUnit out;
            out.u = u;
            out.v = v;
            out.norm = (n == 1) ? 1 : -1;
            long double omega = (1.0L + std::sqrt(static_cast<long double>(p))) / 2.0L;
            out.value = to_ld(u) + to_ld(v) * omega;
            out.log_value = std::log(out.value);
            return out;
        }
        Integer P_next = a * Q - P;
        Integer Q_next = (pz - P_next * P_next) / Q;
        P = P_next;
        Q = Q_next;
    }
    throw std::runtime_error("fundamental_unit: continued fraction did not close");
}

int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    return mod_pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

long double l_value(std::uint64_t p) {
    require_one_mod_four(p);
    long double sum = 0;
    for (std::uint64_t a = 1; a < p; ++a) {
        long double s = std::sin(std::numbers::pi_v<long double> * static_cast<long double>(a) / p);
        sum += legendre(a, p) * std::log(s);
    }
    return -sum / std::sqrt(static_cast<long double>(p));
}

ClassNumber class_number(std::uint64_t p) {
    FundamentalUnit eps = fundamental_unit(p);
    long double sp = std::sqrt(static_cast<long double>(p));
    long double lv = l_value(p);
    ClassNumber out;
    out.raw = sp * lv / (2.0L * eps.log_value);
    long double rounded = std::nearbyint(out.raw);
    out.h = rounded < 1 ? 1 : static_cast<std::uint64_t>(rounded);
    out.near_integer = std::fabs(out.raw - rounded) <= 1e-6L && rounded >= 1;
    out.closure = std::fabs(2.0L * out.h * eps.log_value - sp * lv);
    return out;
}

PrimeClassRecord prime_record(std::uint64_t p) {
    PrimeClassRecord rec;
    rec.p = p;
    rec.s = order_of_two(p);
    rec.cls = classify_prime(p);
    long double lp = std::log(static_cast<long double>(p));
    long double sp = std::sqrt(static_cast<long double>(p));
    switch (rec.cls) {
        case PrimeClass::P1:
            rec.lambda1 = p;
            rec.lambda2 = 0;
            break;
        case PrimeClass::P21: {
            FundamentalUnit eps = fundamental_unit(p);
            ClassNumber cn = class_number(p);
            rec.epsilon = eps;
            rec.h = cn.h;
            rec.regulator = eps.log_value;
            rec.class_number_drift = !cn.near_integer;
            long double eh = std::exp(static_cast<long double>(cn.h) * eps.log_value);
            rec.lambda1 = eh * sp;
            rec.lambda2 = sp / eh;
            rec.hua_ok = l_value(p) < lp / 2.0L + 1.0L;
            break;
        }
        case PrimeClass::P23:
            rec.lambda1 = sp;
            break;
        case PrimeClass::Other:
            break;
    }
    rec.beta = beta_for_class(rec);
    return rec;
}

std::optional<double> beta_for_class(const PrimeClassRecord& rec) {
    long double lp = std::log(static_cast<long double>(rec.p));
    long double den = (static_cast<long double>(rec.p) - 1) * std::log(2.0L);
    switch (rec.cls) {
        case PrimeClass::P1:
        case PrimeClass::P23:
            return static_cast<double>(lp / den);
        case PrimeClass::P21:
            if (!rec.h || !rec.epsilon) return std::nullopt;
            return static_cast<double>((lp + 2.0L * static_cast<long double>(*rec.h) * rec.epsilon->log_value) / den);
        case PrimeClass::Other:
            return std::nullopt;
    }
    return std::nullopt;
}

PrimeClassRecord prime_record_with_eigen_beta(std::uint64_t p) {
    PrimeClassRecord rec = prime_record(p);
    if (rec.cls != PrimeClass::Other) return rec;
    auto eig = eigenvalues_explicit(p);
    long double l1 = 0, l2 = 0;
    for (const auto& e : eig) l1 = std::max(l1, std::abs(e.xi));
    for (const auto& e : eig) {
        long double m = std::abs(e.xi);
        if (m < l1 * (1 - 1e-9L)) l2 = std::max(l2, m);
    }
    rec.lambda1 = l1;
    rec.lambda2 = l2;
    rec.beta = static_cast<double>(std::log(l1) / (rec.s * std::log(2.0L)));
    return rec;
}

std::vector<std::uint64_t> odd_primes_below(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 3; p < limit; p += 2)
        if (is_prime(p)) out.push_back(p);
    return out;
}

SizeIncreasingScan scan_size_increasing(std::uint64_t limit) {
    if (limit < 3) throw std::invalid_argument("scan limit must be >= 3");
    SizeIncreasingScan out;
    out.limit = limit;
    for (auto p : odd_primes_below(limit)) {
        PrimeClassRecord rec = prime_record_with_eigen_beta(p);
        if (!rec.beta || *rec.beta <= 0.5) continue;
        switch (rec.cls) {
            case PrimeClass::P1: out.p1.push_back(p); break;
            case PrimeClass::P21: out.p21.push_back(p); break;
            case PrimeClass::P23: out.p23.push_back(p); break;
            case PrimeClass::Other: out.other.push_back(p); break;
        }
    }
    return out;
}

}  // namespace tmq
