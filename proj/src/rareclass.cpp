#include "tmq/rareclass.hpp"

#include "tmq/diffract.hpp"
#include "tmq/tmcore.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tmq {

namespace {

void require_odd(std::uint64_t p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("p must be an odd integer >= 3");
}

void require_odd_prime(std::uint64_t p) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

// Index maps of the halving step: S_i(2m + bit) = S_{i inv2}(ceil) - S_{(i-1) inv2}(m).
struct HalvingMaps {
    std::vector<std::size_t> even, odd;

    explicit HalvingMaps(std::uint64_t p) : even(p), odd(p) {
        std::uint64_t inv2 = (p + 1) / 2;
        for (std::uint64_t i = 0; i < p; ++i) {
            even[i] = static_cast<std::size_t>((i * inv2) % p);
            odd[i] = static_cast<std::size_t>(((i + p - 1) % p * inv2) % p);
        }
    }
};

template <class V, class Bits>
std::vector<V> rarefied_recursion(std::uint64_t p, std::size_t nbits, Bits bit_at) {
    HalvingMaps maps(p);
    std::vector<V> cur(p, V(0)), ceil_v(p), next(p);
    std::uint64_t m_mod = 0;
    int m_sign = 1;  // eta_m
    for (std::size_t t = nbits; t-- > 0;) {
        bool bit = bit_at(t);
        ceil_v = cur;
        if (bit) ceil_v[m_mod] += m_sign;
        for (std::uint64_t i = 0; i < p; ++i) next[i] = ceil_v[maps.even[i]] - cur[maps.odd[i]];
        std::swap(cur, next);
        m_mod = (2 * m_mod + (bit ? 1 : 0)) % p;
        if (bit) m_sign = -m_sign;
    }
    return cur;
}

long double to_ld(const Integer& z) {
    if (z == 0) return 0.0L;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::ldexp(static_cast<long double>(mant), static_cast<int>(exp));
}

// DFT eigenvalues mu_k = prod_{j<s} (1 - w^{-k 2^j}), w = exp(2 pi i/p), of the circulant M.
std::vector<std::complex<long double>> circulant_eigenvalues(std::uint64_t p, std::uint64_t s) {
    std::vector<std::complex<long double>> mu(p);
    for (std::uint64_t k = 0; k < p; ++k) {
        std::complex<long double> prod = 1;
        std::uint64_t e = k % p;
        long double log_scale = 0;
        for (std::uint64_t j = 0; j < s; ++j) {
            long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(e) / p;
            std::complex<long double> f = 1.0L - std::polar(1.0L, ang);
            long double mag = std::abs(f);
            if (mag == 0) {
                prod = 0;
                break;
            }
            log_scale += std::log(mag);
            prod *= f / mag;
            e = (2 * e) % p;
        }
        mu[k] = (prod == std::complex<long double>(0)) ? prod : prod * std::exp(log_scale);
    }
    return mu;
}

struct DominantModes {
    std::vector<std::uint64_t> modes;
    long double lambda1 = 0;
    unsigned r = 1;
};

DominantModes dominant_modes(std::uint64_t p, std::uint64_t s) {
    auto mu = circulant_eigenvalues(p, s);
    DominantModes d;
    for (auto& z : mu) d.lambda1 = std::max(d.lambda1, std::abs(z));
    for (std::uint64_t k = 0; k < p; ++k)
        if (std::abs(mu[k]) >= d.lambda1 * (1 - 1e-9L)) d.modes.push_back(k);
    for (unsigned r : {1U, 2U, 4U}) {
        bool ok = true;
        for (auto k : d.modes) {
            std::complex<long double> u = std::pow(mu[k] / d.lambda1, static_cast<long double>(r));
            if (std::abs(u - 1.0L) > 1e-6L) ok = false;
        }
        if (ok) {
            d.r = r;
            return d;
        }
    }
    throw std::domain_error("dominant eigenvalues are not 4th roots of lambda1^4");
}

const TransferMatrix& cached_transfer_matrix(std::uint64_t p) {
    static std::mutex mutex;
    static std::map<std::uint64_t, TransferMatrix> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, transfer_matrix(p)).first;
    return it->second;
}

}  // namespace

Integer rarefied_sum_direct(std::uint64_t p, std::uint64_t i, std::uint64_t n) {
    require_odd(p);
    if (i >= p) throw std::invalid_argument("residue must lie in [0, p)");
    long s = 0;
    for (std::uint64_t j = i; j < n; j += p) s += tm_sign(j);
    return Integer(s);
}

Integer rarefied_sum(std::uint64_t p, std::uint64_t i, const Integer& n) {
    if (i >= p) throw std::invalid_argument("residue must lie in [0, p)");
    return rarefied_vector(p, n).entries[i];
}

Integer RarefiedVector::column_sum() const {
    Integer s = 0;
    for (const auto& e : entries) s += e;
    return s;
}

RarefiedVector rarefied_vector(std::uint64_t p, const Integer& n) {
    require_odd(p);
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    std::size_t nbits = (n == 0) ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
    auto v = rarefied_recursion<Integer>(p, nbits, [&](std::size_t t) { return mpz_tstbit(n.get_mpz_t(), t) != 0; });
    return RarefiedVector{p, n, std::move(v)};
}

std::vector<std::int64_t> rarefied_vector_i64(std::uint64_t p, std::uint64_t n) {
    require_odd(p);
    if (n >> 63) throw std::invalid_argument("n must be below 2^63");
    std::size_t nbits = n == 0 ? 0 : 64 - static_cast<std::size_t>(__builtin_clzll(n));
    return rarefied_recursion<std::int64_t>(p, nbits, [&](std::size_t t) { return ((n >> t) & 1U) != 0; });
}

int tm_prefix_sum(const Integer& n) {
    // Pairs (2m, 2m+1) cancel, so only a trailing unpaired term survives.
    if (n <= 0) return 0;
    if (mpz_even_p(n.get_mpz_t())) return 0;
    return tm_sign(Integer(n - 1));
}

std::string to_string(Beta1State state) {
    switch (state) {
        case Beta1State::Positive: return "positive";
        case Beta1State::Zero: return "zero";
        case Beta1State::Boundary: return "boundary";
    }
    return "unknown";
}

std::vector<Integer> TransferMatrix::apply(const std::vector<Integer>& v) const {
    std::vector<Integer> out(p, 0);
    for (std::uint64_t i = 0; i < p; ++i)
        for (std::uint64_t j = 0; j < p; ++j) out[i] += entries[i][j] * v[j];
    return out;
}

TransferMatrix transfer_matrix(std::uint64_t p) {
    require_odd(p);
    TransferMatrix tm;
    tm.p = p;
    tm.s = multiplicative_order(2, p);
    Integer two_s = Integer(1) << static_cast<mp_bitcnt_t>(tm.s);
    auto col = rarefied_vector(p, two_s).entries;
    tm.entries.assign(p, std::vector<Integer>(p));
    for (std::uint64_t i = 0; i < p; ++i)
        for (std::uint64_t j = 0; j < p; ++j) tm.entries[i][j] = col[(i + p - j) % p];
    for (std::uint64_t n = 1; n <= 50; ++n) {
        auto lhs = rarefied_vector(p, two_s * n).entries;
        if (lhs != tm.apply(rarefied_vector(p, Integer(static_cast<unsigned long>(n))).entries))
            throw std::logic_error("transfer recursion fails at n = " + std::to_string(n));
    }
    if (!is_prime(p)) return tm;
    tm.eigenvalues = eigenvalues_explicit(p);
    std::vector<long double> moduli{0.0L};
    for (const auto& e : tm.eigenvalues) moduli.push_back(std::abs(e.xi));
    std::sort(moduli.rbegin(), moduli.rend());
    tm.lambda1 = moduli.front();
    tm.lambda2 = 0;
    for (auto m : moduli)
        if (m < tm.lambda1 * (1 - 1e-9L)) {
            tm.lambda2 = m;
            break;
        }
    long double l2s = std::log(2.0L) * tm.s;
    tm.beta = static_cast<double>(std::log(tm.lambda1) / l2s);
    if (std::fabs(tm.lambda2 - 1.0L) <= 1e-12L) {
        tm.beta1_state = Beta1State::Boundary;
        tm.beta1 = 0;
    } else if (tm.lambda2 > 1) {
        tm.beta1_state = Beta1State::Positive;
        tm.beta1 = static_cast<double>(std::log(tm.lambda2) / l2s);
    } else {
        tm.beta1_state = Beta1State::Zero;
        tm.beta1 = 0;
    }
    DominantModes dom = dominant_modes(p, tm.s);
    tm.r = dom.r;
    tm.dominant = dom.modes;
    return tm;
}

std::vector<CosetEigenvalue> eigenvalues_explicit(std::uint64_t p) {
    require_odd_prime(p);
    std::uint64_t s = multiplicative_order(2, p);
    std::vector<bool> seen(p, false);
    std::vector<CosetEigenvalue> out;
    // (-2i)^s has modulus 2^s and argument -s pi/2.
    long double base_arg = -static_cast<long double>(s % 4) * std::numbers::pi_v<long double> / 2;
    for (std::uint64_t a = 1; a < p; ++a) {
        if (seen[a]) continue;
        long double log_mag = s * std::log(2.0L);
        int sign = 1;
        std::uint64_t j = a;
        for (std::uint64_t t = 0; t < s; ++t) {
            seen[j] = true;
            long double v = std::sin(2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) / p);
            if (v < 0) sign = -sign;
            log_mag += std::log(std::fabs(v));
            j = (2 * j) % p;
        }
        long double arg = base_arg + (sign < 0 ? std::numbers::pi_v<long double> : 0.0L);
        out.push_back({a, std::polar(std::exp(log_mag), arg), s});
    }
    return out;
}

SpectrumCrossCheck spectrum_cross_check(std::uint64_t p) {
    TransferMatrix tm = transfer_matrix(p);
    SpectrumCrossCheck out;
    out.explicit_moduli.push_back(0.0L);
    for (const auto& e : tm.eigenvalues)
        for (std::uint64_t i = 0; i < e.multiplicity; ++i) out.explicit_moduli.push_back(std::abs(e.xi));
    for (const auto& z : roots(characteristic_polynomial(tm.entries))) out.charpoly_moduli.push_back(std::abs(z));
    std::sort(out.explicit_moduli.rbegin(), out.explicit_moduli.rend());
    std::sort(out.charpoly_moduli.rbegin(), out.charpoly_moduli.rend());
    if (out.explicit_moduli.size() != out.charpoly_moduli.size()) {
        out.max_deviation = std::numeric_limits<long double>::infinity();
        return out;
    }
    for (std::size_t i = 0; i < out.explicit_moduli.size(); ++i) {
        long double a = out.explicit_moduli[i], b = out.charpoly_moduli[i];
        out.max_deviation = std::max(out.max_deviation, std::fabs(a - b) / std::max(1.0L, a));
    }
    return out;
}

ScalingExponents scaling_exponents(std::uint64_t p) {
    const TransferMatrix& tm = cached_transfer_matrix(p);
    return {tm.beta, tm.beta1, tm.beta1_state};
}

std::vector<double> profile_values(const Integer& n, const TransferMatrix& tm) {
    if (n < 1) throw std::invalid_argument("profile_values: n must be >= 1");
    return profile_values(n, rarefied_vector(tm.p, n).entries, tm);
}

std::vector<double> profile_values(const Integer& n, const std::vector<Integer>& v, const TransferMatrix& tm) {
    if (n < 1) throw std::invalid_argument("profile_values: n must be >= 1");
    if (tm.dominant.empty()) throw std::invalid_argument("profile_values: p must be prime");
    const std::uint64_t p = tm.p;
    std::vector<long double> sv(p);
    for (std::uint64_t j = 0; j < p; ++j) sv[j] = to_ld(v[j]);
    std::vector<std::complex<long double>> w(p);
    for (std::uint64_t m = 0; m < p; ++m)
        w[m] = std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) / p);
    std::vector<long double> proj(p, 0.0L);
    for (auto k : tm.dominant) {
        std::complex<long double> hat = 0;
        for (std::uint64_t j = 0; j < p; ++j) hat += sv[j] * std::conj(w[(j * k) % p]);
        for (std::uint64_t j = 0; j < p; ++j) proj[j] += (hat * w[(j * k) % p]).real();
    }
    long double scale = std::exp(static_cast<long double>(tm.beta) * log_abs(n));
    std::vector<double> out(p);
    for (std::uint64_t j = 0; j < p; ++j) out[j] = static_cast<double>(proj[j] / p / scale);
    return out;
}

std::vector<FractalProfile> fractal_profiles(std::uint64_t p, unsigned horizon_exponent, unsigned resolution) {
    require_odd_prime(p);
    if (resolution == 0) throw std::invalid_argument("resolution must be positive");
    const TransferMatrix& tm = cached_transfer_matrix(p);
    std::uint64_t period = tm.r * tm.s;
    if (horizon_exponent < period) throw std::invalid_argument("horizon below one period 2^{r s}");
    std::uint64_t m0 = horizon_exponent / period - 1;
    std::vector<FractalProfile> out(p);
    for (std::uint64_t j = 0; j < p; ++j) {
        out[j].p = p;
        out[j].j = j;
        out[j].r = tm.r;
        out[j].s = tm.s;
        out[j].beta = tm.beta;
    }
    Integer last = -1;
    std::vector<double> max_err(p, 0.0);
    for (unsigned i = 0; i < resolution; ++i) {
        long double e = (static_cast<long double>(m0) + static_cast<long double>(i) / resolution) * period;
        long double whole = std::floor(e);
        long double frac = e - whole;
        auto top = static_cast<unsigned long>(std::ldexp(std::exp2(frac), 62));
        Integer n(top);
        long shift = static_cast<long>(whole) - 62;
        if (shift >= 0)
            n <<= static_cast<mp_bitcnt_t>(shift);
        else
            n >>= static_cast<mp_bitcnt_t>(-shift);
        if (n == last || n < 1) continue;
        last = n;
        auto sv = rarefied_vector(p, n).entries;
        auto psi = profile_values(n, sv, tm);
        long double logn = log_abs(n);
        long double nb = std::exp(static_cast<long double>(tm.beta) * logn);
        long double nb1 = std::exp(static_cast<long double>(tm.beta1) * logn);
        long double x = static_cast<long double>(i) / resolution;
        for (std::uint64_t j = 0; j < p; ++j) {
            long double raw = to_ld(sv[j]) / nb;
            out[j].samples.push_back({n, static_cast<double>(x), psi[j], static_cast<double>(raw)});
            long double err = std::fabs(to_ld(sv[j]) - nb * psi[j]) / nb1;
            max_err[j] = std::max(max_err[j], static_cast<double>(err));
        }
    }
    for (std::uint64_t j = 0; j < p; ++j) {
        auto& prof = out[j];
        prof.error_constant = max_err[j];
        if (prof.samples.empty()) continue;
        prof.inf = prof.sup = prof.samples.front().value;
        prof.raw_inf = prof.raw_sup = prof.samples.front().raw;
        for (const auto& smp : prof.samples) {
            prof.inf = std::min(prof.inf, smp.value);
            prof.sup = std::max(prof.sup, smp.value);
            prof.raw_inf = std::min(prof.raw_inf, smp.raw);
            prof.raw_sup = std::max(prof.raw_sup, smp.raw);
        }
        // projection rounding leaves ~1e-20 where the profile vanishes exactly
        prof.sign_change = prof.inf <= 1e-12 && prof.sup >= -1e-12;
    }
    return out;
}

FractalProfile fractal_profile(std::uint64_t p, std::uint64_t j, unsigned horizon_exponent, unsigned resolution) {
    if (j >= p) throw std::invalid_argument("residue must lie in [0, p)");
    return fractal_profiles(p, horizon_exponent, resolution)[j];
}

CoquetValue coquet_decompose(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("coquet_decompose: n must be >= 1");
    const TransferMatrix& tm = cached_transfer_matrix(3);
    Integer nz(static_cast<unsigned long>(n));
    CoquetValue out;
    out.psi = profile_values(nz, tm)[0];
    auto s = rarefied_vector_i64(3, n)[0];
    long double nb = std::pow(static_cast<long double>(n), static_cast<long double>(tm.beta));
    long double e = 3.0L * (static_cast<long double>(s) - nb * out.psi);
    long double rounded = std::nearbyint(e);
    out.eps = static_cast<int>(rounded);
    out.eps_valid = std::fabs(e - rounded) <= 1e-6L && out.eps >= -1 && out.eps <= 1;
    long double rebuilt = nb * out.psi + out.eps / 3.0L;
    out.reconstructs = static_cast<std::int64_t>(std::nearbyint(rebuilt)) == s;
    return out;
}

std::pair<double, double> coquet_interval() {
    double beta = std::log(3.0) / std::log(4.0);
    return {std::pow(1.0 / 3.0, beta) * 2.0 * std::sqrt(3.0) / 3.0, 55.0 / 3.0 * std::pow(1.0 / 65.0, beta)};
}

CoquetScan coquet_scan(std::uint64_t n_max, std::uint64_t eps_check_max) {
    // For p = 3 the zero mode is the only subdominant one, so the dominant
    // projection is S_{3,0}(n) - T(n)/3 with T(n) the plain prefix sum.
    CoquetScan out;
    out.n_max = n_max;
    const double beta = std::log(3.0) / std::log(4.0);
    std::int64_t s = 0;
    int t = 0;
    bool first = true;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        std::uint64_t m = n - 1;
        int eta = tm_sign(m);
        if (m % 3 == 0) s += eta;
        t += eta;
        double nb = std::pow(static_cast<double>(n), beta);
        double psi = (static_cast<double>(s) - t / 3.0) / nb;
        double raw = static_cast<double>(s) / nb;
        if (first) {
            out.psi_min = out.psi_max = psi;
            out.raw_min = out.raw_max = raw;
            out.argmin = out.argmax = n;
            first = false;
        }
        if (psi < out.psi_min) {
            out.psi_min = psi;
            out.argmin = n;
        }
        if (psi > out.psi_max) {
            out.psi_max = psi;
            out.argmax = n;
        }
        out.raw_min = std::min(out.raw_min, raw);
        out.raw_max = std::max(out.raw_max, raw);
        if (n <= eps_check_max) {
            CoquetValue cv = coquet_decompose(n);
            if (!cv.eps_valid || !cv.reconstructs) ++out.eps_violations;
        }
    }
    return out;
}

NewmanReport newman_check(std::uint64_t n_max) {
    NewmanReport out;
    out.n_max = n_max;
    const long double beta = std::log(3.0L) / std::log(4.0L);
    const long double lower = std::pow(3.0L, -beta) / 20.0L;
    const long double upper = 5.0L * std::pow(3.0L, -beta);
    out.lower_bound = static_cast<double>(lower);
    out.upper_bound = static_cast<double>(upper);
    std::int64_t s = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        if ((n - 1) % 3 == 0) s += tm_sign(n - 1);
        long double ratio = static_cast<long double>(s) / std::pow(static_cast<long double>(n), beta);
        if (s <= 0) ++out.positivity_violations;
        if (!(ratio > lower && ratio < upper)) ++out.violations;
        if (n == 1 || ratio < out.min_ratio) {
            out.min_ratio = static_cast<double>(ratio);
            out.argmin = n;
        }
        if (n == 1 || ratio > out.max_ratio) {
            out.max_ratio = static_cast<double>(ratio);
            out.argmax = n;
        }
    }
    return out;
}

PositivityReport positivity_scan(std::uint64_t p, std::uint64_t n_max) {
    require_odd(p);
    PositivityReport out;
    out.p = p;
    out.n_max = n_max;
    std::int64_t s = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        if ((n - 1) % p == 0) s += tm_sign(n - 1);
        if (s <= 0) {
            ++out.violations;
            out.largest_violation = n;
            if (n > n_max / 10) ++out.last_decade_violations;
        }
    }
    return out;
}

GrabnerReport grabner_composite(unsigned r1, unsigned r2, std::uint64_t n_max) {
    if (r1 == 0 || r2 == 0) throw std::invalid_argument("grabner_composite: r1, r2 must be positive");
    GrabnerReport out;
    out.p3 = 1;
    out.p5 = 1;
    for (unsigned i = 0; i < r1; ++i) out.p3 *= 3;
    for (unsigned i = 0; i < r2; ++i) out.p5 *= 5;
    out.p = out.p3 * out.p5;
    out.n_max = n_max;
    const std::uint64_t p = out.p, p3 = out.p3, p5 = out.p5;
    const long double lp3 = static_cast<long double>(p3), lp5 = static_cast<long double>(p5);

    std::int64_t sp = 0, s3 = 0, s5 = 0;
    std::uint64_t m = 0;
    for (std::uint64_t big_n = 1; big_n <= n_max; ++big_n) {
        for (; m < p * big_n; ++m) {
            int eta = tm_sign(m);
            if (m % p == 0) sp += eta;
            if (m % p3 == 0) s3 += eta;
            if (m % p5 == 0) s5 += eta;
        }
        long double res = sp - s3 / lp5 - s5 / lp3;
        out.max_abs_residual = std::max(out.max_abs_residual, static_cast<double>(std::fabs(res)));
        if (big_n >= 2)
            out.log_constant =
                std::max(out.log_constant, static_cast<double>(std::fabs(res) / std::log(static_cast<long double>(big_n))));
        if (big_n == 1) {
            Integer d = p3 * p5 * rarefied_sum_direct(p, 0, p) - p3 * rarefied_sum_direct(p3, 0, p) -
                        p5 * rarefied_sum_direct(p5, 0, p);
            Integer r = Integer(static_cast<long>(p3 * p5)) * sp - Integer(static_cast<long>(p3)) * s3 -
                        Integer(static_cast<long>(p5)) * s5;
            out.n1_exact = (d == r);
        }
    }

    for (std::uint64_t c = 1; c < 16; c += 2) {
        std::vector<double> xs, ys;
        for (unsigned j = 0; j < 32; ++j) {
            unsigned __int128 arg = static_cast<unsigned __int128>(p) * c << (2 * j);
            if (arg < (static_cast<unsigned __int128>(1) << 20)) continue;
            if (arg > (static_cast<unsigned __int128>(1) << 52)) break;
            auto s = rarefied_vector_i64(p, static_cast<std::uint64_t>(arg))[0];
            if (s == 0) continue;
            xs.push_back(static_cast<double>(arg));
            ys.push_back(std::fabs(static_cast<double>(s)));
        }
        if (xs.size() >= 4) out.phase_slopes.push_back(fit_power_law(xs, ys).alpha);
    }
    double total = 0;
    for (double v : out.phase_slopes) total += v;
    out.dominant_exponent = out.phase_slopes.empty() ? 0.0 : total / out.phase_slopes.size();
    out.beta3 = std::log(3.0) / (2.0 * std::log(2.0));
    out.beta5 = std::log(5.0) / (4.0 * std::log(2.0));
    return out;
}

}  // namespace tmq
