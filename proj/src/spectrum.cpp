#include "tmq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace tmq {

namespace {

std::uint64_t as_u64(const Integer& z, const char* what) {
    if (z < 0 || !z.fits_ulong_p()) throw std::domain_error(std::string(what) + " out of range");
    return z.get_ui();
}

// Exponent 2 log|mu_t| / (s log 2) - 1 of the DFT mode t of the rarefied vector.
double mode_alpha(std::uint64_t t, std::uint64_t p) {
    std::uint64_t s = multiplicative_order(2, p);
    long double log_mag = 0;
    std::uint64_t e = t % p;
    for (std::uint64_t j = 0; j < s; ++j) {
        log_mag += std::log(2.0L * std::fabs(std::sin(std::numbers::pi_v<long double> * e / p)));
        e = (2 * e) % p;
    }
    return static_cast<double>(2.0L * log_mag / (s * std::log(2.0L)) - 1.0L);
}

bool is_three_five(std::uint64_t p, unsigned& r1, unsigned& r2) {
    r1 = r2 = 0;
    while (p % 3 == 0) {
        p /= 3;
        ++r1;
    }
    while (p % 5 == 0) {
        p /= 5;
        ++r2;
    }
    return p == 1 && r1 > 0 && r2 > 0;
}

double cross(std::complex<double> a, std::complex<double> b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(std::complex<double> a, std::complex<double> b) {
    std::complex<double> d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0) return std::abs(a);
    double u = std::clamp(-(a.real() * d.real() + a.imag() * d.imag()) / len2, 0.0, 1.0);
    return std::abs(a + u * d);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

NormalizedWaveVector normalize_wavevector(const Rational& q, const QuasicrystalParams& params) {
    Rational c = q;
    c.canonicalize();
    NormalizedWaveVector w;
    w.q = c;
    w.t = c.get_num();
    auto [h, odd] = split_two_power(c.get_den());
    w.h = h;
    w.p = odd;
    w.k = wavevector(c, params);
    return w;
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Bragg: return "Bragg";
        case VerdictKind::SingularContinuous: return "SingularContinuous";
        case VerdictKind::Excluded: return "Excluded";
        case VerdictKind::AlmostSureNull: return "AlmostSureNull";
    }
    return "unknown";
}

std::string to_string(ExponentSource source) {
    switch (source) {
        case ExponentSource::None: return "none";
        case ExponentSource::ClassFormula: return "class-formula";
        case ExponentSource::Eigenvalues: return "eigenvalues";
        case ExponentSource::Grabner: return "grabner";
        case ExponentSource::Fitted: return "fitted";
    }
    return "unknown";
}

SpectralVerdict classify(const Rational& q, const QuasicrystalParams& params, const ClassifyOptions& options) {
    SpectralVerdict v;
    NormalizedWaveVector w = normalize_wavevector(q, params);
    v.wave = w;
    v.kappa_eta = kappa_closed(w.k, params).second;
    v.kappa_eta_exact_zero = kappa_eta_vanishes(w.q, params);
    bool numeric_zero = std::abs(v.kappa_eta) < 1e-10;
    v.kappa_eta_boundary = numeric_zero != v.kappa_eta_exact_zero;
    if (w.p == 1) {
        v.kind = VerdictKind::Bragg;
        return v;
    }
    if (v.kappa_eta_exact_zero) {
        v.kind = VerdictKind::Excluded;
        return v;
    }
    v.kind = VerdictKind::SingularContinuous;
    std::uint64_t p = as_u64(w.p, "odd part of the denominator");
    bool need_fit = options.fit;
    unsigned r1 = 0, r2 = 0;
    if (is_prime(p)) {
        PrimeClassRecord rec = prime_record_with_eigen_beta(p);
        v.beta = rec.beta;
        v.source = rec.cls == PrimeClass::Other ? ExponentSource::Eigenvalues : ExponentSource::ClassFormula;
        Integer tm;
        mpz_fdiv_r_ui(tm.get_mpz_t(), w.t.get_mpz_t(), p);
        v.coset_alpha = mode_alpha(tm.get_ui(), p);
    } else if (is_three_five(p, r1, r2)) {
        v.beta = std::log(3.0) / (2.0 * std::log(2.0));
        v.source = ExponentSource::Grabner;
    } else {
        v.source = ExponentSource::Fitted;
        v.exponent_unproven = true;
        v.conjectural = true;
        need_fit = true;
    }
    if (v.beta) v.alpha = 2.0 * *v.beta - 1.0;
    if (need_fit) {
        std::vector<std::uint64_t> sizes;
        for (unsigned j = options.j_min; j < 63; ++j) {
            unsigned __int128 l = static_cast<unsigned __int128>(p) * (std::uint64_t{1} << j) + 1;
            if (l >= (static_cast<unsigned __int128>(1) << options.horizon_exponent)) break;
            sizes.push_back(static_cast<std::uint64_t>(l));
        }
        v.subsequence = "l = " + std::to_string(p) + "*2^j+1, j >= " + std::to_string(options.j_min);
        try {
            v.fit = fitted_alpha(w.q, sizes, params);
        } catch (const std::exception& e) {
            v.subsequence += std::string(" (fit rejected: ") + e.what() + ")";
        }
        if (v.source == ExponentSource::Fitted && v.fit) v.alpha = v.fit->alpha;
    }
    return v;
}

SpectralVerdict classify_irrational(double k, const QuasicrystalParams& params) {
    SpectralVerdict v;
    v.kind = VerdictKind::AlmostSureNull;
    v.kappa_eta = kappa_closed(k, params).second;
    return v;
}

double alpha_exact(std::uint64_t p, unsigned /*h*/) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("alpha_exact: p must be an odd prime");
    PrimeClassRecord rec = prime_record_with_eigen_beta(p);
    return 2.0 * *rec.beta - 1.0;
}

HalvingReduction halving_reduction(const Integer& t, unsigned h, std::uint64_t p, unsigned n) {
    if (n <= h) throw std::invalid_argument("halving_reduction: need n > h");
    if (p % 2 == 0) throw std::invalid_argument("halving_reduction: p must be odd");
    Integer den = Integer(static_cast<unsigned long>(p)) << h;
    Rational x(t, den);
    x.canonicalize();
    HalvingReduction out;
    Integer tr;
    mpz_fdiv_r(tr.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
    long double prefactor = std::ldexp(1.0L, static_cast<int>(h));
    for (unsigned j = 0; j < h; ++j) {
        Integer a = (tr << j) % den;
        long double s = std::sin(std::numbers::pi_v<long double> * static_cast<long double>(a.get_d()) /
                                 static_cast<long double>(den.get_d()));
        prefactor *= s * s;
    }
    out.prefactor = static_cast<double>(prefactor);
    Rational y(t, Integer(static_cast<unsigned long>(p)));
    y.canonicalize();
    std::uint64_t big = std::uint64_t{1} << n;
    std::uint64_t small = std::uint64_t{1} << (n - h);
    out.full = std::norm(eta_sum_exact(big, x)) / static_cast<double>(big);
    out.reduced = std::norm(eta_sum_exact(small, y)) / static_cast<double>(small);
    double rhs = out.prefactor * out.reduced;
    double scale = std::max({out.full, rhs, 1e-12});
    out.relative_error = std::fabs(out.full - rhs) / scale;
    return out;
}

QratCheck qrat_check(std::uint64_t p, std::uint64_t t, std::uint64_t big_n) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("qrat_check: p must be odd >= 3");
    std::uint64_t l = big_n * p + 1;
    QratCheck out;
    Rational x(Integer(static_cast<unsigned long>(t)), Integer(static_cast<unsigned long>(p)));
    x.canonicalize();
    out.lhs = std::norm(eta_sum_exact(l, x)) / static_cast<double>(l);
    auto combine = [&](const std::vector<std::int64_t>& s) {
        std::complex<long double> z = 0;
        for (std::uint64_t j = 0; j < p; ++j) {
            long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((j * t) % p) / p;
            z += static_cast<long double>(s[j]) * std::polar(1.0L, ang);
        }
        return static_cast<double>(std::norm(z) / static_cast<long double>(l));
    };
    auto s_lit = rarefied_vector_i64(p, big_n * p);
    auto s_cor = rarefied_vector_i64(p, l);
    out.rhs_literal = combine(s_lit);
    out.rhs_corrected = combine(s_cor);
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-12}); };
    out.literal_error = rel(out.lhs, out.rhs_literal);
    out.corrected_error = rel(out.lhs, out.rhs_corrected);
    out.corrected_exact = true;
    for (std::uint64_t j = 0; j < p; ++j)
        if (rarefied_sum_direct(p, j, l) != s_cor[j]) out.corrected_exact = false;
    return out;
}

RarefactionDomain zonotope_domain(std::uint64_t t, std::uint64_t p, const std::vector<std::pair<double, double>>& box) {
    if (box.size() != p) throw std::invalid_argument("zonotope_domain: box must have p intervals");
    RarefactionDomain d;
    d.p = p;
    d.t = t;
    d.box = box;
    d.xi = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t % p) / static_cast<double>(p));
    std::complex<double> center = 0;
    std::vector<std::complex<double>> gens;
    for (std::uint64_t j = 0; j < p; ++j) {
        std::complex<double> w = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * t) % p) / p);
        center += 0.5 * (box[j].first + box[j].second) * w;
        std::complex<double> g = 0.5 * (box[j].second - box[j].first) * w;
        if (std::abs(g) == 0) continue;
        if (g.imag() < 0 || (g.imag() == 0 && g.real() < 0)) g = -g;  // upper half-plane
        gens.push_back(g);
    }
    std::sort(gens.begin(), gens.end(), [](auto a, auto b) { return std::arg(a) < std::arg(b); });
    std::complex<double> start = center;
    for (auto g : gens) start -= g;
    d.vertices.push_back(start);
    std::complex<double> cur = start;
    for (auto g : gens) {
        cur += 2.0 * g;
        d.vertices.push_back(cur);
    }
    for (auto g : gens) {
        cur -= 2.0 * g;
        d.vertices.push_back(cur);
    }
    d.vertices.pop_back();  // back at the start
    for (auto v : d.vertices) d.max_mod = std::max(d.max_mod, std::abs(v));
    if (d.vertices.size() < 3) {
        d.min_mod = d.vertices.size() == 1 ? std::abs(d.vertices[0])
                                           : segment_distance(d.vertices[0], d.vertices[1]);
    } else {
        bool inside = true;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.vertices.size(); ++i) {
            auto a = d.vertices[i], b = d.vertices[(i + 1) % d.vertices.size()];
            if (cross(b - a, -a) < 0) inside = false;  // counter-clockwise polygon
            best = std::min(best, segment_distance(a, b));
        }
        d.min_mod = inside ? 0.0 : best;
    }
    d.contains_zero = d.min_mod <= 1e-12 * std::max(1.0, d.max_mod);
    if (d.contains_zero) d.min_mod = 0.0;
    return d;
}

RarefactionDomain rarefaction_domain(std::uint64_t t, std::uint64_t p, unsigned horizon_exponent,
                                     unsigned resolution) {
    auto profiles = fractal_profiles(p, horizon_exponent, resolution);
    std::vector<std::pair<double, double>> box;
    for (const auto& prof : profiles) box.emplace_back(prof.inf, prof.sup);
    RarefactionDomain d = zonotope_domain(t, p, box);
    d.warning = "box bounds are empirical extremes of the sampled profiles";
    std::size_t count = profiles.front().samples.size();
    bool first = true;
    for (std::size_t i = 0; i < count; ++i) {
        std::complex<double> z = 0;
        for (std::uint64_t j = 0; j < p; ++j)
            z += profiles[j].samples[i].value *
                 std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * t) % p) / p);
        double m = std::abs(z);
        if (first) {
            d.curve_min_mod = d.curve_max_mod = m;
            first = false;
        }
        d.curve_min_mod = std::min(d.curve_min_mod, m);
        d.curve_max_mod = std::max(d.curve_max_mod, m);
    }
    return d;
}

LimsupCheck limsup_check(const Rational& q, const QuasicrystalParams& params, unsigned horizon_exponent) {
    SpectralVerdict v = classify(q, params);
    if (v.kind != VerdictKind::SingularContinuous || !v.alpha || v.wave->h != 0)
        throw std::invalid_argument("limsup_check: needs a singular wave vector t/p with p prime");
    std::uint64_t p = as_u64(v.wave->p, "p");
    Integer tz;
    mpz_fdiv_r_ui(tz.get_mpz_t(), v.wave->t.get_mpz_t(), p);
    std::uint64_t t = tz.get_ui();
    const TransferMatrix tm = transfer_matrix(p);
    unsigned period = tm.r * static_cast<unsigned>(tm.s);
    std::vector<std::uint64_t> sizes;
    std::uint64_t top = std::uint64_t{1} << horizon_exponent;
    std::uint64_t bottom = top >> std::min(period, horizon_exponent);
    for (std::uint64_t big_n = bottom / p + 1; big_n * p + 1 <= top; ++big_n) sizes.push_back(big_n * p + 1);
    LimsupCheck out;
    for (const auto& val : approximant_densities(sizes, q, params))
        out.empirical = std::max(out.empirical, val.density / std::pow(static_cast<double>(val.l), *v.alpha));
    RarefactionDomain d = rarefaction_domain(t, p, horizon_exponent);
    RarefactionDomain d2 = rarefaction_domain((2 * t) % p, p, horizon_exponent);
    out.predicted_kappa = std::norm(v.kappa_eta) * d.max_mod * d.max_mod;
    double k = v.wave->k;
    double sb = std::sin(k * to_double(Rational(params.a() - params.b())) / 2.0);
    out.predicted_eta_part = sb * sb * std::pow(2.0, -2.0 * *v.beta) * d2.curve_max_mod * d2.curve_max_mod;
    out.kappa_ratio = out.predicted_kappa > 0 ? out.empirical / out.predicted_kappa : 0;
    out.eta_part_ratio = out.predicted_eta_part > 0 ? out.empirical / out.predicted_eta_part : 0;
    return out;
}

bool extinction_possible(const RarefactionDomain& domain) { return domain.contains_zero; }

ExtinctionScan extinction_scan(const Rational& q, const QuasicrystalParams& params, unsigned horizon_exponent,
                               std::size_t count, std::uint64_t seed) {
    SpectralVerdict v = classify(q, params);
    if (v.kind == VerdictKind::Bragg) throw std::invalid_argument("extinction_scan: Bragg wave vector");
    if (v.kind != VerdictKind::SingularContinuous || !v.alpha || v.wave->h != 0)
        throw std::invalid_argument("extinction_scan: needs a singular wave vector t/p");
    if (horizon_exponent < 12 || horizon_exponent > 40) throw std::invalid_argument("extinction_scan: horizon");
    std::uint64_t p = as_u64(v.wave->p, "p");
    Integer tz;
    mpz_fdiv_r_ui(tz.get_mpz_t(), v.wave->t.get_mpz_t(), p);
    std::uint64_t t = tz.get_ui();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(10.0, static_cast<double>(horizon_exponent));
    const std::size_t per = 16;
    std::set<std::uint64_t> all;
    for (std::size_t i = 0; i < count * per; ++i) {
        double e = u(rng);
        std::uint64_t big_n = static_cast<std::uint64_t>(std::exp2(e)) / p;
        all.insert(big_n * p + 1);
    }
    std::vector<std::uint64_t> sizes(all.begin(), all.end());
    ExtinctionScan out;
    out.subsequences = count;
    out.sizes_per_subsequence = per;
    bool first = true;
    for (const auto& val : approximant_densities(sizes, q, params)) {
        double ratio = val.density / std::pow(static_cast<double>(val.l), *v.alpha);
        if (first || ratio < out.min_ratio) out.min_ratio = ratio;
        first = false;
    }
    RarefactionDomain d2 = rarefaction_domain((2 * t) % p, p, horizon_exponent);
    double sb = std::sin(v.wave->k * to_double(Rational(params.a() - params.b())) / 2.0);
    out.threshold = 0.5 * sb * sb * std::pow(2.0, -2.0 * *v.beta) * d2.curve_min_mod * d2.curve_min_mod;
    out.bounded_away = out.min_ratio >= out.threshold && out.min_ratio > 0;
    return out;
}

std::string to_string(GrowthRegime regime) {
    switch (regime) {
        case GrowthRegime::SizeIncreasing: return "size-increasing";
        case GrowthRegime::Etale: return "etale";
        case GrowthRegime::SizeDecreasing: return "size-decreasing";
    }
    return "unknown";
}

GrowthRegime growth_regime(double alpha) {
    if (!(alpha > -1.0 && alpha < 1.0)) throw std::invalid_argument("growth_regime: alpha must lie in (-1, 1)");
    if (alpha > 1e-12) return GrowthRegime::SizeIncreasing;
    if (alpha < -1e-12) return GrowthRegime::SizeDecreasing;
    return GrowthRegime::Etale;
}

MarcinkiewiczEstimate marcinkiewicz_norm(const WeightFn& weights, std::uint64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("marcinkiewicz_norm: L must be >= 1");
    MarcinkiewiczEstimate out;
    std::uint64_t half = std::max<std::uint64_t>(1, horizon / 2);
    double acc = 0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        acc += std::fabs(weights(n));
        if (n >= half) {
            double avg = acc / static_cast<double>(n);
            if (n == half) out.at_half = avg;
            out.estimate = std::max(out.estimate, avg);
        }
    }
    out.at_full = acc / static_cast<double>(horizon);
    return out;
}

InvarianceReport class_invariance_check(const WeightFn& w1, const WeightFn& w2, const Rational& q,
                                        const QuasicrystalParams& params, const std::vector<std::uint64_t>& horizons) {
    InvarianceReport rep;
    if (horizons.empty()) return rep;
    auto d1 = approximant_densities(horizons, q, params, w1);
    auto d2 = approximant_densities(horizons, q, params, w2);
    WeightFn diff = [&](std::uint64_t n) { return w1(n) - w2(n); };
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        InvarianceRow row;
        row.horizon = horizons[i];
        double l = static_cast<double>(horizons[i]);
        row.intensity1 = d1[i].density / l;
        row.intensity2 = d2[i].density / l;
        row.norm1 = marcinkiewicz_norm(w1, horizons[i]).estimate;
        row.norm2 = marcinkiewicz_norm(w2, horizons[i]).estimate;
        row.diff_norm = marcinkiewicz_norm(diff, horizons[i]).estimate;
        const double tol = 1e-12;
        row.bound1 = row.intensity1 <= row.norm1 * row.norm1 * (1 + tol) + tol;
        row.bound2 = row.intensity2 <= row.norm2 * row.norm2 * (1 + tol) + tol;
        if (!row.bound1 || !row.bound2) rep.bounds_hold = false;
        rep.rows.push_back(row);
    }
    rep.final_gap = std::fabs(rep.rows.back().intensity1 - rep.rows.back().intensity2);
    return rep;
}

WeightFn random_weights(std::uint64_t seed, double amplitude) {
    std::uint64_t key = splitmix64(seed);
    return [key, amplitude](std::uint64_t n) {
        std::uint64_t r = splitmix64(key ^ (n * 0xd1b54a32d192ed03ULL));
        double u = static_cast<double>(r >> 11) * 0x1.0p-53;  // [0, 1)
        return amplitude * (2.0 * u - 1.0);
    };
}

}  // namespace tmq
