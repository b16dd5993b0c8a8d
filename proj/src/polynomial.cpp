#include "tmq/polynomial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tmq {

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
    Poly g = f;
    trim(g);
    return static_cast<int>(g.size()) - 1;
}

Poly derivative(const Poly& f) {
    Poly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
    trim(d);
    return d;
}

Poly monic(const Poly& f) {
    Poly g = f;
    trim(g);
    if (g.empty()) return g;
    Rational lead = g.back();
    for (auto& c : g) c /= lead;
    return g;
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
    Poly den = g;
    trim(den);
    if (den.empty()) throw std::domain_error("polynomial division by zero");
    Poly r = f;
    trim(r);
    if (r.size() < den.size()) return {Poly{}, r};
    Poly q(r.size() - den.size() + 1);
    while (!r.empty() && r.size() >= den.size()) {
        std::size_t shift = r.size() - den.size();
        Rational c = r.back() / den.back();
        q[shift] = c;
        for (std::size_t i = 0; i < den.size(); ++i) r[shift + i] -= c * den[i];
        trim(r);
    }
    trim(q);
    return {q, r};
}

Poly poly_gcd(Poly f, Poly g) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = divmod(f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    return monic(f);
}

Poly characteristic_polynomial(const IntMatrix& m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("characteristic_polynomial: matrix must be square");
    std::vector<Integer> c(n + 1);
    c[n] = 1;
    IntMatrix mk(n, std::vector<Integer>(n));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        IntMatrix next(n, std::vector<Integer>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Integer s = 0;
                for (std::size_t t = 0; t < n; ++t) s += m[i][t] * mk[t][j];
                next[i][j] = s;
            }
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        mk = std::move(next);
        Integer tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < n; ++t) tr += m[i][t] * mk[t][i];
        Integer q;
        mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
        c[n - k] = -q;
    }
    Poly out;
    for (auto& v : c) out.emplace_back(v);
    return out;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) {
    Poly a = monic(f);
    if (degree(a) < 1) return {};
    std::vector<std::pair<Poly, int>> out;
    Poly d = derivative(a);
    Poly g = poly_gcd(a, d);
    Poly b = divmod(a, g).first;
    Poly c = divmod(d, g).first;
    Poly e = c;
    {
        Poly db = derivative(b);
        e.resize(std::max(c.size(), db.size()));
        for (std::size_t i = 0; i < db.size(); ++i) e[i] -= db[i];
        trim(e);
    }
    int i = 1;
    while (degree(b) > 0) {
        Poly h = poly_gcd(b, e);
        if (degree(h) > 0) out.emplace_back(h, i);
        b = divmod(b, h).first;
        c = divmod(e, h).first;
        Poly db = derivative(b);
        e = c;
        e.resize(std::max(c.size(), db.size()));
        for (std::size_t t = 0; t < db.size(); ++t) e[t] -= db[t];
        trim(e);
        ++i;
    }
    return out;
}

std::vector<std::complex<long double>> squarefree_roots(const Poly& f) {
    using C = std::complex<long double>;
    Poly g = monic(f);
    int n = degree(g);
    if (n < 1) return {};
    std::vector<C> coef(n + 1);
    for (int i = 0; i <= n; ++i) coef[i] = static_cast<long double>(to_double(g[i]));
    // Cauchy bound for the initial circle.
    long double bound = 0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(coef[i]));
    bound += 1;
    long double radius = std::min<long double>(bound, 1e6L);
    std::vector<C> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius * 0.5L + 0.1L, 2.0L * std::numbers::pi_v<long double> * (k + 0.25L) / n);
    auto eval = [&](C x, C& deriv) {
        C p = coef[n];
        deriv = 0;
        for (int i = n - 1; i >= 0; --i) {
            deriv = deriv * x + p;
            p = p * x + coef[i];
        }
        return p;
    };
    for (int iter = 0; iter < 2000; ++iter) {
        long double max_step = 0;
        for (int k = 0; k < n; ++k) {
            C dp;
            C p = eval(z[k], dp);
            if (p == C(0)) continue;
            C ratio = p / dp;
            C repulsion = 0;
            for (int j = 0; j < n; ++j)
                if (j != k) repulsion += 1.0L / (z[k] - z[j]);
            C step = ratio / (1.0L - ratio * repulsion);
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max<long double>(1, std::abs(z[k])));
        }
        if (max_step < 1e-17L) break;
    }
    // Newton polish on the exact-coefficient polynomial.
    for (auto& x : z) {
        for (int it = 0; it < 3; ++it) {
            C dp;
            C p = eval(x, dp);
            if (dp != C(0)) x -= p / dp;
        }
    }
    return z;
}

std::vector<std::complex<long double>> roots(const Poly& f) {
    std::vector<std::complex<long double>> out;
    for (const auto& [factor, mult] : squarefree_decomposition(f)) {
        auto r = squarefree_roots(factor);
        for (int i = 0; i < mult; ++i) out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

}  // namespace tmq
