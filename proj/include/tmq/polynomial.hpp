#pragma once

// Exact polynomials over Q (coefficients low degree first) and a root
// finder used to cross-check transfer-matrix spectra.

#include "tmq/arith.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace tmq {

using Poly = std::vector<Rational>;
using IntMatrix = std::vector<std::vector<Integer>>;

void trim(Poly& f);
int degree(const Poly& f);
Poly derivative(const Poly& f);
Poly monic(const Poly& f);
/// Quotient and remainder of f by a nonzero g.
std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g);
Poly poly_gcd(Poly f, Poly g);

/// det(x I - M), exact, by the Faddeev-LeVerrier recursion.
Poly characteristic_polynomial(const IntMatrix& m);

/// Yun's square-free decomposition: f = c * prod g_i^i, returns (g_i, i) with deg g_i > 0.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f);

/// Roots of a square-free polynomial by Aberth-Ehrlich iteration.
std::vector<std::complex<long double>> squarefree_roots(const Poly& f);

/// All roots with multiplicity.
std::vector<std::complex<long double>> roots(const Poly& f);

}  // namespace tmq
