#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "maval/valuation_lab.hpp"

namespace maval {

// A point w = (w_1, ..., w_{k+1}) of complex n-vectors; d(w) = sum_j w_j.
struct ComplexPoint {
  std::vector<std::vector<std::complex<double>>> w;

  int k() const { return static_cast<int>(w.size()) - 1; }
  int n() const { return w.empty() ? 0 : static_cast<int>(w.front().size()); }
};
std::vector<std::complex<double>> point_sum(const ComplexPoint& w);

// integral of phi(x) exp(-i<w, x>) over the (compact) support of phi.
// Gauss-Legendre per axis with the node count scaled by the phase resolution
// (1 + |w| diam / pi), capped at kMaxQuadratureNodes; nodes_override > 0 pins
// the count for convergence studies.
std::complex<double> fourier_weight(const Weight& phi, const std::vector<std::complex<double>>& w,
                                    int nodes_override = 0);

// Product-formula path: ((-1)^k / k!) * Q[w_1..w_k] * fourier_weight(phi, d(w)).
std::complex<double> f_hat_product(const Weight& phi, const QPolynomial& q,
                                   const ComplexPoint& w);

// Valuation path: with w_j = i y_j purely imaginary for j <= k, the
// lambda-multilinear coefficient (divided by k!) of
//   lambda -> integral phi(x) exp(-i<w_{k+1}, x>) P(Hessian sum_j lambda_j
//   exp(<y_j, x>)) dx,
// extracted by exact inclusion-exclusion over the column subsets and
// evaluated by quadrature.  Independent of q_polynomial.
std::complex<double> f_hat_polarization(const Weight& phi, const Polynomial& p_invariant, int n,
                                        int k, const ComplexPoint& w, int nodes_override = 0);

// Stored constant linking the two paths per (n, k); derivation recorded in
// core/data/fourier_normalization.md and re-measured by the calibration below.
Rational fourier_normalization(int n, int k);
// Calibration mode: empirical mean of polarization/product over seeded probe
// points (skipping near-zero denominators).
std::complex<double> measure_fourier_normalization(int n, int k, const Weight& phi, uint64_t seed,
                                                   int probes = 3);

// Coordinate change F(Psi)[w] = (k!/(-1)^k) F_hat[w_1..w_k, w_{k+1} - sum_{j<=k} w_j]
// and its inverse; composing the two is the identity.
std::complex<double> coordinate_change_F(
    const std::function<std::complex<double>(const ComplexPoint&)>& f_hat,
    const ComplexPoint& w);
std::complex<double> coordinate_change_F_inverse(
    const std::function<std::complex<double>(const ComplexPoint&)>& f, const ComplexPoint& w);

// Support function of a box at a real direction.
double box_support_d(const Box& a, const std::vector<double>& direction);

// Sampled sup of |F_hat(w)| (1+|d(w)|)^N exp(-h_A(Im d(w))) / prod_{j<=k} |w_j|^2
// over a seeded grid with |Re|, |Im| <= 10 and |w_j| >= 0.1 for j <= k.  The
// sup estimates the PWS constant C_N; it is measured, never asserted.
struct DecayReport {
  int n = 0;
  int k = 0;
  int decay_order = 0;  // N
  Box box;              // A
  uint64_t seed = 0;
  int samples = 0;
  double sup_normalized = 0;
  double sup_transform = 0;  // max |F_hat| seen (diagnostic)
};
DecayReport pws_decay_report(const Weight& phi, const Polynomial& p_invariant, int n, int k,
                             const Box& a, int decay_order, uint64_t seed, int samples = 64);

}  // namespace maval
