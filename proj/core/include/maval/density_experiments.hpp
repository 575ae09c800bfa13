#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maval/box.hpp"
#include "maval/convex_functions.hpp"
#include "maval/ma_operators.hpp"
#include "maval/polynomial.hpp"
#include "maval/rational.hpp"
#include "maval/valuation_lab.hpp"

namespace maval {

// Change-of-variables action of an invertible rational matrix g on an
// invariant part:  (g . P)(S) = |det g|^{-1} P(g^T S g).  The normalization
// makes the action match precomposition f -> f o g of the underlying
// functionals (the Monge-Ampere measure of f o g is |det g|^{-1} times the
// g^{-1}-pushforward of the measure of f).  P must live over a registry
// name-compatible with hessian_registry(n); singular g is a domain error.
Polynomial gl_transport_invariant(const Polynomial& p_invariant, int n,
                                  const std::vector<std::vector<Rational>>& g);

// The same action carried to the Q-polynomial picture: every column w_j of
// the matrix variable is replaced by g^T w_j and the result is scaled by
// |det g|^{-1}.  Commutes with q_polynomial on the nose.
QPolynomial gl_transport_q(const QPolynomial& q, const std::vector<std::vector<Rational>>& g);

// Riemann-sum average of translates:
//   averaged = eps^n * sum_{|k|_inf <= range} pi(eps * k) psi
// where pi(x) translates every term weight by x.  For each term of psi the
// summed weight is compared on a sample window against its translation-
// invariant limit (the full-space integral of the weight); terms supported
// everywhere have no finite limit and carry nullopt entries.
struct TranslationAverage {
  LocalFunctional averaged;
  Rational eps{0};
  int range = 0;
  // Indexed like psi.terms.  limit_constant is exact for polynomial weights
  // and Gauss-Legendre quadrature for bumps; sup_distance is the max over the
  // window grid of |sum_k eps^n w(x - eps k) - limit|.
  std::vector<std::optional<double>> limit_constant;
  std::vector<std::optional<double>> sup_distance;
};
TranslationAverage translation_average(const LocalFunctional& psi, int range, const Rational& eps,
                                       const Box& window, int grid_per_axis = 9);

// Spanning-rank experiment: from a family of convex functions, harvest
// Hessian data (quadratics contribute their Hessians, max-affine pieces and
// polytope vertices contribute rank-one outer products of gradient
// differences), form invariant parts
//   P(S) = coefficient of nu^k mu_1 ... mu_{n-k} in det(nu S + sum_i mu_i H_i)
// over (n-k)-tuples of harvested matrices, transport them through random
// integer GL samples, and report the exact rank of the resulting
// Q-polynomials against the squared-minor basis of M^2_k.
struct SpanningReport {
  int n = 0;
  int k = 0;
  std::string family;
  uint64_t seed = 0;
  int transports = 0;     // random GL samples applied (identity always included)
  size_t q_count = 0;     // Q-polynomials fed to the rank computation
  int achieved_rank = 0;
  int full_rank = 0;      // dim M^2_k
  bool spans = false;
};
SpanningReport spanning_rank(const std::vector<ConvexFunction>& family, int n, int k,
                             int g_samples, uint64_t seed,
                             const std::string& family_name = "family");

}  // namespace maval
