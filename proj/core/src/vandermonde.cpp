#include "maval/vandermonde.hpp"

#include "maval/error.hpp"

namespace maval {

std::vector<std::vector<Rational>> coefficient_extraction_matrix(
    const std::vector<Rational>& nodes) {
  size_t k = nodes.size();
  if (k == 0) throw_domain("coefficient extraction: need at least one node");
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (nodes[i] == nodes[j]) throw_domain("coefficient extraction: repeated node");

  std::vector<std::vector<Rational>> c(k, std::vector<Rational>(k, Rational(0)));
  for (size_t j = 0; j < k; ++j) {
    // Lagrange basis L_j(t) = prod_{l != j} (t - t_l) / (t_j - t_l); collect
    // its monomial coefficients by incremental multiplication.
    std::vector<Rational> coeffs{Rational(1)};
    Rational denom(1);
    for (size_t l = 0; l < k; ++l) {
      if (l == j) continue;
      denom *= nodes[j] - nodes[l];
      std::vector<Rational> next(coeffs.size() + 1, Rational(0));
      for (size_t d = 0; d < coeffs.size(); ++d) {
        next[d + 1] += coeffs[d];
        next[d] -= coeffs[d] * nodes[l];
      }
      coeffs = std::move(next);
    }
    for (size_t i = 0; i < k; ++i) c[i][j] = (i < coeffs.size() ? coeffs[i] : Rational(0)) / denom;
  }
  return c;
}

std::vector<std::vector<Rational>> coefficient_extraction_matrix(int degree) {
  std::vector<Rational> nodes;
  for (int t = 0; t <= degree; ++t) nodes.push_back(Rational(t));
  return coefficient_extraction_matrix(nodes);
}

}  // namespace maval
