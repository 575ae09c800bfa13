#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "maval/box.hpp"
#include "maval/polynomial.hpp"

namespace maval {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Cached Gauss-Legendre rule with n nodes (1 <= n <= 512).
const GaussLegendre& gauss_legendre(int n);

// Tensor-product quadrature of a real/complex integrand over a box.
double integrate_box(const Box& box, int nodes_per_axis,
                     const std::function<double(const std::vector<double>&)>& f);
std::complex<double> integrate_box_complex(
    const Box& box, int nodes_per_axis,
    const std::function<std::complex<double>(const std::vector<double>&)>& f);

// Exact integral of a polynomial against Lebesgue measure on the box.  The
// registry must have exactly box.dim() variables.
GaussianRational integrate_polynomial_box(const Polynomial& p, const Box& box);

constexpr int kDefaultQuadratureNodes = 32;
constexpr int kMaxQuadratureNodes = 512;

}  // namespace maval
