#include "maval/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "maval/error.hpp"

namespace maval {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  // Newton iteration on Legendre polynomials, nodes seeded by the Chebyshev
  // approximation; standard and accurate to ~1e-15 for n <= 512.
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1 || n > kMaxQuadratureNodes)
    throw_domain("gauss_legendre: node count out of range [1, 512]");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

namespace {

template <typename Value, typename Fn>
Value tensor_integrate(const Box& box, int nodes, const Fn& f) {
  size_t dim = box.dim();
  if (dim == 0) throw_domain("integrate_box: zero-dimensional box");
  const GaussLegendre& rule = gauss_legendre(nodes);
  auto lo = box.lo_d();
  auto hi = box.hi_d();
  std::vector<double> half(dim), mid(dim);
  double jac = 1.0;
  for (size_t i = 0; i < dim; ++i) {
    half[i] = (hi[i] - lo[i]) / 2;
    mid[i] = (hi[i] + lo[i]) / 2;
    jac *= half[i];
  }
  std::vector<size_t> idx(dim, 0);
  std::vector<double> x(dim);
  Value acc{};
  while (true) {
    double w = 1.0;
    for (size_t i = 0; i < dim; ++i) {
      x[i] = mid[i] + half[i] * rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    acc += f(x) * w;
    size_t d = 0;
    while (d < dim && ++idx[d] == static_cast<size_t>(nodes)) {
      idx[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  return acc * jac;
}

}  // namespace

double integrate_box(const Box& box, int nodes_per_axis,
                     const std::function<double(const std::vector<double>&)>& f) {
  return tensor_integrate<double>(box, nodes_per_axis, f);
}

std::complex<double> integrate_box_complex(
    const Box& box, int nodes_per_axis,
    const std::function<std::complex<double>(const std::vector<double>&)>& f) {
  return tensor_integrate<std::complex<double>>(box, nodes_per_axis, f);
}

GaussianRational integrate_polynomial_box(const Polynomial& p, const Box& box) {
  if (p.registry()->size() != box.dim())
    throw_domain("integrate_polynomial_box: registry arity != box dimension");
  GaussianRational total(0);
  for (const auto& [m, c] : p.terms()) {
    Rational factor(1);
    for (size_t i = 0; i < box.dim(); ++i) {
      uint32_t e = m.exponent(static_cast<uint32_t>(i));
      // integral of x^e over [lo, hi] = (hi^{e+1} - lo^{e+1}) / (e+1)
      Rational hi_pow(1), lo_pow(1);
      for (uint32_t k = 0; k <= e; ++k) {
        hi_pow *= box.hi[i];
        lo_pow *= box.lo[i];
      }
      factor *= (hi_pow - lo_pow) / Rational(e + 1);
    }
    total += c * GaussianRational(factor);
  }
  return total;
}

}  // namespace maval
