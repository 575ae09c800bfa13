#include "maval/fourier_pws.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "maval/minor_spaces.hpp"
#include "maval/module_division.hpp"
#include "maval/quadrature.hpp"
#include "maval/rng.hpp"

namespace maval {

namespace {

// exp(-i z) for complex z = a + bi:  exp(b) * (cos a - i sin a).
std::complex<double> phase_factor(const std::complex<double>& z) {
  return std::exp(std::complex<double>(z.imag(), -z.real()));
}

double factorial_d(int k) {
  double f = 1;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

double box_diameter(const Box& b) {
  const auto lo = b.lo_d(), hi = b.hi_d();
  double s = 0;
  for (size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

// Gauss-Legendre node count scaled with the phase resolution |w| diam / pi.
int oscillation_nodes(double wnorm, double diam, int nodes_override) {
  if (nodes_override > 0) return std::min(nodes_override, kMaxQuadratureNodes);
  const double scaled = kDefaultQuadratureNodes * (1.0 + wnorm * diam / std::numbers::pi);
  if (scaled >= static_cast<double>(kMaxQuadratureNodes)) return kMaxQuadratureNodes;
  return std::max(kDefaultQuadratureNodes, static_cast<int>(std::ceil(scaled)));
}

void check_point_shape(const ComplexPoint& w, const char* where) {
  if (w.w.empty()) throw_schema(std::string(where) + ": point needs at least one slot");
  const size_t n = w.w.front().size();
  if (n == 0) throw_schema(std::string(where) + ": point has zero-dimensional slots");
  for (const auto& slot : w.w)
    if (slot.size() != n) throw_schema(std::string(where) + ": slots differ in dimension");
}

ComplexPoint shift_last_slot(const ComplexPoint& w, double direction) {
  ComplexPoint r = w;
  const int k = w.k();
  for (int j = 0; j < k; ++j)
    for (size_t i = 0; i < r.w.back().size(); ++i) r.w.back()[i] += direction * w.w[j][i];
  return r;
}

}  // namespace

std::vector<std::complex<double>> point_sum(const ComplexPoint& w) {
  check_point_shape(w, "point_sum");
  std::vector<std::complex<double>> s(w.w.front().size());
  for (const auto& slot : w.w)
    for (size_t i = 0; i < s.size(); ++i) s[i] += slot[i];
  return s;
}

std::complex<double> fourier_weight(const Weight& phi, const std::vector<std::complex<double>>& w,
                                    int nodes_override) {
  if (w.size() != phi.dim()) throw_schema("fourier_weight: direction dimension mismatch");
  const auto sup = phi.support();
  if (!sup) throw_domain("fourier_weight: weight is not compactly supported");
  if (sup->is_empty()) return 0.0;

  double wnorm = 0;
  for (const auto& c : w) wnorm += std::norm(c);
  wnorm = std::sqrt(wnorm);
  const int nodes = oscillation_nodes(wnorm, box_diameter(*sup), nodes_override);

  return integrate_box_complex(*sup, nodes, [&](const std::vector<double>& x) {
    std::complex<double> dot = 0;
    for (size_t i = 0; i < w.size(); ++i) dot += w[i] * x[i];
    return phi.value_d(x) * phase_factor(dot);
  });
}

std::complex<double> f_hat_product(const Weight& phi, const QPolynomial& q,
                                   const ComplexPoint& w) {
  check_point_shape(w, "f_hat_product");
  if (w.n() != q.n || w.k() != q.k) throw_schema("f_hat_product: point shape does not match Q");
  if (phi.dim() != static_cast<size_t>(q.n)) throw_schema("f_hat_product: weight dimension mismatch");
  if (q.value.is_zero()) return 0.0;

  const auto& reg = q.value.registry();
  std::vector<std::complex<double>> vals(reg->size(), 0.0);
  for (int l = 1; l <= q.k; ++l) {
    const auto ids = reg->column(l);
    for (int i = 0; i < q.n; ++i) vals[ids[static_cast<size_t>(i)]] = w.w[l - 1][i];
  }
  const std::complex<double> qval = q.value.evaluate(vals);
  const double sign = (q.k % 2 == 0) ? 1.0 : -1.0;
  return (sign / factorial_d(q.k)) * qval * fourier_weight(phi, point_sum(w));
}

std::complex<double> f_hat_polarization(const Weight& phi, const Polynomial& p_invariant, int n,
                                        int k, const ComplexPoint& w, int nodes_override) {
  if (n < 1) throw_schema("f_hat_polarization: dimension must be positive");
  if (k < 0 || k > n) throw_domain("f_hat_polarization: need 0 <= k <= n");
  check_point_shape(w, "f_hat_polarization");
  if (w.n() != n || w.k() != k) throw_schema("f_hat_polarization: point shape mismatch");
  if (phi.dim() != static_cast<size_t>(n)) throw_schema("f_hat_polarization: weight dimension mismatch");

  const auto hreg = hessian_registry(n);
  const Polynomial p = embed_by_name(p_invariant, hreg);
  if (p.is_zero()) return 0.0;
  if (!p.is_homogeneous() || p.total_degree() != static_cast<uint32_t>(k))
    throw_domain("f_hat_polarization: invariant must be homogeneous of degree k in the Hessian entries");

  // The first k slots carry the exponential directions: w_j = i y_j, y_j real.
  std::vector<std::vector<double>> y(static_cast<size_t>(k), std::vector<double>(n));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) {
      if (w.w[j][i].real() != 0.0)
        throw_domain("f_hat_polarization: the first k slots must be purely imaginary");
      y[j][i] = w.w[j][i].imag();
    }

  const auto sup = phi.support();
  if (!sup) throw_domain("f_hat_polarization: weight is not compactly supported");
  if (sup->is_empty()) return 0.0;

  const auto lo = sup->lo_d(), hi = sup->hi_d();
  double reach = 0;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i)
      reach += std::abs(y[j][i]) * std::max(std::abs(lo[i]), std::abs(hi[i]));
  if (reach > 600.0)
    throw_domain("f_hat_polarization: exponential growth overflows on the support");

  double wnorm = 0;
  for (const auto& slot : w.w)
    for (const auto& c : slot) wnorm += std::norm(c);
  wnorm = std::sqrt(wnorm);
  const int nodes = oscillation_nodes(wnorm, box_diameter(*sup), nodes_override);

  std::vector<std::vector<uint32_t>> sid(static_cast<size_t>(n), std::vector<uint32_t>(n));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) sid[i - 1][j - 1] = hessian_var(n, i, j);

  std::vector<std::complex<double>> svals(hreg->size());
  std::complex<double> acc = 0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    const int bits = std::popcount(mask);
    const double sign = ((k - bits) % 2 == 0) ? 1.0 : -1.0;
    const auto part = integrate_box_complex(*sup, nodes, [&](const std::vector<double>& x) {
      std::fill(svals.begin(), svals.end(), std::complex<double>(0.0));
      for (int l = 0; l < k; ++l) {
        if (!((mask >> l) & 1u)) continue;
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += y[l][i] * x[i];
        const double e = std::exp(dot);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) svals[sid[i][j]] += y[l][i] * y[l][j] * e;
      }
      std::complex<double> dot = 0;
      for (int i = 0; i < n; ++i) dot += w.w[k][i] * x[i];
      return phi.value_d(x) * phase_factor(dot) * p.evaluate(svals);
    });
    acc += sign * part;
  }
  return acc / factorial_d(k);
}

Rational fourier_normalization(int n, int k) {
  if (n < 1) throw_schema("fourier_normalization: dimension must be positive");
  if (k < 0 || k > n) throw_domain("fourier_normalization: need 0 <= k <= n");
  // Both evaluation paths reduce to (1/k!) Q[y_1..y_k] * (transform of phi at
  // d(w)), so the linking constant is 1 for every (n, k); the derivation and
  // the measured calibration live in core/data/fourier_normalization.md.
  return Rational(1);
}

std::complex<double> measure_fourier_normalization(int n, int k, const Weight& phi, uint64_t seed,
                                                   int probes) {
  if (probes < 1) throw_schema("measure_fourier_normalization: need at least one probe");
  fourier_normalization(n, k);  // validates (n, k)
  if (phi.dim() != static_cast<size_t>(n))
    throw_schema("measure_fourier_normalization: weight dimension mismatch");

  const auto hreg = hessian_registry(n);
  Polynomial p = Polynomial::constant(hreg, 1);
  if (k > 0) {
    std::vector<std::vector<Polynomial>> block(static_cast<size_t>(k));
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j)
        block[i - 1].push_back(Polynomial::variable(hreg, hessian_var(n, i, j)));
    p = polynomial_determinant(block);
  }
  const QPolynomial q = q_polynomial(p, n, k);

  Rng rng(seed);
  std::complex<double> acc = 0;
  int used = 0;
  for (int t = 0; t < probes; ++t) {
    ComplexPoint w;
    w.w.assign(static_cast<size_t>(k) + 1, std::vector<std::complex<double>>(n));
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) w.w[j][i] = {0.0, rng.real(-2.0, 2.0)};
    for (int i = 0; i < n; ++i) w.w[k][i] = {rng.real(-3.0, 3.0), 0.0};

    const auto prod = f_hat_product(phi, q, w);
    if (std::abs(prod) < 1e-9) continue;
    acc += f_hat_polarization(phi, p, n, k, w) / prod;
    ++used;
  }
  if (used == 0) throw_domain("measure_fourier_normalization: every probe point was degenerate");
  return acc / static_cast<double>(used);
}

std::complex<double> coordinate_change_F(
    const std::function<std::complex<double>(const ComplexPoint&)>& f_hat,
    const ComplexPoint& w) {
  check_point_shape(w, "coordinate_change_F");
  const int k = w.k();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return factorial_d(k) * sign * f_hat(shift_last_slot(w, -1.0));
}

std::complex<double> coordinate_change_F_inverse(
    const std::function<std::complex<double>(const ComplexPoint&)>& f, const ComplexPoint& w) {
  check_point_shape(w, "coordinate_change_F_inverse");
  const int k = w.k();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return (sign / factorial_d(k)) * f(shift_last_slot(w, 1.0));
}

double box_support_d(const Box& a, const std::vector<double>& direction) {
  if (direction.size() != a.dim()) throw_schema("box_support_d: dimension mismatch");
  const auto lo = a.lo_d(), hi = a.hi_d();
  double s = 0;
  for (size_t i = 0; i < direction.size(); ++i)
    s += std::max(lo[i] * direction[i], hi[i] * direction[i]);
  return s;
}

DecayReport pws_decay_report(const Weight& phi, const Polynomial& p_invariant, int n, int k,
                             const Box& a, int decay_order, uint64_t seed, int samples) {
  if (n < 1) throw_schema("pws_decay_report: dimension must be positive");
  if (k < 0 || k > n) throw_domain("pws_decay_report: need 0 <= k <= n");
  if (decay_order < 0) throw_schema("pws_decay_report: decay order must be nonnegative");
  if (samples < 1) throw_schema("pws_decay_report: need at least one sample");
  if (a.dim() != static_cast<size_t>(n)) throw_schema("pws_decay_report: box dimension mismatch");
  if (phi.dim() != static_cast<size_t>(n))
    throw_schema("pws_decay_report: weight dimension mismatch");

  const auto sup = phi.support();
  if (!sup) throw_domain("pws_decay_report: weight is not compactly supported");
  if (!sup->is_empty())
    for (size_t i = 0; i < a.dim(); ++i)
      if (sup->lo[i] < a.lo[i] || sup->hi[i] > a.hi[i])
        throw_domain("pws_decay_report: weight support must lie inside the reference box");

  const QPolynomial q = q_polynomial(p_invariant, n, k);

  DecayReport rep;
  rep.n = n;
  rep.k = k;
  rep.decay_order = decay_order;
  rep.box = a;
  rep.seed = seed;
  rep.samples = samples;

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    ComplexPoint w;
    w.w.assign(static_cast<size_t>(k) + 1, std::vector<std::complex<double>>(n));
    double denom = 1;
    for (int j = 0; j < k; ++j) {
      double norm2 = 0;
      do {
        norm2 = 0;
        for (int i = 0; i < n; ++i) {
          w.w[j][i] = {rng.real(-10.0, 10.0), rng.real(-10.0, 10.0)};
          norm2 += std::norm(w.w[j][i]);
        }
      } while (norm2 < 0.01);  // keep |w_j| >= 0.1 away from the singular columns
      denom *= norm2;
    }
    for (int i = 0; i < n; ++i) w.w[k][i] = {rng.real(-10.0, 10.0), rng.real(-10.0, 10.0)};

    const auto fh = f_hat_product(phi, q, w);
    const auto d = point_sum(w);
    double dabs = 0;
    std::vector<double> im(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      dabs += std::norm(d[i]);
      im[static_cast<size_t>(i)] = d[i].imag();
    }
    dabs = std::sqrt(dabs);

    const double quantity = std::abs(fh) * std::pow(1.0 + dabs, decay_order) *
                            std::exp(-box_support_d(a, im)) / denom;
    rep.sup_normalized = std::max(rep.sup_normalized, quantity);
    rep.sup_transform = std::max(rep.sup_transform, std::abs(fh));
  }
  return rep;
}

}  // namespace maval
