#include "maval/density_experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maval/error.hpp"
#include "maval/measures.hpp"
#include "maval/minor_spaces.hpp"
#include "maval/quadrature.hpp"
#include "maval/rng.hpp"
#include "maval/vandermonde.hpp"

namespace maval {

namespace {

using Mat = std::vector<std::vector<Rational>>;

Rational rational_abs(const Rational& r) { return r < 0 ? -r : r; }

Rational mat_det(const Mat& g) {
  const size_t n = g.size();
  Mat a = g;
  Rational det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

Rational checked_det(const std::string& who, int n, const Mat& g) {
  if (n < 1) throw_domain(who + ": need n >= 1");
  if (g.size() != static_cast<size_t>(n)) throw_schema(who + ": transport matrix must be n x n");
  for (const auto& row : g)
    if (row.size() != static_cast<size_t>(n)) throw_schema(who + ": transport matrix must be n x n");
  const Rational det = mat_det(g);
  if (det == 0) throw_domain(who + ": transport matrix is singular");
  return det;
}

// --- spanning-rank helpers ---------------------------------------------------

bool mat_is_zero(const Mat& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (e != 0) return false;
  return true;
}

void push_unique(std::vector<Mat>& pool, Mat m) {
  if (mat_is_zero(m)) return;
  if (std::find(pool.begin(), pool.end(), m) == pool.end()) pool.push_back(std::move(m));
}

Mat scaled_outer(const std::vector<Rational>& d, const Rational& scale) {
  const size_t n = d.size();
  Mat m(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = scale * d[i] * d[j];
  return m;
}

// Hessian data of one family member: a quadratic contributes its (scaled)
// Hessian, piecewise-linear representations contribute rank-one outer
// products of gradient differences (the directions in which the graph bends).
void harvest(const ConvexFunction& f, int n, const Rational& scale, std::vector<Mat>& pool) {
  if (f.dim() != static_cast<size_t>(n))
    throw_schema("spanning_rank: family member dimension mismatch");
  if (const auto* q = f.get_if<Quadratic>()) {
    Mat h(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h[i][j] = scale * Rational(2) * q->A[i][j];
    push_unique(pool, std::move(h));
    return;
  }
  if (const auto* ma = f.get_if<MaxAffine>()) {
    const auto& ps = ma->pieces;
    for (size_t i = 0; i < ps.size(); ++i)
      for (size_t j = i + 1; j < ps.size(); ++j) {
        std::vector<Rational> d(n);
        for (int t = 0; t < n; ++t) d[t] = ps[i].a[t] - ps[j].a[t];
        push_unique(pool, scaled_outer(d, scale));
      }
    return;
  }
  if (const auto* sf = f.get_if<SupportFn>()) {
    const auto& vs = sf->body.vertices;
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j) {
        std::vector<Rational> d(n);
        for (int t = 0; t < n; ++t) d[t] = vs[i][t] - vs[j][t];
        push_unique(pool, scaled_outer(d, scale));
      }
    return;
  }
  const auto* co = f.get_if<Combo>();
  require_invariant(co != nullptr, "spanning_rank: unknown convex-function variant");
  for (size_t t = 0; t < co->parts.size(); ++t) harvest(*co->parts[t], n, scale * co->weights[t], pool);
}

// coefficient of nu^k mu_1 ... mu_m in det(nu S + sum_i mu_i H_i), extracted
// through exact Lagrange interpolation at the integer nodes 0..n per variable.
Polynomial tuple_invariant(const std::vector<Mat>& pool, const std::vector<size_t>& tuple, int n,
                           int k, const VariableRegistry::Ptr& sreg,
                           const std::vector<std::vector<Rational>>& extract) {
  const int m = n - k;
  std::vector<Polynomial> svar;  // s_{rc} as a polynomial, row-major
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) {
      const std::string nm =
          "s_" + std::to_string(std::min(r, c)) + "_" + std::to_string(std::max(r, c));
      svar.push_back(Polynomial::variable(sreg, sreg->require(nm)));
    }

  Polynomial acc = Polynomial::zero(sreg);
  std::vector<int> idx(static_cast<size_t>(m) + 1, 0);  // idx[0] = nu node, idx[1..] = mu nodes
  while (true) {
    Rational wgt = extract[static_cast<size_t>(k)][static_cast<size_t>(idx[0])];
    for (int i = 0; i < m; ++i) wgt *= extract[1][static_cast<size_t>(idx[1 + i])];
    if (wgt != 0) {
      std::vector<std::vector<Polynomial>> mat(n, std::vector<Polynomial>(n, Polynomial::zero(sreg)));
      const GaussianRational nu{Rational(idx[0])};
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          Rational constant(0);
          for (int i = 0; i < m; ++i) constant += Rational(idx[1 + i]) * pool[tuple[i]][r][c];
          Polynomial e = Polynomial::constant(sreg, GaussianRational(constant));
          if (idx[0] != 0) e = e + svar[static_cast<size_t>(r) * n + c] * nu;
          mat[r][c] = std::move(e);
        }
      acc = acc + polynomial_determinant(mat) * GaussianRational(wgt);
    }
    size_t axis = 0;
    while (axis < idx.size() && idx[axis] == n) {
      idx[axis] = 0;
      ++axis;
    }
    if (axis == idx.size()) break;
    ++idx[axis];
  }
  return acc;
}

}  // namespace

Polynomial gl_transport_invariant(const Polynomial& p_invariant, int n,
                                  const std::vector<std::vector<Rational>>& g) {
  const Rational det = checked_det("gl_transport_invariant", n, g);
  const auto sreg = hessian_registry(n);
  const Polynomial p = embed_by_name(p_invariant, sreg);
  const size_t nv = sreg->size();
  std::vector<std::vector<GaussianRational>> coeffs(
      nv, std::vector<GaussianRational>(nv, GaussianRational{Rational(0)}));
  auto sidx = [&](int i, int j) {
    return sreg->require("s_" + std::to_string(i) + "_" + std::to_string(j));
  };
  // image of s_ij (i <= j) is (g^T S g)_ij = sum_{a<=b} (g_ai g_bj + [a<b] g_bi g_aj) s_ab.
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int a = 1; a <= n; ++a)
        for (int b = a; b <= n; ++b) {
          Rational c = g[a - 1][i - 1] * g[b - 1][j - 1];
          if (a != b) c += g[b - 1][i - 1] * g[a - 1][j - 1];
          coeffs[sidx(i, j)][sidx(a, b)] = GaussianRational{c};
        }
  return p.substitute_linear(sreg, coeffs) * GaussianRational{Rational(1) / rational_abs(det)};
}

QPolynomial gl_transport_q(const QPolynomial& q, const std::vector<std::vector<Rational>>& g) {
  if (q.n < 1 || q.k < 0 || q.k > q.n) throw_schema("gl_transport_q: malformed (n, k) tag");
  const Rational det = checked_det("gl_transport_q", q.n, g);
  const int n = q.n;
  const int cols = std::max(q.k, 1);
  const auto wreg = VariableRegistry::matrix(n, cols);
  const Polynomial v = embed_by_name(q.value, wreg);
  const size_t nv = wreg->size();
  std::vector<std::vector<GaussianRational>> coeffs(
      nv, std::vector<GaussianRational>(nv, GaussianRational{Rational(0)}));
  auto widx = [&](int i, int j) {
    return wreg->require("w_" + std::to_string(i) + "_" + std::to_string(j));
  };
  // image of w_ij is (g^T w_j)_i = sum_a g_ai w_aj.
  for (int j = 1; j <= cols; ++j)
    for (int i = 1; i <= n; ++i)
      for (int a = 1; a <= n; ++a) coeffs[widx(i, j)][widx(a, j)] = GaussianRational{g[a - 1][i - 1]};
  QPolynomial out;
  out.n = n;
  out.k = q.k;
  out.value = v.substitute_linear(wreg, coeffs) * GaussianRational{Rational(1) / rational_abs(det)};
  return out;
}

TranslationAverage translation_average(const LocalFunctional& psi, int range, const Rational& eps,
                                       const Box& window, int grid_per_axis) {
  const int n = psi.n;
  if (n < 1) throw_domain("translation_average: functional has no dimension");
  if (range < 0) throw_domain("translation_average: need range >= 0");
  if (!(eps > 0)) throw_domain("translation_average: need eps > 0");
  if (window.dim() != static_cast<size_t>(n))
    throw_schema("translation_average: window dimension mismatch");
  if (grid_per_axis < 2) throw_domain("translation_average: need >= 2 grid points per axis");

  constexpr size_t kCap = 200000;
  const size_t per_axis = 2 * static_cast<size_t>(range) + 1;
  size_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= per_axis;
    if (count > kCap) throw_domain("translation_average: translate count exceeds the desk-scale cap");
  }
  if (count * std::max<size_t>(psi.terms.size(), 1) > kCap)
    throw_domain("translation_average: translate count exceeds the desk-scale cap");

  // Lattice offsets eps * k over |k|_inf <= range, last axis fastest.
  std::vector<std::vector<Rational>> offsets;
  offsets.reserve(count);
  std::vector<int64_t> lat(static_cast<size_t>(n), -range);
  while (true) {
    std::vector<Rational> off(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) off[static_cast<size_t>(i)] = eps * Rational(lat[static_cast<size_t>(i)]);
    offsets.push_back(std::move(off));
    int axis = n - 1;
    while (axis >= 0 && lat[static_cast<size_t>(axis)] == range) {
      lat[static_cast<size_t>(axis)] = -range;
      --axis;
    }
    if (axis < 0) break;
    ++lat[static_cast<size_t>(axis)];
  }

  Rational cell(1);
  for (int i = 0; i < n; ++i) cell *= eps;
  const Weight cell_weight = Weight::constant(static_cast<size_t>(n), cell);

  TranslationAverage out;
  out.eps = eps;
  out.range = range;
  std::vector<LocalFunctionalTerm> terms;
  terms.reserve(count * psi.terms.size());
  for (const auto& term : psi.terms)
    for (const auto& off : offsets)
      terms.push_back({term.weight.translate(off).times(cell_weight), term.invariant});
  out.averaged = make_local_functional(n, std::move(terms));

  // Window grid (doubles), endpoints included.
  size_t grid_count = 1;
  for (int i = 0; i < n; ++i) {
    grid_count *= static_cast<size_t>(grid_per_axis);
    if (grid_count > kCap) throw_domain("translation_average: window grid exceeds the desk-scale cap");
  }
  std::vector<std::vector<double>> grid;
  grid.reserve(grid_count);
  const std::vector<double> wlo = window.lo_d();
  const std::vector<double> whi = window.hi_d();
  std::vector<int> gi(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const size_t ii = static_cast<size_t>(i);
      x[ii] = wlo[ii] + (whi[ii] - wlo[ii]) * static_cast<double>(gi[ii]) / (grid_per_axis - 1);
    }
    grid.push_back(std::move(x));
    int axis = n - 1;
    while (axis >= 0 && gi[static_cast<size_t>(axis)] == grid_per_axis - 1) {
      gi[static_cast<size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++gi[static_cast<size_t>(axis)];
  }
  std::vector<std::vector<double>> offsets_d;
  offsets_d.reserve(offsets.size());
  for (const auto& off : offsets) {
    std::vector<double> o(off.size());
    for (size_t i = 0; i < off.size(); ++i) o[i] = to_double(off[i]);
    offsets_d.push_back(std::move(o));
  }

  const double cell_d = to_double(cell);
  for (const auto& term : psi.terms) {
    const Weight& w = term.weight;
    const auto sup = w.support();
    if (!sup) {
      out.limit_constant.push_back(std::nullopt);
      out.sup_distance.push_back(std::nullopt);
      continue;
    }
    double limit = 0.0;
    if (!sup->is_empty()) {
      if (w.is_polynomial())
        limit = to_double(w.integrate_exact(*sup));
      else
        limit = integrate_box(*sup, 64, [&](const std::vector<double>& x) { return w.value_d(x); });
    }
    double dist = 0.0;
    std::vector<double> shifted(static_cast<size_t>(n));
    for (const auto& x : grid) {
      double s = 0.0;
      for (const auto& off : offsets_d) {
        for (int i = 0; i < n; ++i) shifted[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - off[static_cast<size_t>(i)];
        s += w.value_d(shifted);
      }
      dist = std::max(dist, std::abs(cell_d * s - limit));
    }
    out.limit_constant.push_back(limit);
    out.sup_distance.push_back(dist);
  }
  return out;
}

SpanningReport spanning_rank(const std::vector<ConvexFunction>& family, int n, int k,
                             int g_samples, uint64_t seed, const std::string& family_name) {
  if (n < 1 || n > 4) throw_domain("spanning_rank: desk scale is 1 <= n <= 4");
  if (k < 0 || k > n) throw_domain("spanning_rank: need 0 <= k <= n");
  if (g_samples < 0) throw_domain("spanning_rank: need g_samples >= 0");

  SpanningReport rep;
  rep.n = n;
  rep.k = k;
  rep.family = family_name;
  rep.seed = seed;
  rep.full_rank = static_cast<int>(squared_minor_basis(n, k).dimension);

  std::vector<Mat> pool;
  for (const auto& f : family) harvest(f, n, Rational(1), pool);
  if (pool.empty()) return rep;  // no curvature anywhere: the generated module is zero

  // (n-k)-tuples of pool indices, nondecreasing (multisets).  All of them when
  // there are at most kMaxTuples, otherwise a seeded sample.
  constexpr size_t kMaxTuples = 32;
  const int m = n - k;
  size_t total = 1;  // C(|pool| + m - 1, m), capped
  for (int i = 1; i <= m; ++i) {
    total = total * (pool.size() + static_cast<size_t>(m - i)) / static_cast<size_t>(i);
    if (total > 4 * kMaxTuples) break;
  }
  Rng rng(seed);
  std::vector<std::vector<size_t>> tuples;
  if (m == 0) {
    tuples.push_back({});
  } else if (total <= kMaxTuples) {
    std::vector<size_t> t(static_cast<size_t>(m), 0);
    while (true) {
      tuples.push_back(t);
      int axis = m - 1;
      while (axis >= 0 && t[static_cast<size_t>(axis)] == pool.size() - 1) --axis;
      if (axis < 0) break;
      const size_t v = t[static_cast<size_t>(axis)] + 1;
      for (int i = axis; i < m; ++i) t[static_cast<size_t>(i)] = v;
    }
  } else {
    int attempts = 0;
    while (tuples.size() < kMaxTuples && attempts < 1000) {
      ++attempts;
      std::vector<size_t> t(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        t[static_cast<size_t>(i)] =
            static_cast<size_t>(rng.integer(0, static_cast<int64_t>(pool.size()) - 1));
      std::sort(t.begin(), t.end());
      if (std::find(tuples.begin(), tuples.end(), t) == tuples.end()) tuples.push_back(std::move(t));
    }
  }

  std::vector<Mat> transports;
  int attempts = 0;
  while (static_cast<int>(transports.size()) < g_samples) {
    require_invariant(++attempts <= 1000 * std::max(g_samples, 1),
                      "spanning_rank: transport sampling failed to terminate");
    Mat g(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rational(rng.integer(-3, 3));
    const Rational a = rational_abs(mat_det(g));
    if (a >= 1 && a <= 100) transports.push_back(std::move(g));
  }
  rep.transports = static_cast<int>(transports.size());

  const auto sreg = hessian_registry(n);
  const auto extract = coefficient_extraction_matrix(n);
  std::vector<QPolynomial> qs;
  for (const auto& t : tuples) {
    const Polynomial p = tuple_invariant(pool, t, n, k, sreg, extract);
    if (p.is_zero()) continue;
    QPolynomial q0 = q_polynomial(p, n, k);
    for (const auto& g : transports) qs.push_back(gl_transport_q(q0, g));
    qs.push_back(std::move(q0));
  }
  rep.q_count = qs.size();
  rep.achieved_rank = q_rank(qs, n, k);
  rep.spans = rep.achieved_rank == rep.full_rank && rep.full_rank > 0;
  return rep;
}

}  // namespace maval
