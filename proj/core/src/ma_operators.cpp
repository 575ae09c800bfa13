#include "maval/ma_operators.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "maval/convex_geometry.hpp"
#include "maval/error.hpp"
#include "maval/linalg.hpp"
#include "maval/minor_spaces.hpp"
#include "maval/module_division.hpp"
#include "maval/vandermonde.hpp"

namespace maval {

namespace {

void require_window(const Box& window, size_t n) {
  if (window.dim() != n) throw_domain("window dimension does not match the function");
  if (!window.is_full_dimensional()) throw_domain("window must be full-dimensional");
  if (n > 3) throw_domain("discrete MA implemented for n <= 3");
}

// Unique solution of rows * x = rhs, or nullopt when the system is singular
// or inconsistent.
std::optional<std::vector<Rational>> solve_unique(const std::vector<std::vector<Rational>>& rows,
                                                  const std::vector<Rational>& rhs) {
  const size_t n = rhs.size();
  Matrix a(n);
  std::vector<GaussianRational> b(n);
  for (size_t i = 0; i < n; ++i) {
    a[i].assign(rows[i].begin(), rows[i].end());
    b[i] = GaussianRational(rhs[i]);
  }
  if (matrix_rank(a) != n) return std::nullopt;
  auto sol = solve_linear(a, b);
  if (!sol) return std::nullopt;
  std::vector<Rational> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = (*sol)[i].re;
  return x;
}

using PointSet = std::vector<std::vector<Rational>>;

void dedupe_points(PointSet& pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Candidate vertices of the dominance-region complex: solutions of the
// equal-value systems of (n+1)-subsets of pieces.  Every 0-dimensional cell
// is hit; spurious candidates get weight 0 downstream and vanish.
PointSet complex_vertex_candidates(const MaxAffine& f, const Box& window) {
  const size_t n = f.dim();
  PointSet out;
  const auto& ps = f.pieces;
  if (ps.size() < n + 1) return out;
  for (const auto& subset : subsets_of_size(static_cast<int>(ps.size()), static_cast<int>(n + 1))) {
    const AffinePiece& base = ps[static_cast<size_t>(subset[0])];
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (size_t t = 1; t < subset.size(); ++t) {
      const AffinePiece& p = ps[static_cast<size_t>(subset[t])];
      std::vector<Rational> row(n);
      for (size_t i = 0; i < n; ++i) row[i] = p.a[i] - base.a[i];
      rows.push_back(std::move(row));
      rhs.push_back(base.b - p.b);
    }
    auto v = solve_unique(rows, rhs);
    if (v && window.contains(*v)) out.push_back(std::move(*v));
  }
  dedupe_points(out);
  return out;
}

// Distinct bisector hyperplanes (a, b) with a.x = b from equal-value pairs of
// pieces, taken within each function separately.
struct Hyperplane {
  std::vector<Rational> a;
  Rational b;
};

std::vector<Hyperplane> bisectors(const std::vector<MaxAffine>& fs) {
  std::vector<Hyperplane> out;
  for (const auto& f : fs) {
    const auto& ps = f.pieces;
    for (size_t i = 0; i < ps.size(); ++i) {
      for (size_t j = i + 1; j < ps.size(); ++j) {
        Hyperplane h;
        h.a.resize(f.dim());
        bool nonzero = false;
        for (size_t t = 0; t < f.dim(); ++t) {
          h.a[t] = ps[i].a[t] - ps[j].a[t];
          nonzero = nonzero || h.a[t] != 0;
        }
        if (!nonzero) continue;
        h.b = ps[j].b - ps[i].b;
        // Normalize so duplicates collapse (first nonzero coefficient = 1).
        Rational lead{0};
        for (const auto& c : h.a)
          if (c != 0) {
            lead = c;
            break;
          }
        for (auto& c : h.a) c /= lead;
        h.b /= lead;
        out.push_back(std::move(h));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Hyperplane& x, const Hyperplane& y) {
    if (x.a != y.a)
      return std::lexicographical_compare(x.a.begin(), x.a.end(), y.a.begin(), y.a.end());
    return x.b < y.b;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Hyperplane& x, const Hyperplane& y) {
                          return x.a == y.a && x.b == y.b;
                        }),
            out.end());
  return out;
}

// Vertices of the common refinement of the region complexes: solutions of
// n-subsets of the bisector hyperplanes.
PointSet refinement_vertex_candidates(const std::vector<MaxAffine>& fs, const Box& window) {
  const size_t n = fs.front().dim();
  const auto planes = bisectors(fs);
  PointSet out;
  if (planes.size() < n) return out;
  for (const auto& subset : subsets_of_size(static_cast<int>(planes.size()), static_cast<int>(n))) {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (int idx : subset) {
      rows.push_back(planes[static_cast<size_t>(idx)].a);
      rhs.push_back(planes[static_cast<size_t>(idx)].b);
    }
    auto v = solve_unique(rows, rhs);
    if (v && window.contains(*v)) out.push_back(std::move(*v));
  }
  dedupe_points(out);
  return out;
}

Rational det_laplace(const std::vector<std::vector<Rational>>& m) {
  const size_t n = m.size();
  if (n == 1) return m[0][0];
  Rational det{0};
  int sign = 1;
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Rational>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    det += Rational(sign) * m[0][c] * det_laplace(minor);
    sign = -sign;
  }
  return det;
}

std::vector<std::vector<Rational>> doubled_matrix(const Quadratic& f) {
  std::vector<std::vector<Rational>> m = f.A;
  for (auto& row : m)
    for (auto& v : row) v *= 2;
  return m;
}

void require_psd(const Quadratic& f) {
  if (!is_positive_semidefinite(f.A)) throw_domain("quadratic matrix is not positive semidefinite");
}

// f, grad f, and D^2 f of a quadratic as polynomials in x over `xreg`.
struct QuadraticJet {
  Polynomial value;
  std::vector<Polynomial> gradient;
  std::vector<std::vector<Rational>> hessian;  // constant 2A
};

QuadraticJet quadratic_jet(const Quadratic& f, const VariableRegistry::Ptr& xreg) {
  const size_t n = f.dim();
  QuadraticJet jet{Polynomial(xreg), {}, doubled_matrix(f)};
  jet.value.add_term(Monomial::one(), GaussianRational(f.c));
  for (size_t i = 0; i < n; ++i) {
    jet.value.add_term(Monomial::var(static_cast<uint32_t>(i)), GaussianRational(f.l[i]));
    for (size_t j = 0; j < n; ++j)
      jet.value.add_term(Monomial::var(static_cast<uint32_t>(i)) *
                             Monomial::var(static_cast<uint32_t>(j)),
                         GaussianRational(f.A[i][j]));
    Polynomial g(xreg);
    g.add_term(Monomial::one(), GaussianRational(f.l[i]));
    for (size_t j = 0; j < n; ++j)
      g.add_term(Monomial::var(static_cast<uint32_t>(j)), GaussianRational(jet.hessian[i][j]));
    jet.gradient.push_back(std::move(g));
  }
  return jet;
}

// Substitution images for jet_registry(n) variables: c -> f(x), y_i -> grad,
// s_ij -> constant Hessian entry.
std::vector<Polynomial> jet_images(const QuadraticJet& jet, const VariableRegistry::Ptr& xreg,
                                   size_t n) {
  std::vector<Polynomial> images;
  images.push_back(jet.value);
  for (size_t i = 0; i < n; ++i) images.push_back(jet.gradient[i]);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      Polynomial s(xreg);
      s.add_term(Monomial::one(), GaussianRational(jet.hessian[i][j]));
      images.push_back(std::move(s));
    }
  }
  return images;
}

}  // namespace

GaussianRational integrate_weighted_exact(const Polynomial& integrand, const Weight& phi,
                                          const Box& box) {
  if (!phi.is_polynomial()) throw_domain("exact integration requires a polynomial weight");
  Box region = box;
  for (const auto& [p, clip] : phi.polynomial_factors()) region = region.intersect(clip);
  if (region.is_empty()) return GaussianRational(0);
  Polynomial prod = integrand;
  for (const auto& [p, clip] : phi.polynomial_factors())
    prod *= embed_by_name(p, integrand.registry());
  GaussianRational out = integrate_polynomial_box(prod, region);
  out *= GaussianRational(phi.constant_factor());
  return out;
}

Polynomial jet_substitute(const Polynomial& p, const Quadratic& f) {
  const size_t n = f.dim();
  const auto jet = jet_registry(static_cast<int>(n));
  const Polynomial q = embed_by_name(p, jet);
  const auto xreg = coordinate_registry(n);
  const QuadraticJet jetvals = quadratic_jet(f, xreg);
  return q.substitute(jet_images(jetvals, xreg, n));
}

AtomicMeasure discrete_ma(const MaxAffine& f, const Box& window) {
  const MaxAffine g = prune(f);
  require_window(window, g.dim());
  std::vector<std::pair<std::vector<Rational>, Rational>> atoms;
  for (auto& v : complex_vertex_candidates(g, window)) {
    Rational w = volume(subdifferential(g, v));
    if (w != 0) atoms.emplace_back(std::move(v), std::move(w));
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure mixed_ma_discrete(const std::vector<MaxAffine>& fs, const Box& window) {
  if (fs.empty()) throw_domain("mixed MA needs at least one argument");
  const size_t n = fs.front().dim();
  if (fs.size() != n) throw_domain("mixed MA on R^n takes exactly n functions");
  std::vector<MaxAffine> gs;
  for (const auto& f : fs) {
    if (f.dim() != n) throw_domain("mixed MA arguments have mismatched dimensions");
    gs.push_back(prune(f));
  }
  require_window(window, n);

  std::vector<std::pair<std::vector<Rational>, Rational>> atoms;
  for (auto& v : refinement_vertex_candidates(gs, window)) {
    std::vector<Polytope> bodies;
    bodies.reserve(n);
    for (const auto& g : gs) bodies.push_back(subdifferential(g, v));
    Rational w = mixed_volume(bodies);
    if (w != 0) atoms.emplace_back(std::move(v), std::move(w));
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure mixed_ma_polarization(const std::vector<MaxAffine>& fs, const Box& window) {
  if (fs.empty()) throw_domain("mixed MA needs at least one argument");
  const size_t n = fs.front().dim();
  if (fs.size() != n) throw_domain("mixed MA on R^n takes exactly n functions");
  for (const auto& f : fs)
    if (f.dim() != n) throw_domain("mixed MA arguments have mismatched dimensions");
  require_window(window, n);

  // vol(sum_l t_l K_l) has degree <= n in each t_l; Lagrange extraction on
  // integer nodes 0..n recovers the coefficient of t_1 ... t_n exactly.
  const auto extract = coefficient_extraction_matrix(static_cast<int>(n));
  const auto& linear_row = extract.at(1);

  std::vector<std::pair<std::vector<Rational>, Rational>> atoms;
  std::vector<size_t> grid(n, 0);
  while (true) {
    Rational coeff{1};
    for (size_t l = 0; l < n; ++l) coeff *= linear_row[grid[l]];
    if (coeff != 0) {
      MaxAffine combined = scale(fs[0], Rational(static_cast<int>(grid[0])));
      for (size_t l = 1; l < n; ++l)
        combined = sum(combined, scale(fs[l], Rational(static_cast<int>(grid[l]))));
      const AtomicMeasure m = discrete_ma(combined, window);
      for (const auto& [x, w] : m.atoms) atoms.emplace_back(x, w * coeff);
    }
    size_t pos = 0;
    while (pos < n && grid[pos] == n) grid[pos++] = 0;
    if (pos == n) break;
    ++grid[pos];
  }
  Rational factorial{1};
  for (size_t i = 2; i <= n; ++i) factorial *= Rational(static_cast<int>(i));
  for (auto& [x, w] : atoms) w /= factorial;
  return AtomicMeasure::from_atoms(std::move(atoms));
}

double quadrature_ma(const std::function<double(std::span<const double>)>& det_hessian,
                     const Weight& phi, const Box& box, int nodes_per_axis) {
  if (box.dim() != phi.dim()) throw_domain("weight and box dimensions differ");
  return integrate_box(box, nodes_per_axis, [&](const std::vector<double>& x) {
    return phi.value_d(x) * det_hessian(x);
  });
}

double quadrature_ma(const Quadratic& f, const Weight& phi, const Box& box, int nodes_per_axis) {
  require_psd(f);
  if (f.dim() != box.dim()) throw_domain("quadratic and box dimensions differ");
  const double det = to_double(det_laplace(doubled_matrix(f)));
  return quadrature_ma([det](std::span<const double>) { return det; }, phi, box, nodes_per_axis);
}

Rational quadrature_ma_exact(const Quadratic& f, const Weight& phi, const Box& box) {
  require_psd(f);
  if (f.dim() != box.dim()) throw_domain("quadratic and box dimensions differ");
  return det_laplace(doubled_matrix(f)) * phi.integrate_exact(box);
}

VariableRegistry::Ptr jet_registry(int n) {
  if (n < 1) throw_domain("jet registry needs n >= 1");
  std::vector<std::string> names;
  names.emplace_back("c");
  for (int i = 1; i <= n; ++i) names.push_back("y_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      names.push_back("s_" + std::to_string(i) + "_" + std::to_string(j));
  return VariableRegistry::scalars(names);
}

void require_hessian_span(const Polynomial& p, int n) {
  const auto jet = jet_registry(n);
  const Polynomial q = embed_by_name(p, jet);
  const uint32_t s_offset = 1 + static_cast<uint32_t>(n);

  const auto hess = hessian_minor_space(n);
  SpanBuilder span(hess.registry);
  for (const auto& g : hess.generators) span.insert(g);

  // Group the terms by their (c, y)-monomial; each attached s-polynomial must
  // lie in the minor span.
  std::map<Monomial, Polynomial, LexGreater> groups;
  for (const auto& [m, coeff] : q.terms()) {
    std::vector<Monomial::Entry> cy, s;
    for (const auto& [var, exp] : m.entries())
      (var < s_offset ? cy : s).push_back({var, exp});
    for (auto& [var, exp] : s) var -= s_offset;  // hessian_registry shares the s order
    auto [it, inserted] =
        groups.try_emplace(Monomial::from_entries(std::move(cy)), Polynomial(hess.registry));
    it->second.add_term(Monomial::from_entries(std::move(s)), coeff);
  }
  for (const auto& [cy, spoly] : groups) {
    if (!span.contains(spoly))
      throw_domain("invariant part leaves the symmetric-minor span (offending Hessian part: " +
                   spoly.to_string() + ")");
  }
}

GaussianRational invariant_functional_apply(const Polynomial& p, const Quadratic& f,
                                            const Weight& phi, const Box& box) {
  const size_t n = f.dim();
  if (phi.dim() != n || box.dim() != n) throw_domain("weight/box dimension mismatch");
  require_psd(f);
  require_hessian_span(p, static_cast<int>(n));

  return integrate_weighted_exact(jet_substitute(p, f), phi, box);
}

LocalFunctional make_local_functional(int n, std::vector<LocalFunctionalTerm> terms) {
  if (n < 1) throw_domain("local functional needs n >= 1");
  const auto jet = jet_registry(n);
  LocalFunctional out;
  out.n = n;
  for (auto& term : terms) {
    if (term.weight.dim() != static_cast<size_t>(n))
      throw_domain("term weight dimension does not match n");
    Polynomial inv = embed_by_name(term.invariant, jet);
    require_hessian_span(inv, n);
    out.degree = std::max(out.degree, static_cast<int>(inv.total_degree()));
    out.terms.push_back({std::move(term.weight), std::move(inv)});
  }
  return out;
}

std::optional<Box> local_support(const LocalFunctional& psi) {
  std::optional<Box> hull;
  for (const auto& term : psi.terms) {
    auto s = term.weight.support();
    if (!s) return std::nullopt;  // some term is supported everywhere
    if (s->is_empty()) continue;
    if (!hull) {
      hull = *s;
      continue;
    }
    for (size_t i = 0; i < hull->lo.size(); ++i) {
      hull->lo[i] = std::min(hull->lo[i], s->lo[i]);
      hull->hi[i] = std::max(hull->hi[i], s->hi[i]);
    }
  }
  if (!hull) {
    // No term carries mass anywhere: an explicitly empty box.
    Box empty;
    empty.lo.assign(static_cast<size_t>(psi.n), Rational(0));
    empty.hi.assign(static_cast<size_t>(psi.n), Rational(-1));
    hull = std::move(empty);
  }
  return hull;
}

LocalFunctional module_action(const Weight& phi, const LocalFunctional& psi) {
  if (phi.dim() != static_cast<size_t>(psi.n))
    throw_domain("module action weight dimension mismatch");
  LocalFunctional out = psi;
  for (auto& term : out.terms) term.weight = phi.times(term.weight);
  return out;
}

GaussianRational local_functional_apply(const LocalFunctional& psi, const Quadratic& f,
                                        const Box& box) {
  GaussianRational total(0);
  for (const auto& term : psi.terms)
    total += invariant_functional_apply(term.invariant, f, term.weight, box);
  return total;
}

std::complex<double> local_functional_apply_d(const LocalFunctional& psi, const Quadratic& f,
                                              const Box& box, int nodes_per_axis) {
  const size_t n = f.dim();
  if (box.dim() != n || static_cast<size_t>(psi.n) != n)
    throw_domain("local functional dimension mismatch");
  require_psd(f);
  const auto xreg = coordinate_registry(n);
  const QuadraticJet jetvals = quadratic_jet(f, xreg);
  const auto images = jet_images(jetvals, xreg, n);

  std::complex<double> total{0.0, 0.0};
  for (const auto& term : psi.terms) {
    const Polynomial integrand = term.invariant.substitute(images);
    total += integrate_box_complex(box, nodes_per_axis, [&](const std::vector<double>& x) {
      std::vector<std::complex<double>> cx(x.begin(), x.end());
      return term.weight.value_d(x) * integrand.evaluate(cx);
    });
  }
  return total;
}

}  // namespace maval
