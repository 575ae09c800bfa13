#include "maval/valuation_lab.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "maval/error.hpp"
#include "maval/linalg.hpp"
#include "maval/minor_spaces.hpp"
#include "maval/module_division.hpp"
#include "maval/vandermonde.hpp"

namespace maval {

namespace {

std::vector<GaussianRational> extract_coefficients(const std::vector<std::vector<Rational>>& c,
                                                   const std::vector<GaussianRational>& vals) {
  std::vector<GaussianRational> out(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    GaussianRational acc;
    for (size_t j = 0; j < vals.size(); ++j) acc += GaussianRational(c[i][j]) * vals[j];
    out[i] = acc;
  }
  return out;
}

// All symmetric n x n PSD matrices with diagonal entries in {0..diag_max} and
// off-diagonal entries in {0..off_max}, enumerated by odometer (diagonal
// entries first, then off-diagonals in (i, j) lex order, last entry fastest).
std::vector<std::vector<std::vector<Rational>>> psd_catalog(int n, int diag_max, int off_max) {
  const size_t entries = static_cast<size_t>(n) + static_cast<size_t>(n) * (n - 1) / 2;
  std::vector<int> state(entries, 0);
  std::vector<int> limit(entries);
  for (size_t e = 0; e < entries; ++e) limit[e] = e < static_cast<size_t>(n) ? diag_max : off_max;
  std::vector<std::vector<std::vector<Rational>>> out;
  while (true) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
    size_t e = 0;
    for (int i = 0; i < n; ++i) a[i][i] = Rational(state[e++]);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a[i][j] = Rational(state[e]);
        a[j][i] = Rational(state[e]);
        ++e;
      }
    if (is_positive_semidefinite(a)) out.push_back(std::move(a));
    size_t pos = entries;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (state[pos] < limit[pos]) {
        ++state[pos];
        done = false;
        break;
      }
      state[pos] = 0;
    }
    if (done) return out;
  }
}

// Exponent tuples of total degree <= cap over n coordinates, odometer order
// (last coordinate fastest).
std::vector<Monomial> monomials_up_to(int n, uint32_t cap) {
  std::vector<uint32_t> exp(static_cast<size_t>(n), 0);
  std::vector<Monomial> out;
  while (true) {
    uint32_t sum = 0;
    for (uint32_t e : exp) sum += e;
    if (sum <= cap) {
      std::vector<Monomial::Entry> entries;
      for (int i = 0; i < n; ++i)
        if (exp[static_cast<size_t>(i)] > 0)
          entries.push_back({static_cast<uint32_t>(i), exp[static_cast<size_t>(i)]});
      out.push_back(Monomial::from_entries(std::move(entries)));
    }
    size_t pos = exp.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (exp[pos] < cap) {
        ++exp[pos];
        done = false;
        break;
      }
      exp[pos] = 0;
    }
    if (done) return out;
  }
}

}  // namespace

GaussianRational probe_value(const LocalFunctional& psi, const Quadratic& f, const Probe& probe) {
  return local_functional_apply(module_action(probe.phi, psi), f, probe.box);
}

std::vector<GaussianRational> homogeneous_components(const LocalFunctional& psi,
                                                     const Quadratic& f, const Probe& probe) {
  if (static_cast<int>(f.dim()) != psi.n)
    throw_schema("homogeneous_components: argument dimension mismatch");
  const int top = psi.n + psi.degree;
  std::vector<GaussianRational> vals;
  vals.reserve(top + 1);
  for (int t = 0; t <= top; ++t) vals.push_back(probe_value(psi, scale(f, Rational(t)), probe));
  return extract_coefficients(coefficient_extraction_matrix(top), vals);
}

std::vector<GaussianRational> translative_components(const LocalFunctional& psi,
                                                     const Quadratic& f, const AffineMap& ell,
                                                     const Probe& probe) {
  if (static_cast<int>(f.dim()) != psi.n || ell.y.size() != f.dim())
    throw_schema("translative_components: dimension mismatch");
  const int top = psi.degree;
  std::vector<GaussianRational> vals;
  vals.reserve(top + 1);
  for (int j = 0; j <= top; ++j) {
    AffineMap jl;
    jl.y.reserve(ell.y.size());
    for (const auto& yi : ell.y) jl.y.push_back(yi * Rational(j));
    jl.c = ell.c * Rational(j);
    vals.push_back(probe_value(psi, add_affine(f, jl), probe));
  }
  return extract_coefficients(coefficient_extraction_matrix(top), vals);
}

QPolynomial q_polynomial(const Polynomial& p_invariant, int n, int k) {
  if (n < 1) throw_domain("q_polynomial: need n >= 1");
  if (k < 0 || k > n) throw_domain("q_polynomial: need 0 <= k <= n");
  const auto sreg = hessian_registry(n);
  const Polynomial p = embed_by_name(p_invariant, sreg);
  const auto wreg = VariableRegistry::matrix(n, std::max(k, 1));

  QPolynomial q;
  q.n = n;
  q.k = k;
  if (p.is_zero()) {
    q.value = Polynomial::zero(wreg);
    return q;
  }

  if (k == 0) {
    if (p.total_degree() != 0)
      throw_domain("q_polynomial: k = 0 requires a constant invariant part");
    q.value = Polynomial::constant(wreg, p.terms().begin()->second);
    return q;
  }

  if (!p.is_homogeneous() || p.total_degree() != static_cast<uint32_t>(k))
    throw_domain("q_polynomial: invariant part must be homogeneous of degree k in the s-block");
  const HessianMinorSpace space = hessian_minor_space(n);
  SpanBuilder slice(sreg);
  for (const auto& g : space.by_minor_size[k]) slice.insert(g);
  if (!slice.contains(p))
    throw_domain("q_polynomial: invariant part is not in the span of the k-minors");

  std::vector<std::vector<uint32_t>> col_ids(k + 1);
  for (int l = 1; l <= k; ++l) col_ids[l] = wreg->column(l);

  // Multilinear lambda_1...lambda_k coefficient of p(sum_l lambda_l y_l y_l^T)
  // by inclusion-exclusion over column subsets; exact because p is
  // k-homogeneous.
  Polynomial acc = Polynomial::zero(wreg);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<Polynomial> images;
    images.reserve(sreg->size());
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        Polynomial img = Polynomial::zero(wreg);
        for (int l = 1; l <= k; ++l)
          if (mask & (1u << (l - 1)))
            img += Polynomial::variable(wreg, col_ids[l][i - 1]) *
                   Polynomial::variable(wreg, col_ids[l][j - 1]);
        images.push_back(std::move(img));
      }
    Polynomial term = p.substitute(images);
    int bits = 0;
    for (unsigned m = mask; m != 0; m >>= 1) bits += static_cast<int>(m & 1u);
    if ((k - bits) % 2 != 0) term = -term;
    acc += term;
  }
  q.value = std::move(acc);

  if (!q.value.is_zero()) {
    require_invariant(q.value.is_column_homogeneous(),
                      "q_polynomial: polarization is not column-homogeneous");
    for (int l = 1; l <= k; ++l)
      require_invariant(q.value.degree_in_column(l) == 2,
                        "q_polynomial: polarization is not quadratic in every column");
  }
  const MinorBasis sq = squared_minor_basis(n, k);
  SpanBuilder cert(wreg);
  for (const auto& g : sq.generators) cert.insert(g);
  require_invariant(cert.contains(q.value),
                    "q_polynomial: polarization left the squared-minor span");
  return q;
}

int q_rank(const std::vector<QPolynomial>& qs, int n, int k) {
  const MinorBasis sq = squared_minor_basis(n, k);
  SpanBuilder basis_span(sq.registry);
  for (const auto& g : sq.generators) basis_span.insert(g);
  Matrix coords;
  coords.reserve(qs.size());
  for (const auto& q : qs) {
    if (q.n != n || q.k != k) throw_schema("q_rank: Q-polynomial tagged for a different (n, k)");
    auto c = basis_span.coordinates(q.value);
    if (!c) throw_domain("q_rank: Q-polynomial outside the squared-minor span");
    coords.push_back(std::move(*c));
  }
  if (coords.empty()) return 0;
  return static_cast<int>(matrix_rank(coords));
}

std::vector<Polynomial> local_functional_basis(int n, int d) {
  if (n < 1) throw_domain("local_functional_basis: need n >= 1");
  if (d < 0) throw_domain("local_functional_basis: need d >= 0");
  const auto jreg = jet_registry(n);
  std::vector<uint32_t> cy_ids;
  cy_ids.push_back(jreg->require("c"));
  for (int i = 1; i <= n; ++i) cy_ids.push_back(jreg->require("y_" + std::to_string(i)));

  std::vector<Polynomial> minors;
  for (const auto& g : hessian_minor_space(n).generators) minors.push_back(embed_by_name(g, jreg));

  std::vector<Polynomial> out;
  for (const auto& mono : monomials_up_to(n + 1, static_cast<uint32_t>(d))) {
    std::vector<Monomial::Entry> entries;
    for (auto [pos, exp] : mono.entries()) entries.push_back({cy_ids[pos], exp});
    const Polynomial cy =
        Polynomial::term(jreg, Monomial::from_entries(std::move(entries)), GaussianRational(1));
    for (const auto& g : minors) out.push_back(cy * g);
  }
  return out;
}

namespace {

// Shared validation for the dual-basis builders: embed into the jet
// registry, check membership of the s-parts in the minor span and linear
// independence, and record the decoration degree of every term.
struct DualSetup {
  std::shared_ptr<const VariableRegistry> jreg;
  std::vector<Polynomial> embedded;
  std::vector<std::string> printable;
  // Per element, the set of (c-degree, y-degree) patterns among its terms.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> patterns;
  uint32_t cy_degree = 0;
};

DualSetup dual_setup(const std::string& who, int n, const std::vector<Polynomial>& basis) {
  if (n < 1) throw_domain(who + ": need n >= 1");
  if (basis.empty()) throw_schema(who + ": empty basis");
  DualSetup setup;
  setup.jreg = jet_registry(n);
  setup.embedded.reserve(basis.size());
  for (const auto& p : basis) setup.embedded.push_back(embed_by_name(p, setup.jreg));

  const size_t c_id = setup.jreg->require("c");
  std::vector<bool> is_y(setup.jreg->size(), false);
  for (int i = 1; i <= n; ++i) is_y[setup.jreg->require("y_" + std::to_string(i))] = true;

  SpanBuilder indep(setup.jreg);
  for (const auto& p : setup.embedded) {
    require_hessian_span(p, n);
    if (!indep.insert(p)) throw_domain(who + ": basis is linearly dependent");
    std::vector<std::pair<uint32_t, uint32_t>> pats;
    for (const auto& [mono, coeff] : p.terms()) {
      uint32_t cd = 0, yd = 0;
      for (auto [idx, exp] : mono.entries()) {
        if (idx == c_id) cd += exp;
        if (is_y[idx]) yd += exp;
      }
      setup.cy_degree = std::max(setup.cy_degree, cd + yd);
      if (std::find(pats.begin(), pats.end(), std::pair{cd, yd}) == pats.end())
        pats.emplace_back(cd, yd);
    }
    setup.patterns.push_back(std::move(pats));
  }

  setup.printable.reserve(setup.embedded.size());
  for (const auto& p : setup.embedded) setup.printable.push_back(p.to_string());
  return setup;
}

// Catalog of convex quadratics at the given enlargement level: PSD integer
// matrices, axis-aligned linear parts, small integer constants.
std::vector<Quadratic> quadratic_catalog(int n, int level) {
  const int diag_max = 2 << level;
  const int off_max = 1 << level;
  const int lin_max = 1 << level;
  const int const_max = 1 << level;
  std::vector<Quadratic> catalog;
  for (auto& a : psd_catalog(n, diag_max, off_max)) {
    std::vector<std::vector<Rational>> lins;
    lins.emplace_back(n, Rational(0));
    for (int i = 1; i <= n; ++i)
      for (int mul = 1; mul <= lin_max; ++mul) {
        std::vector<Rational> l(n, Rational(0));
        l[i - 1] = Rational(mul);
        lins.push_back(std::move(l));
      }
    for (const auto& l : lins)
      for (int c = 0; c <= const_max; ++c) catalog.push_back(Quadratic{a, l, Rational(c)});
  }
  return catalog;
}

struct DualSolve {
  std::vector<EvaluationMap> maps;
  // densities[j][i]: exact density of map j at basis element i, recomputed
  // from the stored combination.
  std::vector<std::vector<Polynomial>> densities;
};

// Solve the moment system at one catalog level.  covered[j][i] selects which
// delta conditions map j must satisfy; uncovered pairs contribute no
// constraint rows and their achieved densities are only recorded.  Returns
// nothing if any selected system is inconsistent over this catalog.
std::optional<DualSolve> try_dual_solve(const std::string& who, int n, const DualSetup& setup,
                                        const std::vector<std::vector<char>>& covered,
                                        int catalog_level) {
  const auto xreg = coordinate_registry(static_cast<size_t>(n));
  const Box unit = Box::unit(static_cast<size_t>(n));
  const std::vector<Quadratic> catalog = quadratic_catalog(n, catalog_level);
  const size_t count = setup.embedded.size();

  // Densities: the 2-jet of each basis element along every catalog
  // quadratic, as exact polynomials in x.
  std::vector<std::vector<Polynomial>> dens(count);
  uint32_t dens_degree = 0;
  for (size_t i = 0; i < count; ++i) {
    dens[i].reserve(catalog.size());
    for (const auto& qd : catalog) {
      dens[i].push_back(jet_substitute(setup.embedded[i], qd));
      dens_degree = std::max(dens_degree, dens[i].back().total_degree());
    }
  }

  // Moment constraints on the unit box.  Matching every x-monomial up to
  // the cutoff pins the combined density as a polynomial, not just at
  // sample points, since all densities have degree <= cutoff.
  const uint32_t cutoff = std::max(setup.cy_degree + static_cast<uint32_t>(n), dens_degree);
  const std::vector<Monomial> moments = monomials_up_to(n, cutoff);

  Matrix m(count * moments.size(), std::vector<GaussianRational>(catalog.size()));
  std::vector<GaussianRational> unit_moments(moments.size());
  for (size_t mi = 0; mi < moments.size(); ++mi) {
    const Polynomial xm = Polynomial::term(xreg, moments[mi], GaussianRational(1));
    unit_moments[mi] = integrate_polynomial_box(xm, unit);
    for (size_t i = 0; i < count; ++i) {
      auto& row = m[i * moments.size() + mi];
      for (size_t t = 0; t < catalog.size(); ++t)
        row[t] = integrate_polynomial_box(xm * dens[i][t], unit);
    }
  }

  DualSolve result;
  result.maps.reserve(count);
  result.densities.resize(count);
  for (size_t j = 0; j < count; ++j) {
    Matrix mj;
    std::vector<GaussianRational> rhs;
    for (size_t i = 0; i < count; ++i) {
      if (!covered[j][i]) continue;
      for (size_t mi = 0; mi < moments.size(); ++mi) {
        mj.push_back(m[i * moments.size() + mi]);
        rhs.push_back(i == j ? unit_moments[mi] : GaussianRational(0));
      }
    }
    auto x = solve_linear(mj, rhs);
    if (!x) return std::nullopt;
    EvaluationMap em;
    em.index = static_cast<int>(j);
    em.dual_basis = setup.printable;
    for (size_t t = 0; t < catalog.size(); ++t) {
      if ((*x)[t].is_zero()) continue;
      require_invariant((*x)[t].is_real(), who + ": complex combination coefficient");
      em.combination.emplace_back((*x)[t].re, catalog[t]);
    }
    // Delta certificate at the polynomial level, recomputed from the stored
    // combination; uncovered densities are recorded for back-substitution.
    result.densities[j].reserve(count);
    for (size_t i = 0; i < count; ++i) {
      Polynomial got = Polynomial::zero(xreg);
      for (const auto& [coeff, quad] : em.combination)
        got += jet_substitute(setup.embedded[i], quad) * GaussianRational(coeff);
      if (covered[j][i]) {
        const Polynomial want = i == j ? Polynomial::constant(xreg, GaussianRational(1))
                                       : Polynomial::zero(xreg);
        require_invariant(got == want, who + ": delta certificate failed");
      }
      result.densities[j].push_back(std::move(got));
    }
    em.certified = true;
    result.maps.push_back(std::move(em));
  }
  return result;
}

}  // namespace

std::vector<EvaluationMap> build_evaluation_maps(int n, const std::vector<Polynomial>& basis) {
  const std::string who = "build_evaluation_maps";
  const DualSetup setup = dual_setup(who, n, basis);
  const std::vector<std::vector<char>> covered(basis.size(),
                                               std::vector<char>(basis.size(), 1));
  for (int level = 0; level < 3; ++level)
    if (auto solved = try_dual_solve(who, n, setup, covered, level)) return solved->maps;
  throw_domain(who +
               ": delta system inconsistent over the quadratic catalog after maximum "
               "enlargement; bases mixing gradient or value decorations with Hessian "
               "generators admit no flat dual (build_filtered_evaluation_maps is the exact "
               "triangular substitute)");
}

FilteredEvaluationSystem build_filtered_evaluation_maps(int n,
                                                        const std::vector<Polynomial>& basis) {
  const std::string who = "build_filtered_evaluation_maps";
  const DualSetup setup = dual_setup(who, n, basis);

  FilteredEvaluationSystem sys;
  sys.levels.reserve(basis.size());
  for (size_t j = 0; j < basis.size(); ++j) {
    if (setup.patterns[j].size() != 1)
      throw_schema(who + ": basis element mixes decoration patterns: " + setup.printable[j]);
    sys.levels.push_back(setup.patterns[j].front());
  }

  sys.recovery_order.resize(basis.size());
  for (size_t j = 0; j < basis.size(); ++j) sys.recovery_order[j] = j;
  std::stable_sort(sys.recovery_order.begin(), sys.recovery_order.end(),
                   [&](size_t a, size_t b) { return sys.levels[a] > sys.levels[b]; });

  // Map j owes an exact delta on every element at its own decoration level
  // or lexicographically below; strictly higher levels are left free and
  // their achieved densities recorded as leakage.
  std::vector<std::vector<char>> covered(basis.size(), std::vector<char>(basis.size(), 0));
  for (size_t j = 0; j < basis.size(); ++j)
    for (size_t i = 0; i < basis.size(); ++i)
      covered[j][i] = sys.levels[i] <= sys.levels[j] ? 1 : 0;

  for (int level = 0; level < 3; ++level) {
    if (auto solved = try_dual_solve(who, n, setup, covered, level)) {
      sys.maps = std::move(solved->maps);
      sys.densities = std::move(solved->densities);
      return sys;
    }
  }
  throw_domain(who + ": triangular system inconsistent over the quadratic catalog after "
                     "maximum enlargement");
}

DensityMeasure apply_evaluation_map(const EvaluationMap& map, const LocalFunctional& psi) {
  DensityMeasure mu;
  mu.n = psi.n;
  for (const auto& [coeff, quad] : map.combination) {
    if (static_cast<int>(quad.dim()) != psi.n)
      throw_schema("apply_evaluation_map: catalog dimension mismatch");
    for (const auto& term : psi.terms) {
      Polynomial density = jet_substitute(term.invariant, quad);
      if (density.is_zero()) continue;
      mu.pieces.emplace_back(term.weight.times(Weight::constant(psi.n, coeff)),
                             std::move(density));
    }
  }
  return mu;
}

double density_value_d(const DensityMeasure& mu, std::span<const double> x) {
  if (x.size() != static_cast<size_t>(mu.n)) throw_schema("density_value_d: dimension mismatch");
  double acc = 0;
  for (const auto& [w, p] : mu.pieces) acc += w.value_d(x) * p.evaluate_real(x);
  return acc;
}

GaussianRational integrate_against(const DensityMeasure& mu, const Weight& probe,
                                   const Polynomial& g, const Box& box) {
  if (probe.dim() != static_cast<size_t>(mu.n) || box.dim() != static_cast<size_t>(mu.n))
    throw_schema("integrate_against: dimension mismatch");
  const auto xreg = coordinate_registry(mu.n);
  const Polynomial gx = embed_by_name(g, xreg);
  GaussianRational acc;
  for (const auto& [w, p] : mu.pieces)
    acc += integrate_weighted_exact(gx * embed_by_name(p, xreg), probe.times(w), box);
  return acc;
}

std::complex<double> integrate_against_d(const DensityMeasure& mu, const Weight& probe,
                                         const Polynomial& g, const Box& box,
                                         int nodes_per_axis) {
  if (probe.dim() != static_cast<size_t>(mu.n) || box.dim() != static_cast<size_t>(mu.n))
    throw_schema("integrate_against_d: dimension mismatch");
  const auto xreg = coordinate_registry(mu.n);
  const Polynomial gx = embed_by_name(g, xreg);
  std::vector<Polynomial> densities;
  densities.reserve(mu.pieces.size());
  for (const auto& [w, p] : mu.pieces) densities.push_back(embed_by_name(p, xreg));
  return integrate_box_complex(box, nodes_per_axis, [&](const std::vector<double>& x) {
    std::vector<std::complex<double>> z(x.begin(), x.end());
    const std::span<const std::complex<double>> zs(z);
    std::complex<double> acc{0.0, 0.0};
    for (size_t i = 0; i < mu.pieces.size(); ++i)
      acc += mu.pieces[i].first.value_d(x) * densities[i].evaluate(zs);
    return probe.value_d(x) * gx.evaluate(zs) * acc;
  });
}

ReconstructionReport reconstruct(const LocalFunctional& psi,
                                 const std::vector<EvaluationMap>& maps,
                                 const std::vector<Polynomial>& basis, const Quadratic& test_f,
                                 const Probe& probe) {
  if (maps.size() != basis.size())
    throw_schema("reconstruct: need one evaluation map per basis element");
  ReconstructionReport rep;
  rep.direct = probe_value(psi, test_f, probe);
  const auto jreg = jet_registry(psi.n);
  GaussianRational sum;
  for (size_t j = 0; j < maps.size(); ++j) {
    const DensityMeasure mu = apply_evaluation_map(maps[j], psi);
    const Polynomial gj = jet_substitute(embed_by_name(basis[j], jreg), test_f);
    sum += integrate_against(mu, probe.phi, gj, probe.box);
  }
  rep.reconstructed = sum;
  rep.residual = std::sqrt(to_double((rep.direct - rep.reconstructed).norm2()));
  return rep;
}

ReconstructionReportD reconstruct_d(const LocalFunctional& psi,
                                    const std::vector<EvaluationMap>& maps,
                                    const std::vector<Polynomial>& basis, const Quadratic& test_f,
                                    const Probe& probe, int nodes_per_axis) {
  if (maps.size() != basis.size())
    throw_schema("reconstruct_d: need one evaluation map per basis element");
  ReconstructionReportD rep;
  rep.direct = local_functional_apply_d(module_action(probe.phi, psi), test_f, probe.box,
                                        nodes_per_axis);
  const auto jreg = jet_registry(psi.n);
  std::complex<double> sum{0.0, 0.0};
  for (size_t j = 0; j < maps.size(); ++j) {
    const DensityMeasure mu = apply_evaluation_map(maps[j], psi);
    const Polynomial gj = jet_substitute(embed_by_name(basis[j], jreg), test_f);
    sum += integrate_against_d(mu, probe.phi, gj, probe.box, nodes_per_axis);
  }
  rep.reconstructed = sum;
  rep.residual = std::abs(rep.direct - rep.reconstructed);
  return rep;
}

FilteredReconstruction reconstruct_filtered(const LocalFunctional& psi,
                                            const FilteredEvaluationSystem& sys,
                                            const std::vector<Polynomial>& basis,
                                            const Quadratic& test_f, const Probe& probe) {
  if (sys.maps.size() != basis.size())
    throw_schema("reconstruct_filtered: need one evaluation map per basis element");
  if (sys.densities.size() != basis.size() || sys.recovery_order.size() != basis.size())
    throw_schema("reconstruct_filtered: malformed filtered system");
  FilteredReconstruction rep;
  rep.direct = probe_value(psi, test_f, probe);
  const auto jreg = jet_registry(psi.n);
  const auto xreg = coordinate_registry(static_cast<size_t>(psi.n));
  rep.recovered.resize(sys.maps.size());
  // Back-substitution in recovery order: each raw measure minus the recorded
  // leakage of the weights recovered before it.
  for (size_t pos = 0; pos < sys.recovery_order.size(); ++pos) {
    const size_t j = sys.recovery_order[pos];
    DensityMeasure mu = apply_evaluation_map(sys.maps[j], psi);
    for (size_t prev = 0; prev < pos; ++prev) {
      const size_t i = sys.recovery_order[prev];
      const Polynomial leak = embed_by_name(sys.densities[j][i], xreg);
      if (leak.is_zero()) continue;
      for (const auto& [w, p] : rep.recovered[i].pieces)
        mu.pieces.emplace_back(w, embed_by_name(p, xreg) * leak * GaussianRational(-1));
    }
    rep.recovered[j] = std::move(mu);
  }
  GaussianRational sum;
  for (size_t j = 0; j < sys.maps.size(); ++j) {
    const Polynomial gj = jet_substitute(embed_by_name(basis[j], jreg), test_f);
    sum += integrate_against(rep.recovered[j], probe.phi, gj, probe.box);
  }
  rep.reconstructed = sum;
  rep.residual = std::sqrt(to_double((rep.direct - rep.reconstructed).norm2()));
  return rep;
}

}  // namespace maval
