#pragma once

#include <complex>
#include <span>
#include <vector>

#include "maval/ma_operators.hpp"

namespace maval {

// A probe (phi, box): Psi(g)[probe] = (phi . Psi)(g; box).
struct Probe {
  Weight phi;
  Box box;
};
GaussianRational probe_value(const LocalFunctional& psi, const Quadratic& f, const Probe& probe);

// Coefficients of the polynomial t -> Psi(t f)[probe], recovered by exact
// Lagrange extraction on the integer nodes t = 0..n+degree.  Entry k is the
// k-homogeneous component's probed value.
std::vector<GaussianRational> homogeneous_components(const LocalFunctional& psi,
                                                     const Quadratic& f, const Probe& probe);

// Y_0..Y_d with Psi(f + j*ell)[probe] = sum_i j^i Y_i(f)[probe]; exact
// Lagrange extraction on j = 0..degree.
std::vector<GaussianRational> translative_components(const LocalFunctional& psi,
                                                     const Quadratic& f, const AffineMap& ell,
                                                     const Probe& probe);

// Polarization image of a degree-k minor-span invariant: substitute the
// symmetric matrix by sum_j lambda_j y_j y_j^T (columns of the Mat(n,k)
// variable block) and take the lambda_1...lambda_k coefficient exactly.
// Certified to land in the span of the squared k-minors.
struct QPolynomial {
  int n = 0;
  int k = 0;
  Polynomial value;  // over the Mat(n, max(k,1)) registry
};
QPolynomial q_polynomial(const Polynomial& p_invariant, int n, int k);

// Exact rank of the coordinate matrix of the given Q-polynomials against the
// squared-minor basis of M^2_k.
int q_rank(const std::vector<QPolynomial>& qs, int n, int k);

// E_j as a rational combination of evaluations at catalog quadratics, built
// so that applying E_j to the i-th basis functional yields the constant
// Lebesgue density delta_ij (verified after construction).
struct EvaluationMap {
  int index = 0;
  std::vector<std::pair<Rational, Quadratic>> combination;
  std::vector<std::string> dual_basis;  // printable forms of the basis it is dual to
  bool certified = false;
};

/// Spanning basis for invariant parts of (c,y)-degree <= d: every monomial in
// (c, y_1..y_n) of total degree <= d times every minor-space generator, over
// jet_registry(n).  Deterministic order: (c,y)-monomial outer (odometer),
// minor generator inner.
std::vector<Polynomial> local_functional_basis(int n, int d);

// basis: linearly independent invariant parts over jet_registry(n) — each
// (c,y)-monomial carries an s-polynomial from the minor span.  The dual
// combination is solved from exact moment constraints on the unit box: for
// every basis element and every x-monomial up to the cutoff, the combined
// jet densities must integrate like delta_ij, which pins them as polynomials
// (re-verified term by term after the solve).  The quadratic catalog starts
// at diagonal entries {0,1,2}, off-diagonal {0,1}, l in {0, e_i}, c in {0,1},
// PSD-filtered, and doubles all ranges until the system solves (errors out
// after three enlargements).
//
// A flat dual basis only exists when no gradient decoration meets a Hessian
// generator.  Whenever the basis contains both y_m * 1 and a pure minor
// generator, every combination whose measure is a constant multiple of
// volume on the former must have vanishing quadratic-coefficient sum
// sum_t c_t A_t, and that sum is exactly the value assigned to the latter —
// so the delta system is inconsistent for any catalog and this function
// throws a domain error.  build_filtered_evaluation_maps below is the exact
// substitute for such bases.
std::vector<EvaluationMap> build_evaluation_maps(int n, const std::vector<Polynomial>& basis);

// Triangular replacement for the flat dual basis, exact for bases whose
// elements each carry a single (c,y)-decoration pattern.  Patterns
// (c-degree, y-degree) are ordered lexicographically descending; E_j is a
// certified delta dual on every element at its own pattern or below, while
// elements at strictly higher patterns leak known polynomial densities.
// Back-substitution in recovery order removes the leakage exactly, which is
// what reconstruction needs.
struct FilteredEvaluationSystem {
  std::vector<EvaluationMap> maps;                    // one per basis element
  std::vector<std::pair<uint32_t, uint32_t>> levels;  // (c-degree, y-degree) per element
  std::vector<size_t> recovery_order;                 // descending level, stable within a level
  // densities[j][i]: exact density of E_j applied to basis element i, over
  // coordinate_registry(n); certified equal to delta_ij whenever
  // levels[i] <= levels[j] lexicographically.
  std::vector<std::vector<Polynomial>> densities;
};
FilteredEvaluationSystem build_filtered_evaluation_maps(int n,
                                                        const std::vector<Polynomial>& basis);

// A measure with piecewise weight-times-polynomial density, as produced by
// applying an evaluation map to a local functional.
struct DensityMeasure {
  int n = 0;
  std::vector<std::pair<Weight, Polynomial>> pieces;  // density = sum w(x) * p(x)
};
DensityMeasure apply_evaluation_map(const EvaluationMap& map, const LocalFunctional& psi);
double density_value_d(const DensityMeasure& mu, std::span<const double> x);

// integral of probe(x) * g(x) against mu over the box; exact path requires
// polynomial weights throughout.
GaussianRational integrate_against(const DensityMeasure& mu, const Weight& probe,
                                   const Polynomial& g, const Box& box);
std::complex<double> integrate_against_d(const DensityMeasure& mu, const Weight& probe,
                                         const Polynomial& g, const Box& box,
                                         int nodes_per_axis = kDefaultQuadratureNodes);

// Theorem-A style round trip: recover the measures mu_j = E_j(Psi), rebuild
// Psi(test_f)[probe] as sum_j integral probe * P_j(jet of test_f) dmu_j, and
// report the residual against the direct evaluation.
struct ReconstructionReport {
  GaussianRational direct{0};
  GaussianRational reconstructed{0};
  double residual = 0;  // |direct - reconstructed|
};
ReconstructionReport reconstruct(const LocalFunctional& psi,
                                 const std::vector<EvaluationMap>& maps,
                                 const std::vector<Polynomial>& basis, const Quadratic& test_f,
                                 const Probe& probe);

struct ReconstructionReportD {
  std::complex<double> direct{0.0, 0.0};
  std::complex<double> reconstructed{0.0, 0.0};
  double residual = 0;
};
ReconstructionReportD reconstruct_d(const LocalFunctional& psi,
                                    const std::vector<EvaluationMap>& maps,
                                    const std::vector<Polynomial>& basis, const Quadratic& test_f,
                                    const Probe& probe,
                                    int nodes_per_axis = kDefaultQuadratureNodes);

// Round trip through a filtered system: recover each module weight as a
// measure by subtracting the recorded higher-level leakage of the weights
// recovered before it, then rebuild Psi(test_f)[probe] from the corrected
// measures.  Exact whenever the functional's weights stay polynomial on the
// probe box.
struct FilteredReconstruction {
  GaussianRational direct{0};
  GaussianRational reconstructed{0};
  double residual = 0;  // |direct - reconstructed|
  std::vector<DensityMeasure> recovered;  // corrected weight measures, basis order
};
FilteredReconstruction reconstruct_filtered(const LocalFunctional& psi,
                                            const FilteredEvaluationSystem& sys,
                                            const std::vector<Polynomial>& basis,
                                            const Quadratic& test_f, const Probe& probe);

}  // namespace maval
