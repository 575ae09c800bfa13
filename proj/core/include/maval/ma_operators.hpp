#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "maval/convex_functions.hpp"
#include "maval/measures.hpp"
#include "maval/quadrature.hpp"

namespace maval {

// Discrete Monge-Ampere measure of a piecewise linear convex function on a
// full-dimensional window: one atom per vertex of the dominance-region
// complex, weighted by the volume of the subdifferential there.  Cells of
// positive dimension carry no mass and are omitted.  Requires dim <= 3.
AtomicMeasure discrete_ma(const MaxAffine& f, const Box& window);

// Mixed discrete MA of n functions on R^n, evaluated two independent ways:
//  - mixed volumes of the subdifferentials at each vertex of the common
//    refinement of the region complexes;
//  - exact coefficient extraction of the multilinear lambda-term from
//    discrete_ma(sum_j lambda_j f_j) sampled on the integer grid {0..n}^n.
// The two must agree exactly; the cross-check is part of the test suite.
AtomicMeasure mixed_ma_discrete(const std::vector<MaxAffine>& fs, const Box& window);
AtomicMeasure mixed_ma_polarization(const std::vector<MaxAffine>& fs, const Box& window);

// Tensor Gauss-Legendre approximation of  integral_box phi(x) det(D^2 f) dx.
// The callable form takes x -> det(D^2 f(x)) directly, so any smooth f whose
// Hessian determinant the caller can provide fits; the quadratic form wraps
// the constant det(2A).
double quadrature_ma(const std::function<double(std::span<const double>)>& det_hessian,
                     const Weight& phi, const Box& box,
                     int nodes_per_axis = kDefaultQuadratureNodes);
double quadrature_ma(const Quadratic& f, const Weight& phi, const Box& box,
                     int nodes_per_axis = kDefaultQuadratureNodes);
// Exact path for polynomial weights: det(2A) * integral of phi.
Rational quadrature_ma_exact(const Quadratic& f, const Weight& phi, const Box& box);

// Variables (c, y_1..y_n, s_1_1..s_n_n upper triangle) describing the 2-jet
// (value, gradient, Hessian) of a convex function; the s-block names match
// hessian_registry(n) so minor-space elements transport by name.
VariableRegistry::Ptr jet_registry(int n);

// Throws unless, for every (c,y)-monomial of P, the attached polynomial in
// the s-variables lies in the span of the symmetric-matrix minors (exact
// linear solve against hessian_minor_space(n)).
void require_hessian_span(const Polynomial& p, int n);

// P(f(x), grad f(x), D^2 f(x)) as a polynomial in x over coordinate_registry(n)
// for a quadratic f; P lives in (a registry name-compatible with)
// jet_registry(n).
Polynomial jet_substitute(const Polynomial& p, const Quadratic& f);

// Exact integral of  phi(x) * integrand(x)  over the box for a polynomial
// weight (the integrand is given over the coordinate registry).
GaussianRational integrate_weighted_exact(const Polynomial& integrand, const Weight& phi,
                                          const Box& box);

// Exact value of  integral_box phi(x) P(f(x), grad f(x), D^2 f(x)) dx  for a
// quadratic f and polynomial weight; P lives in (a registry name-compatible
// with) jet_registry(n) and must pass require_hessian_span.  Real inputs give
// a real result; complex invariant parts are allowed.
GaussianRational invariant_functional_apply(const Polynomial& p, const Quadratic& f,
                                            const Weight& phi, const Box& box);

// Translation-invariant local functional: a sum of weight x invariant-part
// terms evaluated as  sum_j integral phi_j(x) P_j(f, grad f, D^2 f) dx.
struct LocalFunctionalTerm {
  Weight weight;
  Polynomial invariant;  // over jet_registry(n)
};

struct LocalFunctional {
  int n = 0;
  int degree = 0;  // max total degree of the invariant parts
  std::vector<LocalFunctionalTerm> terms;
};

// Validates dimensions and the minor-span invariant; embeds every invariant
// into jet_registry(n) by variable name.
LocalFunctional make_local_functional(int n, std::vector<LocalFunctionalTerm> terms);

// Bounding box of the union of the term supports; nullopt when some term is
// supported everywhere.
std::optional<Box> local_support(const LocalFunctional& psi);

// phi . Psi: every term weight multiplied by phi (the catalog is closed under
// products, so the result is again representable).
LocalFunctional module_action(const Weight& phi, const LocalFunctional& psi);

// Exact evaluation on a quadratic argument (all weights polynomial).
GaussianRational local_functional_apply(const LocalFunctional& psi, const Quadratic& f,
                                        const Box& box);
// Quadrature evaluation (allows bump weights).
std::complex<double> local_functional_apply_d(const LocalFunctional& psi, const Quadratic& f,
                                              const Box& box,
                                              int nodes_per_axis = kDefaultQuadratureNodes);

}  // namespace maval
