#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maval/minor_spaces.hpp"
#include "maval/polynomial.hpp"

namespace maval {

// Machinery for submodules of Poly(Mat_{n,k+1}) over the coefficient ring of
// polynomials in the last matrix column: generators live in the first k
// columns and scalars act by multiplication with last-column polynomials.
// Because the module action never touches first-k-column variables, a term is
// reducible by a generator only when its first-k-column part equals the
// generator's initial monomial exactly; distinct initial monomials therefore
// admit no S-pairs and the reduced basis is obtained by exact linear
// inter-reduction of the generators.

// Rebuilds p over `target`, matching variables by name.  Throws a schema
// error when a used variable has no counterpart in the target registry.
Polynomial embed_by_name(const Polynomial& p, const VariableRegistry::Ptr& target);

struct GroebnerModuleBasis {
  int n = 0;
  int k = 0;
  VariableRegistry::Ptr registry;      // matrix block with cols = k + 1
  // Monic, fully inter-reduced, sorted by descending initial monomial; unique
  // for a given span, independent of generator order.
  std::vector<Polynomial> generators;
  bool homogeneous = true;
  bool minimal = true;
  std::string order;                   // human-readable order descriptor
};

// Minimal (reduced) basis of the module generated by `generators`, which must
// be homogeneous and use only variables from the first k columns.  Generators
// may live over any registry sharing variable names with the target; when
// `registry` is null a fresh Mat(n, k+1) block named "w" is created.
GroebnerModuleBasis build_groebner(const std::vector<Polynomial>& generators, int n, int k,
                                   VariableRegistry::Ptr registry = nullptr);

// Checks the defining properties of a reduced module basis: initial monomials
// are distinct, live in the first k columns, and appear in no other element's
// support (hence every module S-pair is vacuous).  Throws an invariant error
// on violation.
void verify_module_basis(const GroebnerModuleBasis& basis);

struct ModuleDivision {
  std::vector<Polynomial> quotients;   // polynomials in the last column only
  Polynomial remainder;
};

// Exact division F = sum quotients[j] * basis.generators[j] + remainder where
// no remainder monomial has a first-k-column part equal to an initial
// monomial of the basis.  remainder == 0 iff F lies in the module.
ModuleDivision divide(const Polynomial& F, const GroebnerModuleBasis& basis);

// Division remainder was nonzero where membership was required.
class NotInModuleError : public error {
public:
  NotInModuleError(std::string message, Polynomial rem)
      : error(errc::domain, std::move(message)), remainder(std::move(rem)) {}
  Polynomial remainder;
};

// Coefficients g_j with F = sum g_j(last column) * basis.generators[j], via
// Groebner division followed by an exact scalar change of basis.  Throws
// NotInModuleError when F is not in the module.
std::vector<Polynomial> decompose_in_m2k(const Polynomial& F, int n, int k,
                                         const MinorBasis& basis);

// Monte-Carlo membership test for the module generated by products of two
// k-minors: restricts F to `trials` random rational k-dimensional frames
// (first k columns set to B * z with integer B) and checks that the
// restriction factors as det(z)^2 times a polynomial in the last column.
bool membership_by_restriction(const Polynomial& F, int n, int k, int trials, uint64_t seed);

}  // namespace maval
