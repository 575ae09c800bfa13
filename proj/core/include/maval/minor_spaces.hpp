#pragma once

#include <vector>

#include "maval/linalg.hpp"
#include "maval/polynomial.hpp"

namespace maval {

// Determinant of a square matrix of polynomials (cofactor expansion; intended
// for sizes <= 4).  All entries must share a registry.
Polynomial polynomial_determinant(const std::vector<std::vector<Polynomial>>& m);

// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(int n, int k);

// The C(n,k) maximal minors of the first k columns of an n-row variable
// matrix, ordered by lexicographic row subset.  k = 0 yields the single
// constant 1.  The registry must be a matrix block with rows = n, cols >= k
// (see VariableRegistry::matrix).
std::vector<Polynomial> k_minors(const VariableRegistry::Ptr& reg, int n, int k);
// Convenience over a fresh Mat(n, max(k,1)) registry.
std::vector<Polynomial> k_minors(int n, int k);

// Basis of span{ D_i * D_j } extracted from the pairwise products of k-minors
// by exact elimination (pivot = lex-largest monomial, ties by generator
// order).  generators are actual products that enlarged the span; dimension
// is computed, never table-driven.
struct MinorBasis {
  int n = 0;
  int k = 0;
  VariableRegistry::Ptr registry;
  std::vector<Polynomial> generators;
  size_t dimension = 0;
};

MinorBasis squared_minor_basis(const VariableRegistry::Ptr& reg, int n, int k);
MinorBasis squared_minor_basis(int n, int k);

// Registry of symmetric-matrix entries s_i_j (i <= j), ordered by (i, j).
VariableRegistry::Ptr hessian_registry(int n);
// Index of s_{ij} in hessian_registry(n); arguments in either order.
uint32_t hessian_var(int n, int i, int j);

// Basis of the span of all k-minors (all row/column subsets, 0 <= k <= n) of
// the generic symmetric matrix; the 0-minor contributes the constant 1.
struct HessianMinorSpace {
  int n = 0;
  VariableRegistry::Ptr registry;
  std::vector<Polynomial> generators;
  size_t dimension = 0;
  // generators restricted to minor size k (basis of the k-slice)
  std::vector<std::vector<Polynomial>> by_minor_size;
};

HessianMinorSpace hessian_minor_space(int n);

// det( <w_i, w_j> )_{i,j=1..k} with <,> the bilinear dot product of the first
// k columns; for k = n this equals det(W)^2.
Polynomial gram_determinant(const VariableRegistry::Ptr& reg, int n, int k);
Polynomial gram_determinant(int n, int k);

}  // namespace maval
