#pragma once

#include <vector>

#include "maval/rational.hpp"

namespace maval {

// Exact coefficient-extraction matrix C for distinct nodes t_0..t_K: for any
// polynomial v of degree <= K,  coeff_i(v) = sum_j C[i][j] * v(t_j).
// Built from the monomial coefficients of the Lagrange basis.
std::vector<std::vector<Rational>> coefficient_extraction_matrix(const std::vector<Rational>& nodes);

// Convenience for integer nodes 0..K.
std::vector<std::vector<Rational>> coefficient_extraction_matrix(int degree);

}  // namespace maval
