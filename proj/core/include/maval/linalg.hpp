#pragma once

#include <optional>
#include <vector>

#include "maval/polynomial.hpp"

namespace maval {

// Maintains a row-echelon basis (monic pivots keyed by leading monomial) for
// the span of a stream of polynomials, tracking how each echelon row is
// expressed in the inserted generators.  Insertion order is deterministic:
// pivots are the lex-largest monomials, ties broken by generator index by
// virtue of processing order.
class SpanBuilder {
public:
  struct Reduction {
    Polynomial remainder;
    std::vector<GaussianRational> combination;  // over inserted generators
  };

  explicit SpanBuilder(VariableRegistry::Ptr reg) : reg_(std::move(reg)) {}

  // Returns true if the polynomial enlarged the span.
  bool insert(const Polynomial& p);
  size_t rank() const { return rows_.size(); }
  size_t inserted() const { return inserted_; }

  // p = sum combination[i] * generator_i + remainder, remainder reduced
  // against every pivot monomial.
  Reduction reduce(const Polynomial& p) const;
  // Coordinates of p over the inserted generators, if p lies in the span.
  std::optional<std::vector<GaussianRational>> coordinates(const Polynomial& p) const;
  bool contains(const Polynomial& p) const;

  // The monic echelon rows in descending pivot order.
  std::vector<Polynomial> echelon_rows() const;

  const VariableRegistry::Ptr& registry() const { return reg_; }

private:
  struct Row {
    Polynomial poly;                         // monic
    std::vector<GaussianRational> coords;    // poly = sum coords[i] * generator_i
  };

  VariableRegistry::Ptr reg_;
  std::vector<Row> rows_;
  std::map<Monomial, size_t, LexGreater> pivots_;
  size_t inserted_ = 0;
};

// Dense exact linear algebra over Q(i).
using Matrix = std::vector<std::vector<GaussianRational>>;

size_t matrix_rank(Matrix a);
// One solution of A x = b if consistent (least-index pivoting, free variables
// set to zero); nullopt if inconsistent.
std::optional<std::vector<GaussianRational>> solve_linear(const Matrix& a,
                                                          const std::vector<GaussianRational>& b);
// Simultaneous solve for several right-hand sides (columns of B).
std::optional<Matrix> solve_linear_multi(const Matrix& a, const Matrix& b);
std::optional<Matrix> invert_matrix(const Matrix& a);

}  // namespace maval
