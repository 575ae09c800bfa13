#pragma once

#include <optional>
#include <vector>

#include "maval/rational.hpp"

namespace maval {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value{0};
  std::vector<Rational> x;  // an optimal point when status == optimal
};

// Exact rational simplex (two phases, Bland's rule, hence terminating):
//   maximize c.x  subject to  A x <= b,  x free.
// Intended for the small systems of this project (tens of rows/columns).
LpResult solve_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                  const std::vector<Rational>& c);

// Feasibility of A x <= b.
bool lp_feasible(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b);

// Largest eps such that A x + eps <= b is solvable, capped at `cap` to keep
// the program bounded.  Returns nullopt if even eps -> -inf fails (never for
// consistent input sizes).  Positive result certifies a strictly feasible
// point of A x < b, which is returned through *witness when non-null.
std::optional<Rational> strict_feasibility_margin(const std::vector<std::vector<Rational>>& A,
                                                  const std::vector<Rational>& b,
                                                  const Rational& cap = Rational(1),
                                                  std::vector<Rational>* witness = nullptr);

}  // namespace maval
