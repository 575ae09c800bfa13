#pragma once

#include <vector>

#include "maval/rational.hpp"

namespace maval {

using Point = std::vector<Rational>;

bool point_lex_less(const Point& a, const Point& b);

// Compact convex polytope given by its exact extreme points, sorted
// lexicographically.  Lower-dimensional (even single-point) bodies are legal
// everywhere and carry volume zero.
struct Polytope {
  int dim = 0;                  // ambient dimension
  std::vector<Point> vertices;  // irredundant, lex-sorted
};

// Irredundant hull of a nonempty point set.  Exact arithmetic throughout: an
// incremental beneath-beyond hull handles intrinsic dimension <= 3 and a
// brute-force supporting-hyperplane enumeration handles intrinsic dimension 4
// (the library targets ambient dimension <= 4).  Input sets of lower affine
// dimension are reduced to coordinates on their affine hull first.
Polytope convex_hull(const std::vector<Point>& points);

// Exact n-dimensional volume via a triangulation coned from the
// lexicographically first vertex; 0 for lower-dimensional bodies.
Rational volume(const Polytope& p);

Polytope translate(const Polytope& p, const Point& t);
// t * p with t >= 0.
Polytope dilate(const Polytope& p, const Rational& t);
// Hull of pairwise vertex sums.
Polytope minkowski_sum(const Polytope& a, const Polytope& b);

// Mixed volume V(K_1,...,K_n) of n bodies in R^n, normalized so that
// V(K,...,K) = vol(K): polarization of the volume,
//   V = (1/n!) sum_{0 != S subset [n]} (-1)^{n-|S|} vol(sum_{i in S} K_i).
Rational mixed_volume(const std::vector<Polytope>& bodies);

// h_P(y) = max over vertices of <v, y>.
Rational support_eval(const Polytope& p, const std::vector<Rational>& y);

// Exact membership x in conv(points), decided by rational linear programming
// (independent of the hull machinery).
bool in_convex_hull(const std::vector<Point>& points, const Point& x);

}  // namespace maval
