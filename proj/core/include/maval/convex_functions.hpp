#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "maval/convex_geometry.hpp"
#include "maval/rational.hpp"

namespace maval {

// x -> <y, x> + c.
struct AffineMap {
  std::vector<Rational> y;
  Rational c{0};
};

// One affine piece x -> <a, x> + b of a max-affine function.
struct AffinePiece {
  std::vector<Rational> a;
  Rational b{0};
  friend bool operator==(const AffinePiece& p, const AffinePiece& q) {
    return p.a == q.a && p.b == q.b;
  }
};
bool piece_lex_less(const AffinePiece& p, const AffinePiece& q);

// Finite pointwise maximum of affine pieces (piecewise linear convex).
struct MaxAffine {
  std::vector<AffinePiece> pieces;  // at least one, common dimension
  size_t dim() const { return pieces.at(0).a.size(); }
  friend bool operator==(const MaxAffine& f, const MaxAffine& g) { return f.pieces == g.pieces; }
};

// q(x) = <x, A x> + <l, x> + c with A symmetric positive semidefinite.
struct Quadratic {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> l;
  Rational c{0};
  size_t dim() const { return l.size(); }
};

// x -> h_body(x - shift).
struct SupportFn {
  Polytope body;
  std::vector<Rational> shift;
  size_t dim() const { return shift.size(); }
};

class ConvexFunction;

// Nonnegative combination sum_i w_i f_i plus an affine offset.
struct Combo {
  std::vector<Rational> weights;
  std::vector<std::shared_ptr<const ConvexFunction>> parts;
  AffineMap offset;
};

// Tagged union over the four representations; constructors validate the
// variant invariants (piece counts, symmetry/PSD, dimensions, signs).
class ConvexFunction {
public:
  using Variant = std::variant<MaxAffine, Quadratic, SupportFn, Combo>;

  ConvexFunction(MaxAffine f);     // NOLINT: implicit by design
  ConvexFunction(Quadratic f);     // NOLINT
  ConvexFunction(SupportFn f);     // NOLINT
  ConvexFunction(Combo f);         // NOLINT

  size_t dim() const;
  const Variant& data() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

private:
  Variant v_;
};

// Exact semidefiniteness by pivoted LDL^T elimination (throws on asymmetric
// or non-square input).
bool is_positive_semidefinite(std::vector<std::vector<Rational>> a);

Rational evaluate(const MaxAffine& f, const std::vector<Rational>& x);
Rational evaluate(const Quadratic& f, const std::vector<Rational>& x);
Rational evaluate(const SupportFn& f, const std::vector<Rational>& x);
Rational evaluate(const Combo& f, const std::vector<Rational>& x);
Rational evaluate(const ConvexFunction& f, const std::vector<Rational>& x);
// Floating-point fast path used by quadrature.
double evaluate_d(const ConvexFunction& f, std::span<const double> x);

// Canonical form: pieces deduplicated, weakly dominated pieces removed (LP
// domination test), sorted lexicographically.
MaxAffine prune(const MaxAffine& f);

// f v h as a max-affine function in canonical form.
MaxAffine pointwise_max(const MaxAffine& f, const MaxAffine& h);

// f + h (pieces are the pairwise sums) in canonical form.
MaxAffine sum(const MaxAffine& f, const MaxAffine& h);

// The pointwise minimum when it is convex, nullopt otherwise.  Decision: let
// g be the maximum of all pieces (of either function) that lie below both
// functions everywhere; min(f,h) is convex iff it equals g, which fails iff
// some exact LP finds a point where both f and h exceed g.
std::optional<MaxAffine> min_if_convex(const MaxAffine& f, const MaxAffine& h);

// conv{ a_i : piece i active at x }.
Polytope subdifferential(const MaxAffine& f, const std::vector<Rational>& x);

MaxAffine add_affine(const MaxAffine& f, const AffineMap& l);
Quadratic add_affine(const Quadratic& f, const AffineMap& l);
ConvexFunction add_affine(const ConvexFunction& f, const AffineMap& l);
MaxAffine scale(const MaxAffine& f, const Rational& t);    // t >= 0
Quadratic scale(const Quadratic& f, const Rational& t);    // t >= 0
ConvexFunction scale(const ConvexFunction& f, const Rational& t);

// A pair of max-affine functions whose pointwise min is convex, found by
// rejection sampling: a random function with at most six pieces is split into
// two overlapping piece groups, accepted iff min_if_convex succeeds.
struct ValuationPair {
  MaxAffine f;
  MaxAffine h;
  MaxAffine max_fh;
  MaxAffine min_fh;
};
ValuationPair random_valuation_pair(size_t dim, uint64_t seed, int max_attempts = 500);

}  // namespace maval
