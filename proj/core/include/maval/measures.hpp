#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "maval/box.hpp"
#include "maval/polynomial.hpp"
#include "maval/rational.hpp"

namespace maval {

// Registry of plain coordinates x_1..x_n (the default variable set for weight
// polynomials and densities).
VariableRegistry::Ptr coordinate_registry(size_t n);

// Standard compactly supported bump
//   prod_i exp(1 / (((x_i - center_i)/sigma)^2 - 1))   on |x_i - center_i| < sigma
// and zero elsewhere.
struct BumpDescriptor {
  std::vector<Rational> center;
  Rational sigma{1};
};
double bump_value(const BumpDescriptor& b, std::span<const double> x);

// Weight function from the catalog: constant * polynomial-on-box factors *
// bump factors.  The catalog is closed under products, which keeps the module
// action on local functionals inside the representable class.
class Weight {
public:
  static Weight one(size_t dim);
  static Weight constant(size_t dim, Rational c);
  // The polynomial restricted to `clip` and zero outside; real coefficients.
  static Weight polynomial_on_box(Polynomial p, Box clip);
  static Weight bump(BumpDescriptor b);

  size_t dim() const { return dim_; }
  const Rational& constant_factor() const { return const_; }
  const std::vector<std::pair<Polynomial, Box>>& polynomial_factors() const { return polys_; }
  const std::vector<BumpDescriptor>& bump_factors() const { return bumps_; }
  bool is_polynomial() const { return bumps_.empty(); }  // exact path available
  bool is_identically_one() const { return const_ == 1 && polys_.empty() && bumps_.empty(); }

  Weight times(const Weight& other) const;

  // The translate x -> w(x - v): polynomial factors are composed with x - v,
  // clip boxes and bump centers are shifted by v.
  Weight translate(const std::vector<Rational>& v) const;

  // Smallest box outside which the weight vanishes; nullopt when every factor
  // is supported everywhere.  Empty boxes mean the weight is identically 0.
  std::optional<Box> support() const;

  double value_d(std::span<const double> x) const;
  // Exact value / integral; domain error when bump factors are present.
  Rational value_exact(const std::vector<Rational>& x) const;
  Rational integrate_exact(const Box& box) const;

private:
  explicit Weight(size_t dim) : dim_(dim) {}

  size_t dim_ = 0;
  Rational const_{1};
  std::vector<std::pair<Polynomial, Box>> polys_;
  std::vector<BumpDescriptor> bumps_;
};

enum class DensityMode { exact, quadrature };

// Optional absolutely continuous part of a measure: a polynomial density on a
// box, with the intended evaluation path recorded.
struct DensityPart {
  Box box;
  Polynomial density;
  DensityMode mode = DensityMode::exact;
};

// Finite rational measure: finitely many distinct atoms (zero weights are
// dropped) plus an optional density part.
struct AtomicMeasure {
  std::vector<std::pair<std::vector<Rational>, Rational>> atoms;  // sorted by point
  std::optional<DensityPart> density;

  // Merges coinciding points, drops zero weights, sorts lexicographically.
  static AtomicMeasure from_atoms(std::vector<std::pair<std::vector<Rational>, Rational>> raw);

  bool is_zero() const { return atoms.empty() && !density; }
  Rational atom_mass() const;        // sum of atom weights
  Rational total_variation() const;  // sum of |weights| (atoms only)
};

// Atom-wise linear combination; density parts must be absent.
AtomicMeasure add(const AtomicMeasure& a, const AtomicMeasure& b);
AtomicMeasure scale_measure(const AtomicMeasure& a, const Rational& t);
bool operator==(const AtomicMeasure& a, const AtomicMeasure& b);

}  // namespace maval
