#pragma once

#include <optional>
#include <vector>

#include "maval/rational.hpp"

namespace maval {

// Axis-aligned box with exact rational bounds, lo[i] <= hi[i].
struct Box {
  std::vector<Rational> lo, hi;

  Box() = default;
  Box(std::vector<Rational> l, std::vector<Rational> h);
  static Box unit(size_t n);                       // [0,1]^n
  static Box centered(size_t n, const Rational& r);  // [-r,r]^n

  size_t dim() const { return lo.size(); }
  bool is_full_dimensional() const;
  Rational volume() const;
  bool contains(const std::vector<Rational>& x) const;  // closed box
  Box intersect(const Box& other) const;  // may produce empty (lo > hi) slabs
  bool is_empty() const;

  std::vector<double> lo_d() const;
  std::vector<double> hi_d() const;
};

}  // namespace maval
