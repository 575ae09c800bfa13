#include "maval/box.hpp"

#include <algorithm>

#include "maval/error.hpp"

namespace maval {

Box::Box(std::vector<Rational> l, std::vector<Rational> h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size()) throw_schema("box: lo/hi dimension mismatch");
  for (size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw_schema("box: lo > hi on axis " + std::to_string(i));
}

Box Box::unit(size_t n) {
  return Box(std::vector<Rational>(n, Rational(0)), std::vector<Rational>(n, Rational(1)));
}

Box Box::centered(size_t n, const Rational& r) {
  return Box(std::vector<Rational>(n, -r), std::vector<Rational>(n, r));
}

bool Box::is_full_dimensional() const {
  for (size_t i = 0; i < lo.size(); ++i)
    if (lo[i] == hi[i]) return false;
  return !lo.empty();
}

Rational Box::volume() const {
  Rational v(1);
  for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(const std::vector<Rational>& x) const {
  if (x.size() != lo.size()) throw_domain("box: point dimension mismatch");
  for (size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Box Box::intersect(const Box& other) const {
  if (other.dim() != dim()) throw_domain("box: intersect dimension mismatch");
  Box out;
  out.lo = lo;
  out.hi = hi;
  for (size_t i = 0; i < lo.size(); ++i) {
    out.lo[i] = std::max(lo[i], other.lo[i]);
    out.hi[i] = std::min(hi[i], other.hi[i]);
  }
  return out;  // may be empty; bounds deliberately not validated here
}

bool Box::is_empty() const {
  for (size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) return true;
  return false;
}

std::vector<double> Box::lo_d() const {
  std::vector<double> v(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) v[i] = to_double(lo[i]);
  return v;
}

std::vector<double> Box::hi_d() const {
  std::vector<double> v(hi.size());
  for (size_t i = 0; i < hi.size(); ++i) v[i] = to_double(hi[i]);
  return v;
}

}  // namespace maval
