#include "maval/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "maval/error.hpp"
#include "maval/module_division.hpp"
#include "maval/quadrature.hpp"

namespace maval {

namespace {

void require_real(const Polynomial& p, const char* what) {
  for (const auto& [m, c] : p.terms())
    if (c.im != 0) throw_domain(std::string(what) + " must have real coefficients");
}

bool point_lex_less_vec(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

VariableRegistry::Ptr coordinate_registry(size_t n) {
  if (n == 0) throw_domain("coordinate registry needs n >= 1");
  std::vector<std::string> names;
  names.reserve(n);
  for (size_t i = 1; i <= n; ++i) names.push_back("x_" + std::to_string(i));
  return VariableRegistry::scalars(names);
}

double bump_value(const BumpDescriptor& b, std::span<const double> x) {
  if (x.size() != b.center.size()) throw_domain("bump evaluated at wrong dimension");
  const double sigma = to_double(b.sigma);
  double out = 1.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] - to_double(b.center[i])) / sigma;
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    out *= std::exp(1.0 / (t2 - 1.0));
  }
  return out;
}

Weight Weight::one(size_t dim) { return constant(dim, Rational(1)); }

Weight Weight::constant(size_t dim, Rational c) {
  if (dim == 0) throw_domain("weight needs dimension >= 1");
  Weight w(dim);
  w.const_ = std::move(c);
  return w;
}

Weight Weight::polynomial_on_box(Polynomial p, Box clip) {
  if (clip.dim() == 0) throw_domain("weight needs dimension >= 1");
  if (p.registry()->size() != clip.dim())
    throw_domain("weight polynomial must use exactly the box coordinates");
  require_real(p, "weight polynomial");
  Weight w(clip.dim());
  w.polys_.emplace_back(std::move(p), std::move(clip));
  return w;
}

Weight Weight::bump(BumpDescriptor b) {
  if (b.center.empty()) throw_domain("weight needs dimension >= 1");
  if (b.sigma <= 0) throw_domain("bump radius must be positive");
  Weight w(b.center.size());
  w.bumps_.push_back(std::move(b));
  return w;
}

Weight Weight::times(const Weight& other) const {
  if (dim_ != other.dim_) throw_domain("weight product across different dimensions");
  Weight out = *this;
  out.const_ *= other.const_;
  for (const auto& [p, b] : other.polys_) {
    if (out.polys_.empty()) {
      out.polys_.emplace_back(p, b);
    } else {
      // Name-matched transport so factors built over twin registries combine.
      out.polys_.emplace_back(embed_by_name(p, out.polys_.front().first.registry()), b);
    }
  }
  out.bumps_.insert(out.bumps_.end(), other.bumps_.begin(), other.bumps_.end());
  return out;
}

Weight Weight::translate(const std::vector<Rational>& v) const {
  if (v.size() != dim_) throw_domain("weight translate: offset dimension mismatch");
  Weight out = *this;
  for (auto& [p, b] : out.polys_) {
    const auto reg = p.registry();
    std::vector<Polynomial> images;
    images.reserve(dim_);
    for (size_t i = 0; i < dim_; ++i)
      images.push_back(Polynomial::variable(reg, static_cast<uint32_t>(i)) -
                       Polynomial::constant(reg, GaussianRational(v[i])));
    p = p.substitute(images);
    std::vector<Rational> lo = b.lo, hi = b.hi;
    for (size_t i = 0; i < dim_; ++i) {
      lo[i] += v[i];
      hi[i] += v[i];
    }
    b = Box(std::move(lo), std::move(hi));
  }
  for (auto& bump : out.bumps_)
    for (size_t i = 0; i < dim_; ++i) bump.center[i] += v[i];
  return out;
}

std::optional<Box> Weight::support() const {
  std::optional<Box> s;
  auto meet = [&](const Box& b) {
    s = s ? s->intersect(b) : b;
  };
  for (const auto& [p, b] : polys_) meet(b);
  for (const auto& b : bumps_) {
    std::vector<Rational> lo(dim_), hi(dim_);
    for (size_t i = 0; i < dim_; ++i) {
      lo[i] = b.center[i] - b.sigma;
      hi[i] = b.center[i] + b.sigma;
    }
    meet(Box(std::move(lo), std::move(hi)));
  }
  return s;
}

double Weight::value_d(std::span<const double> x) const {
  if (x.size() != dim_) throw_domain("weight evaluated at wrong dimension");
  double out = to_double(const_);
  for (const auto& [p, b] : polys_) {
    bool inside = true;
    for (size_t i = 0; i < dim_ && inside; ++i)
      inside = to_double(b.lo[i]) <= x[i] && x[i] <= to_double(b.hi[i]);
    if (!inside) return 0.0;
    out *= p.evaluate_real(x);
  }
  for (const auto& b : bumps_) out *= bump_value(b, x);
  return out;
}

Rational Weight::value_exact(const std::vector<Rational>& x) const {
  if (!bumps_.empty()) throw_domain("exact weight evaluation with bump factors");
  if (x.size() != dim_) throw_domain("weight evaluated at wrong dimension");
  Rational out = const_;
  std::vector<GaussianRational> gx(x.begin(), x.end());
  for (const auto& [p, b] : polys_) {
    if (!b.contains(x)) return Rational(0);
    const GaussianRational v = p.evaluate(gx);
    out *= v.re;
  }
  return out;
}

Rational Weight::integrate_exact(const Box& box) const {
  if (!bumps_.empty()) throw_domain("exact weight integration with bump factors");
  if (box.dim() != dim_) throw_domain("weight integrated over wrong dimension");
  Box region = box;
  for (const auto& [p, b] : polys_) region = region.intersect(b);
  if (region.is_empty()) return Rational(0);
  if (polys_.empty()) return const_ * region.volume();
  Polynomial prod = polys_.front().first;
  for (size_t i = 1; i < polys_.size(); ++i)
    prod *= embed_by_name(polys_[i].first, prod.registry());
  const GaussianRational integral = integrate_polynomial_box(prod, region);
  require_invariant(integral.im == 0, "real weight integrated to a complex value");
  return const_ * integral.re;
}

AtomicMeasure AtomicMeasure::from_atoms(
    std::vector<std::pair<std::vector<Rational>, Rational>> raw) {
  std::map<std::vector<Rational>, Rational, decltype(&point_lex_less_vec)> merged(
      &point_lex_less_vec);
  size_t dim = 0;
  for (auto& [x, w] : raw) {
    if (dim == 0) dim = x.size();
    if (x.size() != dim) throw_domain("measure atoms have mismatched dimensions");
    merged[std::move(x)] += w;
  }
  AtomicMeasure out;
  for (auto& [x, w] : merged)
    if (w != 0) out.atoms.emplace_back(x, w);
  return out;
}

Rational AtomicMeasure::atom_mass() const {
  Rational s{0};
  for (const auto& [x, w] : atoms) s += w;
  return s;
}

Rational AtomicMeasure::total_variation() const {
  Rational s{0};
  for (const auto& [x, w] : atoms) s += (w < 0 ? -w : w);
  return s;
}

AtomicMeasure add(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.density || b.density) throw_domain("adding measures with density parts");
  auto atoms = a.atoms;
  atoms.insert(atoms.end(), b.atoms.begin(), b.atoms.end());
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure scale_measure(const AtomicMeasure& a, const Rational& t) {
  if (a.density) throw_domain("scaling a measure with a density part");
  auto atoms = a.atoms;
  for (auto& [x, w] : atoms) w *= t;
  return AtomicMeasure::from_atoms(std::move(atoms));
}

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.density.has_value() != b.density.has_value()) return false;
  if (a.density) {
    if (!(a.density->box.lo == b.density->box.lo && a.density->box.hi == b.density->box.hi))
      return false;
    if (!(a.density->density == b.density->density)) return false;
    if (a.density->mode != b.density->mode) return false;
  }
  return a.atoms == b.atoms;
}

}  // namespace maval
