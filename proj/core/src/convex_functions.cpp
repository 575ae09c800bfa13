#include "maval/convex_functions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "maval/error.hpp"
#include "maval/lp.hpp"
#include "maval/rng.hpp"

namespace maval {

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s{0};
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_point_dim(size_t dim, const std::vector<Rational>& x) {
  if (x.size() != dim)
    throw_domain("evaluation point has dimension " + std::to_string(x.size()) + ", expected " +
                 std::to_string(dim));
}

void validate(const MaxAffine& f) {
  if (f.pieces.empty()) throw_domain("max-affine function needs at least one piece");
  size_t d = f.pieces.front().a.size();
  if (d == 0) throw_domain("max-affine function needs dimension >= 1");
  for (const auto& p : f.pieces)
    if (p.a.size() != d) throw_domain("max-affine pieces have mismatched dimensions");
}

void validate(const Quadratic& q) {
  size_t n = q.l.size();
  if (n == 0) throw_domain("quadratic function needs dimension >= 1");
  if (q.A.size() != n) throw_domain("quadratic matrix size does not match linear part");
  for (const auto& row : q.A)
    if (row.size() != n) throw_domain("quadratic matrix is not square");
  if (!is_positive_semidefinite(q.A)) throw_domain("quadratic matrix is not positive semidefinite");
}

void validate(const SupportFn& s) {
  if (s.body.vertices.empty()) throw_domain("support function of an empty body");
  if (s.shift.empty()) throw_domain("support function needs dimension >= 1");
  if (static_cast<size_t>(s.body.dim) != s.shift.size())
    throw_domain("support function shift dimension does not match the body");
}

size_t part_dim(const ConvexFunction& f) { return f.dim(); }

void validate(Combo& c) {
  if (c.weights.size() != c.parts.size())
    throw_domain("combination weights and parts have different lengths");
  for (const auto& w : c.weights)
    if (w < 0) throw_domain("combination weights must be nonnegative");
  for (const auto& p : c.parts)
    if (!p) throw_domain("combination contains a null part");
  if (c.parts.empty() && c.offset.y.empty())
    throw_domain("empty combination has no dimension");
  size_t d = c.parts.empty() ? c.offset.y.size() : part_dim(*c.parts.front());
  for (const auto& p : c.parts)
    if (part_dim(*p) != d) throw_domain("combination parts have mismatched dimensions");
  if (c.offset.y.empty()) c.offset.y.assign(d, Rational(0));
  if (c.offset.y.size() != d) throw_domain("combination offset dimension mismatch");
}

// True iff r(x) <= max over `group` for every x: equivalently, no point puts r
// strictly above every member (exact strict-feasibility LP).
bool below_everywhere(const AffinePiece& r, const std::vector<AffinePiece>& group) {
  if (group.empty()) return false;
  const size_t d = r.a.size();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  rows.reserve(group.size());
  rhs.reserve(group.size());
  for (const auto& s : group) {
    std::vector<Rational> row(d);
    for (size_t i = 0; i < d; ++i) row[i] = s.a[i] - r.a[i];
    rows.push_back(std::move(row));
    rhs.push_back(r.b - s.b);
  }
  auto margin = strict_feasibility_margin(rows, rhs);
  require_invariant(margin.has_value(), "domination margin LP did not solve");
  return *margin <= 0;
}

std::vector<AffinePiece> sorted_unique(std::vector<AffinePiece> pieces) {
  std::sort(pieces.begin(), pieces.end(), piece_lex_less);
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  return pieces;
}

}  // namespace

bool piece_lex_less(const AffinePiece& p, const AffinePiece& q) {
  if (p.a != q.a)
    return std::lexicographical_compare(p.a.begin(), p.a.end(), q.a.begin(), q.a.end());
  return p.b < q.b;
}

ConvexFunction::ConvexFunction(MaxAffine f) : v_(std::move(f)) {
  validate(std::get<MaxAffine>(v_));
}
ConvexFunction::ConvexFunction(Quadratic f) : v_(std::move(f)) {
  validate(std::get<Quadratic>(v_));
}
ConvexFunction::ConvexFunction(SupportFn f) : v_(std::move(f)) {
  validate(std::get<SupportFn>(v_));
}
ConvexFunction::ConvexFunction(Combo f) : v_(std::move(f)) { validate(std::get<Combo>(v_)); }

size_t ConvexFunction::dim() const {
  return std::visit(
      [](const auto& f) -> size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Combo>) {
          return f.parts.empty() ? f.offset.y.size() : f.parts.front()->dim();
        } else {
          return f.dim();
        }
      },
      v_);
}

bool is_positive_semidefinite(std::vector<std::vector<Rational>> a) {
  const size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw_domain("semidefiniteness test needs a square matrix");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (a[i][j] != a[j][i]) throw_domain("semidefiniteness test needs a symmetric matrix");

  std::vector<size_t> active(n);
  std::iota(active.begin(), active.end(), size_t{0});
  while (!active.empty()) {
    size_t pivot = active.size();  // index into `active`
    for (size_t t = 0; t < active.size(); ++t) {
      const Rational& d = a[active[t]][active[t]];
      if (d < 0) return false;
      if (d > 0 && pivot == active.size()) pivot = t;
    }
    if (pivot == active.size()) {
      // All remaining diagonal entries vanish; PSD forces the whole block to 0.
      for (size_t s : active)
        for (size_t t : active)
          if (a[s][t] != 0) return false;
      return true;
    }
    const size_t p = active[pivot];
    const Rational d = a[p][p];
    active.erase(active.begin() + static_cast<ptrdiff_t>(pivot));
    for (size_t s : active)
      for (size_t t : active) a[s][t] -= a[s][p] * a[p][t] / d;
  }
  return true;
}

Rational evaluate(const MaxAffine& f, const std::vector<Rational>& x) {
  validate(f);
  check_point_dim(f.dim(), x);
  Rational best = dot(f.pieces.front().a, x) + f.pieces.front().b;
  for (size_t i = 1; i < f.pieces.size(); ++i) {
    Rational v = dot(f.pieces[i].a, x) + f.pieces[i].b;
    if (v > best) best = std::move(v);
  }
  return best;
}

Rational evaluate(const Quadratic& f, const std::vector<Rational>& x) {
  check_point_dim(f.dim(), x);
  Rational s = f.c + dot(f.l, x);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * dot(f.A[i], x);
  return s;
}

Rational evaluate(const SupportFn& f, const std::vector<Rational>& x) {
  check_point_dim(f.dim(), x);
  std::vector<Rational> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - f.shift[i];
  return support_eval(f.body, y);
}

Rational evaluate(const Combo& f, const std::vector<Rational>& x) {
  Rational s = f.offset.c;
  if (!f.offset.y.empty()) {
    check_point_dim(f.offset.y.size(), x);
    s += dot(f.offset.y, x);
  }
  for (size_t i = 0; i < f.parts.size(); ++i) s += f.weights[i] * evaluate(*f.parts[i], x);
  return s;
}

Rational evaluate(const ConvexFunction& f, const std::vector<Rational>& x) {
  return std::visit([&](const auto& g) { return evaluate(g, x); }, f.data());
}

double evaluate_d(const ConvexFunction& f, std::span<const double> x) {
  if (x.size() != f.dim()) throw_domain("evaluation point dimension mismatch");
  return std::visit(
      [&](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, MaxAffine>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& p : g.pieces) {
            double v = to_double(p.b);
            for (size_t i = 0; i < x.size(); ++i) v += to_double(p.a[i]) * x[i];
            best = std::max(best, v);
          }
          return best;
        } else if constexpr (std::is_same_v<T, Quadratic>) {
          double s = to_double(g.c);
          for (size_t i = 0; i < x.size(); ++i) {
            s += to_double(g.l[i]) * x[i];
            double row = 0;
            for (size_t j = 0; j < x.size(); ++j) row += to_double(g.A[i][j]) * x[j];
            s += x[i] * row;
          }
          return s;
        } else if constexpr (std::is_same_v<T, SupportFn>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& v : g.body.vertices) {
            double s = 0;
            for (size_t i = 0; i < x.size(); ++i) s += to_double(v[i]) * (x[i] - to_double(g.shift[i]));
            best = std::max(best, s);
          }
          return best;
        } else {
          double s = to_double(g.offset.c);
          for (size_t i = 0; i < x.size(); ++i) s += to_double(g.offset.y[i]) * x[i];
          for (size_t i = 0; i < g.parts.size(); ++i)
            s += to_double(g.weights[i]) * evaluate_d(*g.parts[i], x);
          return s;
        }
      },
      f.data());
}

MaxAffine prune(const MaxAffine& f) {
  validate(f);
  std::vector<AffinePiece> pieces = sorted_unique(f.pieces);
  bool changed = true;
  while (changed && pieces.size() > 1) {
    changed = false;
    for (size_t i = 0; i < pieces.size(); ++i) {
      std::vector<AffinePiece> others;
      others.reserve(pieces.size() - 1);
      for (size_t j = 0; j < pieces.size(); ++j)
        if (j != i) others.push_back(pieces[j]);
      if (below_everywhere(pieces[i], others)) {
        pieces.erase(pieces.begin() + static_cast<ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return MaxAffine{std::move(pieces)};
}

MaxAffine pointwise_max(const MaxAffine& f, const MaxAffine& h) {
  validate(f);
  validate(h);
  if (f.dim() != h.dim()) throw_domain("pointwise max of functions on different spaces");
  MaxAffine joined{f.pieces};
  joined.pieces.insert(joined.pieces.end(), h.pieces.begin(), h.pieces.end());
  return prune(joined);
}

MaxAffine sum(const MaxAffine& f, const MaxAffine& h) {
  validate(f);
  validate(h);
  if (f.dim() != h.dim()) throw_domain("sum of functions on different spaces");
  MaxAffine out;
  for (const auto& p : f.pieces) {
    for (const auto& q : h.pieces) {
      AffinePiece r = p;
      for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += q.a[i];
      r.b += q.b;
      out.pieces.push_back(std::move(r));
    }
  }
  return prune(out);
}

std::optional<MaxAffine> min_if_convex(const MaxAffine& f, const MaxAffine& h) {
  validate(f);
  validate(h);
  if (f.dim() != h.dim()) throw_domain("pointwise min of functions on different spaces");
  const size_t d = f.dim();

  std::vector<AffinePiece> candidates{f.pieces};
  candidates.insert(candidates.end(), h.pieces.begin(), h.pieces.end());
  candidates = sorted_unique(std::move(candidates));

  std::vector<AffinePiece> kept;
  for (const auto& r : candidates)
    if (below_everywhere(r, f.pieces) && below_everywhere(r, h.pieces)) kept.push_back(r);
  if (kept.empty()) return std::nullopt;

  // min(f,h) is convex iff it coincides with g = max(kept).  A violation is a
  // point where every kept piece sits strictly below some piece of f and some
  // piece of h simultaneously; scan the finitely many (i, j) witnesses.
  for (const auto& fi : f.pieces) {
    for (const auto& hj : h.pieces) {
      std::vector<std::vector<Rational>> rows;
      std::vector<Rational> rhs;
      rows.reserve(2 * kept.size());
      rhs.reserve(2 * kept.size());
      for (const auto& r : kept) {
        std::vector<Rational> row_f(d), row_h(d);
        for (size_t i = 0; i < d; ++i) {
          row_f[i] = r.a[i] - fi.a[i];
          row_h[i] = r.a[i] - hj.a[i];
        }
        rows.push_back(std::move(row_f));
        rhs.push_back(fi.b - r.b);
        rows.push_back(std::move(row_h));
        rhs.push_back(hj.b - r.b);
      }
      auto margin = strict_feasibility_margin(rows, rhs);
      require_invariant(margin.has_value(), "convexity witness LP did not solve");
      if (*margin > 0) return std::nullopt;
    }
  }
  return prune(MaxAffine{std::move(kept)});
}

Polytope subdifferential(const MaxAffine& f, const std::vector<Rational>& x) {
  validate(f);
  check_point_dim(f.dim(), x);
  const Rational value = evaluate(f, x);
  std::vector<Point> gradients;
  for (const auto& p : f.pieces)
    if (dot(p.a, x) + p.b == value) gradients.push_back(p.a);
  require_invariant(!gradients.empty(), "no active piece at evaluation point");
  return convex_hull(gradients);
}

MaxAffine add_affine(const MaxAffine& f, const AffineMap& l) {
  validate(f);
  if (l.y.size() != f.dim()) throw_domain("affine map dimension mismatch");
  MaxAffine out = f;
  for (auto& p : out.pieces) {
    for (size_t i = 0; i < p.a.size(); ++i) p.a[i] += l.y[i];
    p.b += l.c;
  }
  return out;
}

Quadratic add_affine(const Quadratic& f, const AffineMap& l) {
  if (l.y.size() != f.dim()) throw_domain("affine map dimension mismatch");
  Quadratic out = f;
  for (size_t i = 0; i < out.l.size(); ++i) out.l[i] += l.y[i];
  out.c += l.c;
  return out;
}

ConvexFunction add_affine(const ConvexFunction& f, const AffineMap& l) {
  if (l.y.size() != f.dim()) throw_domain("affine map dimension mismatch");
  if (const auto* m = f.get_if<MaxAffine>()) return ConvexFunction(add_affine(*m, l));
  if (const auto* q = f.get_if<Quadratic>()) return ConvexFunction(add_affine(*q, l));
  if (const auto* c = f.get_if<Combo>()) {
    Combo out = *c;
    if (out.offset.y.empty()) out.offset.y.assign(l.y.size(), Rational(0));
    for (size_t i = 0; i < l.y.size(); ++i) out.offset.y[i] += l.y[i];
    out.offset.c += l.c;
    return ConvexFunction(std::move(out));
  }
  // Support functions absorb affine terms through a one-part combination.
  Combo out;
  out.weights = {Rational(1)};
  out.parts = {std::make_shared<const ConvexFunction>(f)};
  out.offset = l;
  return ConvexFunction(std::move(out));
}

MaxAffine scale(const MaxAffine& f, const Rational& t) {
  validate(f);
  if (t < 0) throw_domain("scaling a convex function by a negative factor");
  MaxAffine out = f;
  for (auto& p : out.pieces) {
    for (auto& ai : p.a) ai *= t;
    p.b *= t;
  }
  return prune(out);
}

Quadratic scale(const Quadratic& f, const Rational& t) {
  if (t < 0) throw_domain("scaling a convex function by a negative factor");
  Quadratic out = f;
  for (auto& row : out.A)
    for (auto& v : row) v *= t;
  for (auto& v : out.l) v *= t;
  out.c *= t;
  return out;
}

ConvexFunction scale(const ConvexFunction& f, const Rational& t) {
  if (t < 0) throw_domain("scaling a convex function by a negative factor");
  if (const auto* m = f.get_if<MaxAffine>()) return ConvexFunction(scale(*m, t));
  if (const auto* q = f.get_if<Quadratic>()) return ConvexFunction(scale(*q, t));
  if (const auto* s = f.get_if<SupportFn>())
    return ConvexFunction(SupportFn{dilate(s->body, t), s->shift});
  const auto& c = std::get<Combo>(f.data());
  Combo out = c;
  for (auto& w : out.weights) w *= t;
  for (auto& v : out.offset.y) v *= t;
  out.offset.c *= t;
  return ConvexFunction(std::move(out));
}

ValuationPair random_valuation_pair(size_t dim, uint64_t seed, int max_attempts) {
  if (dim == 0) throw_domain("valuation pair needs dimension >= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const int piece_count = static_cast<int>(rng.integer(3, 6));
    std::vector<AffinePiece> pieces;
    for (int p = 0; p < piece_count; ++p) {
      AffinePiece piece;
      piece.a.resize(dim);
      for (size_t i = 0; i < dim; ++i) piece.a[i] = Rational(rng.integer(-3, 3));
      piece.b = Rational(rng.integer(-3, 3));
      pieces.push_back(std::move(piece));
    }
    MaxAffine whole = prune(MaxAffine{pieces});
    if (whole.pieces.size() < 2) continue;

    std::vector<AffinePiece> group_f, group_h;
    bool overlap = false;
    for (const auto& p : whole.pieces) {
      switch (rng.integer(0, 2)) {
        case 0: group_f.push_back(p); break;
        case 1: group_h.push_back(p); break;
        default:
          group_f.push_back(p);
          group_h.push_back(p);
          overlap = true;
      }
    }
    if (!overlap || group_f.empty() || group_h.empty()) continue;

    MaxAffine f = prune(MaxAffine{std::move(group_f)});
    MaxAffine h = prune(MaxAffine{std::move(group_h)});
    auto lower = min_if_convex(f, h);
    if (!lower) continue;
    return ValuationPair{f, h, pointwise_max(f, h), std::move(*lower)};
  }
  throw_domain("no valuation pair found within the attempt budget");
}

}  // namespace maval
