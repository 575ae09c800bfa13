#include "maval/convex_geometry.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "maval/error.hpp"
#include "maval/lp.hpp"

namespace maval {

namespace {

using RMatrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns the pivot columns.
std::vector<size_t> rref(RMatrix& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    const Rational inv = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank_of(RMatrix m) { return rref(m).size(); }

Rational rational_det(RMatrix m) {
  const size_t n = m.size();
  Rational det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t sel = c;
    while (sel < n && m[sel][c] == 0) ++sel;
    if (sel == n) return Rational(0);
    if (sel != c) {
      std::swap(m[c], m[sel]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

// One solution of A x = b (free variables zero); nullopt when inconsistent.
std::optional<std::vector<Rational>> rational_solve(RMatrix a, const std::vector<Rational>& b) {
  const size_t rows = a.size();
  const size_t cols = rows ? a[0].size() : 0;
  for (size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
  const std::vector<size_t> piv = rref(a);
  std::vector<Rational> x(cols, Rational(0));
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == cols) return std::nullopt;  // pivot in the rhs column
    x[piv[r]] = a[r][cols];
  }
  return x;
}

// A nonzero kernel vector of a matrix whose nullity is exactly one.
std::vector<Rational> kernel_vector(RMatrix m, size_t cols) {
  const std::vector<size_t> piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (size_t c : piv) is_piv[c] = true;
  size_t free_col = cols;
  for (size_t c = 0; c < cols; ++c)
    if (!is_piv[c]) {
      free_col = c;
      break;
    }
  require_invariant(free_col < cols && piv.size() + 1 == cols, "kernel_vector: nullity is not 1");
  std::vector<Rational> v(cols, Rational(0));
  v[free_col] = Rational(1);
  for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free_col];
  return v;
}

Rational dot(const std::vector<Rational>& a, const Point& x) {
  Rational s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

Rational factorial(size_t n) {
  Rational f(1);
  for (size_t i = 2; i <= n; ++i) f *= Rational(static_cast<int64_t>(i));
  return f;
}

struct Facet {
  std::vector<size_t> pts;  // sorted point ids on the facet
  std::vector<Rational> a;  // outward normal
  Rational b;               // <a, x> <= b inside
};

// Hyperplane through d affinely independent points, oriented so that `ref`
// lies strictly on the <= side.
Facet make_facet(const std::vector<Point>& store, std::vector<size_t> ids, const Point& ref) {
  const size_t d = ids.size();
  RMatrix diff(d - 1, std::vector<Rational>(d));
  for (size_t i = 1; i < d; ++i)
    for (size_t j = 0; j < d; ++j) diff[i - 1][j] = store[ids[i]][j] - store[ids[0]][j];
  Facet f;
  f.a = kernel_vector(std::move(diff), d);
  f.b = dot(f.a, store[ids[0]]);
  const Rational side = dot(f.a, ref);
  require_invariant(side != f.b, "hull: reference point lies on a facet plane");
  if (side > f.b) {
    for (auto& c : f.a) c = -c;
    f.b = -f.b;
  }
  std::sort(ids.begin(), ids.end());
  f.pts = std::move(ids);
  return f;
}

struct FullDimHull {
  std::vector<Facet> facets;       // simplicial pieces from the incremental path
  std::vector<size_t> vertex_ids;  // sorted ids of the extreme input points
};

// A point is extreme iff its incident facet normals span the full dimension
// (fan-center points introduced by simplicial subdivision of a flat face lie
// on a single hyperplane and are filtered out here).
std::vector<size_t> extreme_ids(const std::vector<Facet>& facets, size_t d) {
  std::map<size_t, RMatrix> normals;
  for (const auto& f : facets)
    for (size_t id : f.pts) normals[id].push_back(f.a);
  std::vector<size_t> out;
  for (auto& [id, mat] : normals)
    if (rank_of(std::move(mat)) == d) out.push_back(id);
  return out;
}

std::vector<size_t> initial_simplex(const std::vector<Point>& pts, size_t d) {
  std::vector<size_t> ids{0};
  RMatrix basis;
  for (size_t i = 1; i < pts.size() && ids.size() < d + 1; ++i) {
    std::vector<Rational> dir(d);
    for (size_t j = 0; j < d; ++j) dir[j] = pts[i][j] - pts[0][j];
    RMatrix trial = basis;
    trial.push_back(dir);
    if (rank_of(std::move(trial)) == basis.size() + 1) {
      basis.push_back(std::move(dir));
      ids.push_back(i);
    }
  }
  require_invariant(ids.size() == d + 1, "hull: input is not full-dimensional");
  return ids;
}

// Beneath-beyond hull for full-dimensional input, exact arithmetic, any order
// of (deduplicated) points.  Points on the current boundary are skipped: they
// cannot be extreme.  New facets coned over horizon ridges are never
// degenerate because the ridge spans d-1 dimensions inside the visible
// facet's hyperplane while the new point lies strictly off it.
FullDimHull incremental_hull(const std::vector<Point>& pts, size_t d) {
  const std::vector<size_t> init = initial_simplex(pts, d);
  Point ref(d, Rational(0));
  for (size_t id : init)
    for (size_t j = 0; j < d; ++j) ref[j] += pts[id][j];
  for (size_t j = 0; j < d; ++j) ref[j] /= Rational(static_cast<int64_t>(d) + 1);

  std::vector<Facet> facets;
  for (size_t skip = 0; skip <= d; ++skip) {
    std::vector<size_t> ids;
    for (size_t t = 0; t <= d; ++t)
      if (t != skip) ids.push_back(init[t]);
    facets.push_back(make_facet(pts, ids, ref));
  }

  const std::set<size_t> used(init.begin(), init.end());
  for (size_t p = 0; p < pts.size(); ++p) {
    if (used.count(p)) continue;
    std::vector<char> visible(facets.size(), 0);
    bool any = false;
    for (size_t i = 0; i < facets.size(); ++i) {
      if (dot(facets[i].a, pts[p]) > facets[i].b) {
        visible[i] = 1;
        any = true;
      }
    }
    if (!any) continue;  // inside or on the boundary

    // Horizon = ridges covered exactly once by the visible region.
    std::map<std::vector<size_t>, int> ridge_count;
    for (size_t i = 0; i < facets.size(); ++i) {
      if (!visible[i]) continue;
      for (size_t skip = 0; skip < facets[i].pts.size(); ++skip) {
        std::vector<size_t> ridge;
        for (size_t t = 0; t < facets[i].pts.size(); ++t)
          if (t != skip) ridge.push_back(facets[i].pts[t]);
        ++ridge_count[ridge];
      }
    }
    std::vector<Facet> next;
    for (size_t i = 0; i < facets.size(); ++i)
      if (!visible[i]) next.push_back(facets[i]);
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<size_t> ids = ridge;
      ids.push_back(p);
      next.push_back(make_facet(pts, ids, ref));
    }
    facets = std::move(next);
  }
  return {facets, extreme_ids(facets, d)};
}

// Supporting-hyperplane enumeration over all d-subsets; facets carry the full
// set of points on their hyperplane (not just a simplex).
FullDimHull brute_force_hull(const std::vector<Point>& pts, size_t d) {
  const size_t m = pts.size();
  require_invariant(m >= d + 1, "brute-force hull: too few points");
  std::map<std::pair<std::vector<Rational>, Rational>, std::vector<size_t>> planes;

  std::vector<size_t> sel(d);
  for (size_t i = 0; i < d; ++i) sel[i] = i;
  while (true) {
    RMatrix diff(d - 1, std::vector<Rational>(d));
    for (size_t i = 1; i < d; ++i)
      for (size_t j = 0; j < d; ++j) diff[i - 1][j] = pts[sel[i]][j] - pts[sel[0]][j];
    if (rank_of(diff) == d - 1) {
      std::vector<Rational> a = kernel_vector(std::move(diff), d);
      Rational b = dot(a, pts[sel[0]]);
      bool le = true, ge = true;
      for (const auto& x : pts) {
        const Rational s = dot(a, x);
        if (s > b) le = false;
        if (s < b) ge = false;
        if (!le && !ge) break;
      }
      if (le || ge) {
        if (!le) {  // flip so the hull is on the <= side
          for (auto& c : a) c = -c;
          b = -b;
        }
        size_t first_nz = 0;
        while (a[first_nz] == 0) ++first_nz;
        const Rational scale = abs(a[first_nz]);
        for (auto& c : a) c /= scale;
        b /= scale;
        auto& ids = planes[{a, b}];
        if (ids.empty()) {
          for (size_t i = 0; i < m; ++i)
            if (dot(a, pts[i]) == b) ids.push_back(i);
        }
      }
    }
    // next d-subset
    size_t k = d;
    while (k > 0 && sel[k - 1] == m - d + (k - 1)) --k;
    if (k == 0) break;
    ++sel[k - 1];
    for (size_t t = k; t < d; ++t) sel[t] = sel[t - 1] + 1;
  }

  FullDimHull out;
  for (auto& [key, ids] : planes) out.facets.push_back({ids, key.first, key.second});
  out.vertex_ids = extreme_ids(out.facets, d);
  return out;
}

// Affine-hull coordinates: returns the intrinsic dimension d, and fills
// `reduced` with each point's coordinates over a basis of difference vectors.
size_t affine_reduce(const std::vector<Point>& pts, std::vector<Point>* reduced) {
  const size_t n = pts[0].size();
  RMatrix basis_rows;
  for (size_t i = 1; i < pts.size() && basis_rows.size() < n; ++i) {
    std::vector<Rational> dir(n);
    for (size_t j = 0; j < n; ++j) dir[j] = pts[i][j] - pts[0][j];
    RMatrix trial = basis_rows;
    trial.push_back(dir);
    if (rank_of(std::move(trial)) == basis_rows.size() + 1) basis_rows.push_back(std::move(dir));
  }
  const size_t d = basis_rows.size();
  if (!reduced || d == 0) return d;
  RMatrix a(n, std::vector<Rational>(d));
  for (size_t j = 0; j < d; ++j)
    for (size_t r = 0; r < n; ++r) a[r][j] = basis_rows[j][r];
  reduced->clear();
  for (const auto& p : pts) {
    std::vector<Rational> rhs(n);
    for (size_t r = 0; r < n; ++r) rhs[r] = p[r] - pts[0][r];
    auto y = rational_solve(a, rhs);
    require_invariant(y.has_value(), "affine reduction: point escapes the affine hull");
    reduced->push_back(std::move(*y));
  }
  return d;
}

FullDimHull full_dim_hull(const std::vector<Point>& pts, size_t d) {
  require_domain(d <= 4, "convex hull: intrinsic dimension > 4 is not supported");
  return d <= 3 ? incremental_hull(pts, d) : brute_force_hull(pts, d);
}

void check_common_dimension(const std::vector<Point>& points, size_t n, const char* where) {
  for (const auto& p : points)
    if (p.size() != n) throw_domain(std::string(where) + ": dimension mismatch");
}

}  // namespace

bool point_lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polytope convex_hull(const std::vector<Point>& points) {
  require_domain(!points.empty(), "convex_hull: empty point set");
  const size_t n = points[0].size();
  require_domain(n >= 1, "convex_hull: ambient dimension must be >= 1");
  check_common_dimension(points, n, "convex_hull");

  std::vector<Point> pts = points;
  std::sort(pts.begin(), pts.end(), point_lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope out;
  out.dim = static_cast<int>(n);
  if (pts.size() == 1) {
    out.vertices = std::move(pts);
    return out;
  }

  std::vector<Point> reduced;
  const size_t d = affine_reduce(pts, &reduced);
  std::vector<size_t> vertex_ids;
  if (d == 1) {
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < reduced.size(); ++i) {
      if (reduced[i][0] < reduced[lo][0]) lo = i;
      if (reduced[i][0] > reduced[hi][0]) hi = i;
    }
    vertex_ids = {lo, hi};
  } else {
    vertex_ids = full_dim_hull(reduced, d).vertex_ids;
  }
  for (size_t id : vertex_ids) out.vertices.push_back(pts[id]);
  std::sort(out.vertices.begin(), out.vertices.end(), point_lex_less);
  return out;
}

Rational volume(const Polytope& p) {
  const size_t n = static_cast<size_t>(p.dim);
  require_domain(n >= 1 && !p.vertices.empty(), "volume: empty or zero-dimensional polytope");
  check_common_dimension(p.vertices, n, "volume");
  std::vector<Point> pts = p.vertices;
  std::sort(pts.begin(), pts.end(), point_lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= n) return Rational(0);
  if (affine_reduce(pts, nullptr) < n) return Rational(0);

  if (n == 1) return pts.back()[0] - pts.front()[0];

  const FullDimHull hull = full_dim_hull(pts, n);
  const Point& v0 = pts[0];
  Rational total(0);

  if (n <= 3) {
    for (const auto& f : hull.facets) {
      RMatrix mat(n, std::vector<Rational>(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) mat[i][j] = pts[f.pts[i]][j] - v0[j];
      total += abs(rational_det(std::move(mat)));
    }
    return total / factorial(n);
  }

  // n == 4: facets are flat 3-polytopes; triangulate each one recursively and
  // cone the tetrahedra from the lexicographic first vertex.  Facets through
  // v0 contribute zero (their cones are flat) and are skipped outright.
  for (const auto& f : hull.facets) {
    if (std::find(f.pts.begin(), f.pts.end(), size_t{0}) != f.pts.end()) continue;
    std::vector<Point> fp;
    for (size_t id : f.pts) fp.push_back(pts[id]);
    std::vector<Point> reduced3;
    const size_t fd = affine_reduce(fp, &reduced3);
    require_invariant(fd == 3, "volume: facet of a 4-polytope must be 3-dimensional");
    const FullDimHull h3 = incremental_hull(reduced3, 3);
    // Cone the facet's triangles from its first point; degenerate cones
    // vanish through a zero determinant.
    for (const auto& tri : h3.facets) {
      const Point* tetra[4] = {&fp[0], &fp[tri.pts[0]], &fp[tri.pts[1]], &fp[tri.pts[2]]};
      RMatrix mat(4, std::vector<Rational>(4));
      for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) mat[i][j] = (*tetra[i])[j] - v0[j];
      total += abs(rational_det(std::move(mat)));
    }
  }
  return total / factorial(n);
}

Polytope translate(const Polytope& p, const Point& t) {
  require_domain(t.size() == static_cast<size_t>(p.dim), "translate: dimension mismatch");
  Polytope out = p;
  for (auto& v : out.vertices)
    for (size_t j = 0; j < t.size(); ++j) v[j] += t[j];
  return out;  // lex order is translation-invariant
}

Polytope dilate(const Polytope& p, const Rational& t) {
  require_domain(t >= 0, "dilate: negative factor");
  std::vector<Point> scaled = p.vertices;
  for (auto& v : scaled)
    for (auto& c : v) c *= t;
  Polytope out = convex_hull(scaled);  // collapses everything when t == 0
  require_invariant(out.dim == p.dim, "dilate: dimension changed");
  return out;
}

Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  require_domain(a.dim == b.dim, "minkowski_sum: dimension mismatch");
  require_domain(!a.vertices.empty() && !b.vertices.empty(), "minkowski_sum: empty polytope");
  std::vector<Point> sums;
  sums.reserve(a.vertices.size() * b.vertices.size());
  for (const auto& u : a.vertices)
    for (const auto& v : b.vertices) {
      Point s(u.size());
      for (size_t j = 0; j < u.size(); ++j) s[j] = u[j] + v[j];
      sums.push_back(std::move(s));
    }
  return convex_hull(sums);
}

Rational mixed_volume(const std::vector<Polytope>& bodies) {
  require_domain(!bodies.empty(), "mixed_volume: no bodies");
  const int n = bodies[0].dim;
  require_domain(static_cast<int>(bodies.size()) == n,
                 "mixed_volume: need exactly n bodies in R^n");
  for (const auto& b : bodies) {
    require_domain(b.dim == n, "mixed_volume: dimension mismatch");
    require_domain(!b.vertices.empty(), "mixed_volume: empty polytope");
  }
  Rational acc(0);
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    Polytope sum;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      sum = first ? bodies[static_cast<size_t>(i)]
                  : minkowski_sum(sum, bodies[static_cast<size_t>(i)]);
      first = false;
    }
    const int missing = n - std::popcount(mask);
    const Rational v = volume(sum);
    acc += (missing % 2 == 0) ? v : -v;
  }
  return acc / factorial(static_cast<size_t>(n));
}

Rational support_eval(const Polytope& p, const std::vector<Rational>& y) {
  require_domain(y.size() == static_cast<size_t>(p.dim), "support_eval: dimension mismatch");
  require_domain(!p.vertices.empty(), "support_eval: empty polytope");
  Rational best = dot(y, p.vertices[0]);
  for (size_t i = 1; i < p.vertices.size(); ++i) best = std::max(best, dot(y, p.vertices[i]));
  return best;
}

bool in_convex_hull(const std::vector<Point>& points, const Point& x) {
  require_domain(!points.empty(), "in_convex_hull: empty point set");
  const size_t n = points[0].size();
  check_common_dimension(points, n, "in_convex_hull");
  require_domain(x.size() == n, "in_convex_hull: dimension mismatch");
  const size_t m = points.size();
  // Variables: barycentric weights.  sum_i w_i p_i = x, sum_i w_i = 1, w >= 0.
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (size_t r = 0; r < n; ++r) {
    std::vector<Rational> row(m);
    for (size_t i = 0; i < m; ++i) row[i] = points[i][r];
    A.push_back(row);
    b.push_back(x[r]);
    for (auto& c : row) c = -c;
    A.push_back(std::move(row));
    b.push_back(-x[r]);
  }
  A.emplace_back(m, Rational(1));
  b.emplace_back(1);
  A.emplace_back(m, Rational(-1));
  b.emplace_back(-1);
  for (size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(m, Rational(0));
    row[i] = Rational(-1);
    A.push_back(std::move(row));
    b.emplace_back(0);
  }
  return lp_feasible(A, b);
}

}  // namespace maval
