#include "maval/linalg.hpp"

#include <algorithm>

namespace maval {

SpanBuilder::Reduction SpanBuilder::reduce(const Polynomial& p) const {
  ensure_same_registry(reg_, p.registry(), "SpanBuilder::reduce");
  Reduction out{p, std::vector<GaussianRational>(inserted_, GaussianRational(0))};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& term : out.remainder.terms()) {
      auto it = pivots_.find(term.first);
      if (it == pivots_.end()) continue;
      // Copy the coefficient: the subtraction below erases this map node.
      const GaussianRational c = term.second;
      const Row& row = rows_[it->second];
      for (size_t i = 0; i < row.coords.size(); ++i) out.combination[i] += c * row.coords[i];
      Polynomial scaled = row.poly;
      scaled *= c;
      out.remainder -= scaled;
      changed = true;
      break;  // term map mutated; restart scan from the top
    }
  }
  return out;
}

bool SpanBuilder::insert(const Polynomial& p) {
  ensure_same_registry(reg_, p.registry(), "SpanBuilder::insert");
  Reduction red = reduce(p);
  size_t self = inserted_++;
  if (red.remainder.is_zero()) return false;

  auto [lead, lc] = red.remainder.leading_term();
  GaussianRational inv = GaussianRational(1) / lc;
  Row row;
  row.poly = red.remainder;
  row.poly *= inv;
  // row.poly = (p - sum comb_i gen_i) / lc  =>  coords = (e_self - comb) / lc
  row.coords.assign(inserted_, GaussianRational(0));
  for (size_t i = 0; i < red.combination.size(); ++i) row.coords[i] = -red.combination[i] * inv;
  row.coords[self] = inv;
  pivots_.emplace(lead, rows_.size());
  rows_.push_back(std::move(row));
  return true;
}

std::optional<std::vector<GaussianRational>> SpanBuilder::coordinates(const Polynomial& p) const {
  Reduction red = reduce(p);
  if (!red.remainder.is_zero()) return std::nullopt;
  red.combination.resize(inserted_, GaussianRational(0));
  return red.combination;
}

bool SpanBuilder::contains(const Polynomial& p) const { return reduce(p).remainder.is_zero(); }

std::vector<Polynomial> SpanBuilder::echelon_rows() const {
  std::vector<Polynomial> out;
  out.reserve(rows_.size());
  for (const auto& [pivot, idx] : pivots_) out.push_back(rows_[idx].poly);
  return out;
}

namespace {

// Row-echelon elimination in place; returns pivot (row, col) pairs.
std::vector<std::pair<size_t, size_t>> eliminate(Matrix& a) {
  std::vector<std::pair<size_t, size_t>> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && a[pr][c].is_zero()) ++pr;
    if (pr == rows) continue;
    std::swap(a[pr], a[r]);
    GaussianRational inv = GaussianRational(1) / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      GaussianRational f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back({r, c});
    ++r;
  }
  return pivots;
}

}  // namespace

size_t matrix_rank(Matrix a) { return eliminate(a).size(); }

std::optional<Matrix> solve_linear_multi(const Matrix& a, const Matrix& b) {
  size_t rows = a.size();
  size_t cols = rows == 0 ? 0 : a[0].size();
  size_t rhs = b.empty() ? 0 : b[0].size();
  if (b.size() != rows) throw_domain("solve_linear: rhs row count mismatch");

  Matrix aug(rows, std::vector<GaussianRational>(cols + rhs, GaussianRational(0)));
  for (size_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw_domain("solve_linear: ragged matrix");
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    for (size_t j = 0; j < rhs; ++j) aug[i][cols + j] = b[i][j];
  }
  auto pivots = eliminate(aug);
  // Inconsistent if a pivot landed in the rhs block.
  for (const auto& [r, c] : pivots)
    if (c >= cols) return std::nullopt;
  Matrix x(cols, std::vector<GaussianRational>(rhs, GaussianRational(0)));
  for (const auto& [r, c] : pivots)
    for (size_t j = 0; j < rhs; ++j) x[c][j] = aug[r][cols + j];
  return x;
}

std::optional<std::vector<GaussianRational>> solve_linear(const Matrix& a,
                                                          const std::vector<GaussianRational>& b) {
  Matrix bm(b.size(), std::vector<GaussianRational>(1, GaussianRational(0)));
  for (size_t i = 0; i < b.size(); ++i) bm[i][0] = b[i];
  auto x = solve_linear_multi(a, bm);
  if (!x) return std::nullopt;
  std::vector<GaussianRational> out(x->size(), GaussianRational(0));
  for (size_t i = 0; i < x->size(); ++i) out[i] = (*x)[i][0];
  return out;
}

std::optional<Matrix> invert_matrix(const Matrix& a) {
  size_t n = a.size();
  Matrix eye(n, std::vector<GaussianRational>(n, GaussianRational(0)));
  for (size_t i = 0; i < n; ++i) eye[i][i] = GaussianRational(1);
  auto x = solve_linear_multi(a, eye);
  if (!x) return std::nullopt;
  // Inversion also requires full column rank; solve_linear_multi zero-fills
  // free columns, so verify A * X == I.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      GaussianRational s(0);
      for (size_t l = 0; l < n; ++l) s += a[i][l] * (*x)[l][j];
      if (!(s == eye[i][j])) return std::nullopt;
    }
  return x;
}

}  // namespace maval
