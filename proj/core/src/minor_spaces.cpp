#include "maval/minor_spaces.hpp"

#include <string>

namespace maval {

Polynomial polynomial_determinant(const std::vector<std::vector<Polynomial>>& m) {
  size_t n = m.size();
  if (n == 0) throw_domain("determinant of empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw_domain("determinant: matrix not square");
  if (n == 1) return m[0][0];
  auto reg = m[0][0].registry();
  Polynomial det(reg);
  for (size_t i = 0; i < n; ++i) {
    if (m[i][0].is_zero()) continue;
    std::vector<std::vector<Polynomial>> sub;
    sub.reserve(n - 1);
    for (size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      sub.push_back(std::vector<Polynomial>(m[r].begin() + 1, m[r].end()));
    }
    Polynomial cof = m[i][0] * polynomial_determinant(sub);
    if (i % 2 == 1) cof = -cof;
    det += cof;
  }
  return det;
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  if (k == 0) out.assign(1, {});
  return out;
}

namespace {

// Resolves a matrix entry by its row/column tags, independent of the stem the
// registry was created with.
uint32_t matrix_var(const VariableRegistry::Ptr& reg, int row, int col) {
  for (uint32_t idx : reg->column(col))
    if (reg->var(idx).row == row) return idx;
  throw_domain("matrix variable (" + std::to_string(row) + "," + std::to_string(col) +
               ") not present in registry");
}

}  // namespace

std::vector<Polynomial> k_minors(const VariableRegistry::Ptr& reg, int n, int k) {
  if (n < 1) throw_domain("k_minors: need n >= 1");
  if (k < 0 || k > n) throw_domain("k_minors: need 0 <= k <= n");
  std::vector<Polynomial> out;
  if (k == 0) {
    out.push_back(Polynomial::constant(reg, GaussianRational(1)));
    return out;
  }
  for (const auto& rows : subsets_of_size(n, k)) {
    std::vector<std::vector<Polynomial>> sub(k, std::vector<Polynomial>());
    for (int i = 0; i < k; ++i)
      for (int j = 1; j <= k; ++j)
        sub[i].push_back(Polynomial::variable(reg, matrix_var(reg, rows[i] + 1, j)));
    out.push_back(polynomial_determinant(sub));
  }
  return out;
}

std::vector<Polynomial> k_minors(int n, int k) {
  auto reg = VariableRegistry::matrix(n, std::max(k, 1));
  return k_minors(reg, n, k);
}

MinorBasis squared_minor_basis(const VariableRegistry::Ptr& reg, int n, int k) {
  MinorBasis out;
  out.n = n;
  out.k = k;
  out.registry = reg;
  auto minors = k_minors(reg, n, k);
  SpanBuilder span(reg);
  for (size_t i = 0; i < minors.size(); ++i)
    for (size_t j = i; j < minors.size(); ++j) {
      Polynomial prod = minors[i] * minors[j];
      if (span.insert(prod)) out.generators.push_back(std::move(prod));
    }
  out.dimension = span.rank();
  require_invariant(out.dimension == out.generators.size(),
                    "squared_minor_basis: generator/rank bookkeeping");
  return out;
}

MinorBasis squared_minor_basis(int n, int k) {
  auto reg = VariableRegistry::matrix(n, std::max(k, 1));
  return squared_minor_basis(reg, n, k);
}

VariableRegistry::Ptr hessian_registry(int n) {
  if (n < 1) throw_domain("hessian_registry: need n >= 1");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      names.push_back("s_" + std::to_string(i) + "_" + std::to_string(j));
  return VariableRegistry::scalars(names);
}

uint32_t hessian_var(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n) throw_domain("hessian_var: index out of range");
  // position of (i,j), i<=j, in row-major upper-triangular order
  int idx = 0;
  for (int r = 1; r < i; ++r) idx += n - r + 1;
  idx += j - i;
  return static_cast<uint32_t>(idx);
}

HessianMinorSpace hessian_minor_space(int n) {
  HessianMinorSpace out;
  out.n = n;
  out.registry = hessian_registry(n);
  SpanBuilder span(out.registry);
  out.by_minor_size.resize(static_cast<size_t>(n) + 1);

  auto entry = [&](int i, int j) {
    return Polynomial::variable(out.registry, hessian_var(n, i, j));
  };

  for (int k = 0; k <= n; ++k) {
    if (k == 0) {
      Polynomial one = Polynomial::constant(out.registry, GaussianRational(1));
      span.insert(one);
      out.generators.push_back(one);
      out.by_minor_size[0].push_back(one);
      continue;
    }
    for (const auto& rows : subsets_of_size(n, k))
      for (const auto& cols : subsets_of_size(n, k)) {
        std::vector<std::vector<Polynomial>> sub(k);
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) sub[a].push_back(entry(rows[a] + 1, cols[b] + 1));
        Polynomial minor = polynomial_determinant(sub);
        if (span.insert(minor)) {
          out.generators.push_back(minor);
          out.by_minor_size[static_cast<size_t>(k)].push_back(std::move(minor));
        }
      }
  }
  out.dimension = span.rank();
  return out;
}

Polynomial gram_determinant(const VariableRegistry::Ptr& reg, int n, int k) {
  if (k < 1 || k > n) throw_domain("gram_determinant: need 1 <= k <= n");
  std::vector<std::vector<Polynomial>> g(k, std::vector<Polynomial>());
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      Polynomial dot(reg);
      for (int r = 1; r <= n; ++r) {
        dot += Polynomial::variable(reg, matrix_var(reg, r, i)) *
               Polynomial::variable(reg, matrix_var(reg, r, j));
      }
      g[i - 1].push_back(std::move(dot));
    }
  return polynomial_determinant(g);
}

Polynomial gram_determinant(int n, int k) {
  auto reg = VariableRegistry::matrix(n, std::max(k, 1));
  return gram_determinant(reg, n, k);
}

}  // namespace maval
