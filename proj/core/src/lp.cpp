#include "maval/lp.hpp"

#include <algorithm>

#include "maval/error.hpp"

namespace maval {

namespace {

// Dense tableau simplex over exact rationals.  Columns: x+ (n), x- (n),
// slacks (m), artificials (added as needed), then the rhs column.
class Simplex {
public:
  Simplex(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b, size_t n)
      : n_(n), m_(A.size()) {
    ncols_ = 2 * n_ + m_;
    rows_.assign(m_, {});
    basis_.assign(m_, 0);
    for (size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw_domain("lp: ragged constraint matrix");
      auto& row = rows_[i];
      row.assign(ncols_ + 1, Rational(0));
      for (size_t j = 0; j < n_; ++j) {
        row[j] = A[i][j];
        row[n_ + j] = -A[i][j];
      }
      row[2 * n_ + i] = 1;  // slack
      row[ncols_] = b[i];
      basis_[i] = 2 * n_ + i;
    }
  }

  // Make all rhs entries nonnegative, adding artificial columns where needed.
  // Returns indices of artificial columns.
  std::vector<size_t> add_artificials() {
    std::vector<size_t> arts;
    for (size_t i = 0; i < m_; ++i) {
      if (rows_[i][ncols_] >= 0) continue;
      for (auto& v : rows_[i]) v = -v;
      arts.push_back(grow_column());
      rows_[i][ncols_ - 1] = 1;  // the freshly grown column (before rhs)
      basis_[i] = ncols_ - 1;
    }
    return arts;
  }

  // Maximize the objective with coefficients obj (size = #columns, no rhs
  // entry).  Columns listed in `banned` are never chosen as entering.
  // Returns false if unbounded.
  bool maximize(std::vector<Rational> obj, const std::vector<bool>& banned) {
    obj.resize(ncols_ + 1, Rational(0));
    // Price out basic variables so reduced costs are consistent.
    for (size_t i = 0; i < m_; ++i) {
      if (obj[basis_[i]] == 0) continue;
      Rational f = obj[basis_[i]];
      for (size_t j = 0; j <= ncols_; ++j) obj[j] -= f * rows_[i][j];
    }
    while (true) {
      // Bland: entering column = smallest index with positive reduced cost.
      size_t enter = ncols_;
      for (size_t j = 0; j < ncols_; ++j) {
        if (j < banned.size() && banned[j]) continue;
        if (obj[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == ncols_) {
        objective_ = -obj[ncols_];  // priced-out rhs = -current value
        return true;
      }
      // Ratio test; ties by smallest basis index (Bland).
      size_t leave = m_;
      Rational best(0);
      for (size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rational ratio = rows_[i][ncols_] / rows_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter, &obj);
    }
  }

  // Pivot basic artificials out, dropping rows that became redundant.
  void purge_artificials(const std::vector<size_t>& arts) {
    std::vector<bool> is_art(ncols_, false);
    for (size_t a : arts) is_art[a] = true;
    for (size_t i = 0; i < m_;) {
      if (!is_art[basis_[i]]) {
        ++i;
        continue;
      }
      size_t piv = ncols_;
      for (size_t j = 0; j < ncols_; ++j) {
        if (is_art[j]) continue;
        if (rows_[i][j] != 0) {
          piv = j;
          break;
        }
      }
      if (piv == ncols_) {
        rows_.erase(rows_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
        --m_;
      } else {
        pivot(i, piv, nullptr);
        ++i;
      }
    }
  }

  Rational objective() const { return objective_; }
  size_t columns() const { return ncols_; }

  Rational variable_value(size_t col) const {
    for (size_t i = 0; i < m_; ++i)
      if (basis_[i] == col) return rows_[i][ncols_];
    return Rational(0);
  }

  std::vector<Rational> solution(size_t n) const {
    std::vector<Rational> x(n, Rational(0));
    for (size_t j = 0; j < n; ++j) x[j] = variable_value(j) - variable_value(n + j);
    return x;
  }

private:
  size_t grow_column() {
    for (auto& row : rows_) row.insert(row.end() - 1, Rational(0));
    ++ncols_;
    return ncols_ - 1;
  }

  void pivot(size_t r, size_t c, std::vector<Rational>* obj) {
    Rational inv = Rational(1) / rows_[r][c];
    for (auto& v : rows_[r]) v *= inv;
    for (size_t i = 0; i < m_; ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      Rational f = rows_[i][c];
      for (size_t j = 0; j <= ncols_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    if (obj && (*obj)[c] != 0) {
      Rational f = (*obj)[c];
      for (size_t j = 0; j <= ncols_; ++j) (*obj)[j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  size_t n_, m_, ncols_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<size_t> basis_;
  Rational objective_{0};
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                  const std::vector<Rational>& c) {
  if (A.size() != b.size()) throw_domain("lp: |A| != |b|");
  size_t n = c.size();
  for (const auto& row : A)
    if (row.size() != n) throw_domain("lp: constraint arity != objective arity");

  Simplex tab(A, b, n);
  auto arts = tab.add_artificials();
  if (!arts.empty()) {
    std::vector<Rational> phase1(tab.columns(), Rational(0));
    for (size_t a : arts) phase1[a] = -1;
    std::vector<bool> banned;  // nothing banned in phase 1
    bool ok = tab.maximize(phase1, banned);
    require_invariant(ok, "lp: phase 1 cannot be unbounded");
    if (tab.objective() != 0) return {LpStatus::infeasible, Rational(0), {}};
    tab.purge_artificials(arts);
  }

  std::vector<bool> banned(tab.columns(), false);
  for (size_t a : arts)
    if (a < banned.size()) banned[a] = true;
  std::vector<Rational> obj(tab.columns(), Rational(0));
  for (size_t j = 0; j < n; ++j) {
    obj[j] = c[j];
    obj[n + j] = -c[j];
  }
  if (!tab.maximize(obj, banned)) return {LpStatus::unbounded, Rational(0), {}};
  return {LpStatus::optimal, tab.objective(), tab.solution(n)};
}

bool lp_feasible(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b) {
  std::vector<Rational> c(A.empty() ? 0 : A[0].size(), Rational(0));
  return solve_lp(A, b, c).status == LpStatus::optimal;
}

std::optional<Rational> strict_feasibility_margin(const std::vector<std::vector<Rational>>& A,
                                                  const std::vector<Rational>& b,
                                                  const Rational& cap,
                                                  std::vector<Rational>* witness) {
  // Variables (x, eps): maximize eps subject to A x + eps <= b, eps <= cap.
  size_t n = A.empty() ? 0 : A[0].size();
  std::vector<std::vector<Rational>> A2;
  std::vector<Rational> b2;
  for (size_t i = 0; i < A.size(); ++i) {
    auto row = A[i];
    row.push_back(Rational(1));
    A2.push_back(std::move(row));
    b2.push_back(b[i]);
  }
  std::vector<Rational> cap_row(n, Rational(0));
  cap_row.push_back(Rational(1));
  A2.push_back(std::move(cap_row));
  b2.push_back(cap);

  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  auto res = solve_lp(A2, b2, c);
  if (res.status != LpStatus::optimal) return std::nullopt;
  if (witness) witness->assign(res.x.begin(), res.x.begin() + static_cast<long>(n));
  return res.value;
}

}  // namespace maval
