#include "maval/varset.hpp"

#include <algorithm>

namespace maval {

VariableRegistry::Ptr VariableRegistry::create(std::vector<Variable> vars) {
  auto reg = std::make_shared<VariableRegistry>();
  reg->vars_ = std::move(vars);
  for (uint32_t i = 0; i < reg->vars_.size(); ++i) {
    const auto& v = reg->vars_[i];
    if (v.name.empty()) throw_schema("variable with empty name");
    if (!reg->by_name_.emplace(v.name, i).second)
      throw_schema("duplicate variable name '" + v.name + "'");
  }
  return reg;
}

VariableRegistry::Ptr VariableRegistry::scalars(const std::vector<std::string>& names) {
  std::vector<Variable> vars;
  vars.reserve(names.size());
  for (const auto& n : names) vars.push_back({n, 0, 0});
  return create(std::move(vars));
}

VariableRegistry::Ptr VariableRegistry::matrix(int rows, int cols, const std::string& stem) {
  if (rows < 1 || cols < 1) throw_schema("matrix registry needs rows >= 1 and cols >= 1");
  std::vector<Variable> vars;
  vars.reserve(static_cast<size_t>(rows) * cols);
  for (int j = 1; j <= cols; ++j)
    for (int i = 1; i <= rows; ++i)
      vars.push_back({stem + "_" + std::to_string(i) + "_" + std::to_string(j), i, j});
  return create(std::move(vars));
}

std::optional<uint32_t> VariableRegistry::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

uint32_t VariableRegistry::require(const std::string& name) const {
  auto idx = index_of(name);
  if (!idx) throw_schema("unknown variable '" + name + "'");
  return *idx;
}

std::vector<uint32_t> VariableRegistry::column(int col) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].col == col) out.push_back(i);
  return out;
}

int VariableRegistry::max_col() const {
  int m = 0;
  for (const auto& v : vars_) m = std::max(m, v.col);
  return m;
}

bool VariableRegistry::same_as(const VariableRegistry& other) const {
  if (vars_.size() != other.vars_.size()) return false;
  for (size_t i = 0; i < vars_.size(); ++i) {
    const auto& a = vars_[i];
    const auto& b = other.vars_[i];
    if (a.name != b.name || a.row != b.row || a.col != b.col) return false;
  }
  return true;
}

void ensure_same_registry(const VariableRegistry::Ptr& a, const VariableRegistry::Ptr& b,
                          const char* where) {
  if (a == b) return;
  if (!a || !b || !a->same_as(*b))
    throw_domain(std::string(where) + ": operands use different variable registries");
}

Monomial Monomial::var(uint32_t idx, uint32_t exp) {
  Monomial m;
  if (exp > 0) m.entries_.push_back({idx, exp});
  return m;
}

Monomial Monomial::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  Monomial m;
  for (const auto& [idx, exp] : entries) {
    if (exp == 0) continue;
    if (!m.entries_.empty() && m.entries_.back().first == idx)
      m.entries_.back().second += exp;
    else
      m.entries_.push_back({idx, exp});
  }
  return m;
}

uint32_t Monomial::degree() const {
  uint32_t d = 0;
  for (const auto& [idx, exp] : entries_) d += exp;
  return d;
}

uint32_t Monomial::exponent(uint32_t idx) const {
  for (const auto& [i, e] : entries_)
    if (i == idx) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial out;
  out.entries_.reserve(entries_.size() + o.entries_.size());
  size_t a = 0, b = 0;
  while (a < entries_.size() || b < o.entries_.size()) {
    if (b == o.entries_.size() || (a < entries_.size() && entries_[a].first < o.entries_[b].first)) {
      out.entries_.push_back(entries_[a++]);
    } else if (a == entries_.size() || o.entries_[b].first < entries_[a].first) {
      out.entries_.push_back(o.entries_[b++]);
    } else {
      out.entries_.push_back({entries_[a].first, entries_[a].second + o.entries_[b].second});
      ++a;
      ++b;
    }
  }
  return out;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& o) const {
  Monomial out;
  size_t a = 0;
  for (const auto& [idx, exp] : o.entries_) {
    while (a < entries_.size() && entries_[a].first < idx) {
      out.entries_.push_back(entries_[a++]);
    }
    if (a == entries_.size() || entries_[a].first != idx || entries_[a].second < exp)
      return std::nullopt;
    if (entries_[a].second > exp) out.entries_.push_back({idx, entries_[a].second - exp});
    ++a;
  }
  while (a < entries_.size()) out.entries_.push_back(entries_[a++]);
  return out;
}

int Monomial::lex_cmp(const Monomial& a, const Monomial& b) {
  // Walk ascending variable indices; the first index where exponents differ
  // decides (larger exponent on the more significant variable wins).
  size_t i = 0, j = 0;
  while (i < a.entries_.size() && j < b.entries_.size()) {
    const auto& [ia, ea] = a.entries_[i];
    const auto& [ib, eb] = b.entries_[j];
    if (ia < ib) return 1;   // a has positive exponent where b has zero
    if (ib < ia) return -1;  // b wins at the more significant index
    if (ea != eb) return ea > eb ? 1 : -1;
    ++i;
    ++j;
  }
  if (i < a.entries_.size()) return 1;
  if (j < b.entries_.size()) return -1;
  return 0;
}

}  // namespace maval
