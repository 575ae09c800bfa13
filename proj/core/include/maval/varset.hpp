#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maval/error.hpp"

namespace maval {

// A named variable, optionally tagged with a 1-based matrix position.
struct Variable {
  std::string name;
  int row = 0;  // 0 = untagged
  int col = 0;
};

// Ordered set of variables.  The order is fixed at creation and defines the
// lexicographic monomial order: index 0 is the largest variable.
class VariableRegistry {
public:
  using Ptr = std::shared_ptr<const VariableRegistry>;

  static Ptr create(std::vector<Variable> vars);
  // Plain named variables, no matrix tags.
  static Ptr scalars(const std::vector<std::string>& names);
  // Column-major matrix block w_1_1,...,w_rows_1, w_1_2,... with tags.
  static Ptr matrix(int rows, int cols, const std::string& stem = "w");

  size_t size() const { return vars_.size(); }
  const Variable& var(uint32_t idx) const { return vars_.at(idx); }
  const std::string& name(uint32_t idx) const { return vars_.at(idx).name; }
  std::optional<uint32_t> index_of(const std::string& name) const;
  uint32_t require(const std::string& name) const;

  // Indices of all variables tagged with the given matrix column.
  std::vector<uint32_t> column(int col) const;
  int max_col() const;

  bool same_as(const VariableRegistry& other) const;

private:
  std::vector<Variable> vars_;
  std::map<std::string, uint32_t> by_name_;
};

void ensure_same_registry(const VariableRegistry::Ptr& a, const VariableRegistry::Ptr& b,
                          const char* where);

// Sparse exponent vector: (variable index, exponent>0) sorted by index.
class Monomial {
public:
  using Entry = std::pair<uint32_t, uint32_t>;

  Monomial() = default;
  static Monomial one() { return {}; }
  static Monomial var(uint32_t idx, uint32_t exp = 1);
  static Monomial from_entries(std::vector<Entry> entries);  // validates & sorts

  bool is_one() const { return entries_.empty(); }
  uint32_t degree() const;
  uint32_t exponent(uint32_t idx) const;
  const std::vector<Entry>& entries() const { return entries_; }

  Monomial operator*(const Monomial& o) const;
  // Exact division: nullopt unless o divides *this.
  std::optional<Monomial> divided_by(const Monomial& o) const;

  // Lexicographic comparison with variable 0 most significant.
  // Returns <0 if a < b, 0 if equal, >0 if a > b.
  static int lex_cmp(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.entries_ == b.entries_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

private:
  std::vector<Entry> entries_;
};

// Comparator placing the lex-largest monomial first.
struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::lex_cmp(a, b) > 0; }
};

}  // namespace maval
