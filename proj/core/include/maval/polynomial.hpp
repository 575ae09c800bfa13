#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "maval/rational.hpp"
#include "maval/varset.hpp"

namespace maval {

// Sparse multivariate polynomial over Q(i), terms kept in descending
// lexicographic order so begin() is the leading term.  Zero coefficients are
// never stored.
class Polynomial {
public:
  using TermMap = std::map<Monomial, GaussianRational, LexGreater>;

  Polynomial() = default;
  explicit Polynomial(VariableRegistry::Ptr reg) : reg_(std::move(reg)) {}

  static Polynomial zero(VariableRegistry::Ptr reg) { return Polynomial(std::move(reg)); }
  static Polynomial constant(VariableRegistry::Ptr reg, GaussianRational c);
  static Polynomial variable(VariableRegistry::Ptr reg, uint32_t idx);
  static Polynomial term(VariableRegistry::Ptr reg, Monomial m, GaussianRational c);

  const VariableRegistry::Ptr& registry() const { return reg_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t num_terms() const { return terms_.size(); }

  GaussianRational coefficient(const Monomial& m) const;
  // Leading term under lex order; throws on the zero polynomial.
  std::pair<Monomial, GaussianRational> leading_term() const;

  uint32_t total_degree() const;  // 0 for the zero polynomial
  uint32_t degree_in(uint32_t idx) const;
  // Sum of exponents over all variables tagged with matrix column `col`.
  uint32_t degree_in_column(int col) const;
  bool is_homogeneous() const;
  // True if every term has the same degree in each variable column
  // (column-wise multi-homogeneous).
  bool is_column_homogeneous() const;
  // True if only variables from columns in [1, k] (by registry tag) occur.
  bool uses_only_columns(int lo, int hi) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator*(const Polynomial& o) const;
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial& operator*=(const GaussianRational& c);
  Polynomial pow(uint32_t e) const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial p, const GaussianRational& c) { return p *= c; }
  friend Polynomial operator*(const GaussianRational& c, Polynomial p) { return p *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial differentiate(uint32_t idx) const;

  // Substitutes images[i] for variable i; all images must share one target
  // registry.  Composition (p o g) o h == p o (g o h) holds exactly.
  Polynomial substitute(const std::vector<Polynomial>& images) const;
  // Convenience: images given as a dense matrix of coefficients,
  // image(var i) = sum_j coeffs[i][j] * target var j.  Requires square use of
  // registries of equal size when target is the same registry.
  Polynomial substitute_linear(const VariableRegistry::Ptr& target,
                               const std::vector<std::vector<GaussianRational>>& coeffs) const;

  GaussianRational evaluate(std::span<const GaussianRational> point) const;
  std::complex<double> evaluate(std::span<const std::complex<double>> point) const;
  double evaluate_real(std::span<const double> point) const;

  // Canonical text form, e.g. "2*w_1_1^2*z_1 - 3/7*w_2_1 + (0,1)*z_2".
  // parse(to_string(p)) reproduces p bit-exactly.
  std::string to_string() const;
  static Polynomial parse(const VariableRegistry::Ptr& reg, std::string_view text);

  void add_term(const Monomial& m, const GaussianRational& c);  // accumulate, drop zeros

private:
  void check_reg() const {
    if (!reg_) throw_domain("polynomial without a variable registry");
  }

  VariableRegistry::Ptr reg_;
  TermMap terms_;
};

}  // namespace maval
