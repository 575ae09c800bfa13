#include "maval/polynomial.hpp"

#include <algorithm>
#include <cctype>

namespace maval {

Polynomial Polynomial::constant(VariableRegistry::Ptr reg, GaussianRational c) {
  Polynomial p(std::move(reg));
  p.add_term(Monomial::one(), c);
  return p;
}

Polynomial Polynomial::variable(VariableRegistry::Ptr reg, uint32_t idx) {
  if (idx >= reg->size()) throw_domain("variable index out of range");
  Polynomial p(std::move(reg));
  p.add_term(Monomial::var(idx), GaussianRational(1));
  return p;
}

Polynomial Polynomial::term(VariableRegistry::Ptr reg, Monomial m, GaussianRational c) {
  Polynomial p(std::move(reg));
  p.add_term(m, c);
  return p;
}

GaussianRational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? GaussianRational(0) : it->second;
}

std::pair<Monomial, GaussianRational> Polynomial::leading_term() const {
  if (terms_.empty()) throw_domain("leading term of the zero polynomial");
  return *terms_.begin();
}

uint32_t Polynomial::total_degree() const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

uint32_t Polynomial::degree_in(uint32_t idx) const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(idx));
  return d;
}

uint32_t Polynomial::degree_in_column(int col) const {
  check_reg();
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) {
    uint32_t t = 0;
    for (const auto& [idx, exp] : m.entries())
      if (reg_->var(idx).col == col) t += exp;
    d = std::max(d, t);
  }
  return d;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  uint32_t d = terms_.begin()->first.degree();
  for (const auto& [m, c] : terms_)
    if (m.degree() != d) return false;
  return true;
}

bool Polynomial::is_column_homogeneous() const {
  check_reg();
  if (terms_.empty()) return true;
  int cols = reg_->max_col();
  for (int col = 1; col <= cols; ++col) {
    bool first = true;
    uint32_t d0 = 0;
    for (const auto& [m, c] : terms_) {
      uint32_t t = 0;
      for (const auto& [idx, exp] : m.entries())
        if (reg_->var(idx).col == col) t += exp;
      if (first) {
        d0 = t;
        first = false;
      } else if (t != d0) {
        return false;
      }
    }
  }
  return true;
}

bool Polynomial::uses_only_columns(int lo, int hi) const {
  check_reg();
  for (const auto& [m, c] : terms_)
    for (const auto& [idx, exp] : m.entries()) {
      int col = reg_->var(idx).col;
      if (col < lo || col > hi) return false;
    }
  return true;
}

void Polynomial::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out(reg_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  ensure_same_registry(reg_, o.reg_, "polynomial +");
  if (this == &o) {  // adding a map to itself mutates nodes being iterated
    for (auto& [m, c] : terms_) c = c * GaussianRational(2);
    return *this;
  }
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  ensure_same_registry(reg_, o.reg_, "polynomial -");
  if (this == &o) {
    terms_.clear();
    return *this;
  }
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  ensure_same_registry(reg_, o.reg_, "polynomial *");
  Polynomial out(reg_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial& Polynomial::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial Polynomial::pow(uint32_t e) const {
  check_reg();
  Polynomial out = constant(reg_, GaussianRational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) out = out * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.reg_ != b.reg_) {
    if (!a.reg_ || !b.reg_ || !a.reg_->same_as(*b.reg_)) return false;
  }
  return a.terms_ == b.terms_;
}

Polynomial Polynomial::differentiate(uint32_t idx) const {
  check_reg();
  Polynomial out(reg_);
  for (const auto& [m, c] : terms_) {
    uint32_t e = m.exponent(idx);
    if (e == 0) continue;
    auto reduced = m.divided_by(Monomial::var(idx));
    out.add_term(*reduced, c * GaussianRational(Rational(e)));
  }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  check_reg();
  if (images.size() != reg_->size())
    throw_domain("substitute: need one image per variable (" + std::to_string(reg_->size()) +
                 " expected, " + std::to_string(images.size()) + " given)");
  VariableRegistry::Ptr target;
  for (const auto& img : images) {
    if (!target) {
      target = img.registry();
    } else {
      ensure_same_registry(target, img.registry(), "substitute images");
    }
  }
  if (!target) throw_domain("substitute: registry has no variables");

  // Cache powers of each image to avoid recomputation across terms.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](uint32_t idx, uint32_t e) -> const Polynomial& {
    auto& cache = powers[idx];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, GaussianRational(1)));
    while (cache.size() <= e) cache.push_back(cache.back() * images[idx]);
    return cache[e];
  };

  Polynomial out(target);
  for (const auto& [m, c] : terms_) {
    Polynomial term = Polynomial::constant(target, c);
    for (const auto& [idx, exp] : m.entries()) term = term * power(idx, exp);
    out += term;
  }
  return out;
}

Polynomial Polynomial::substitute_linear(
    const VariableRegistry::Ptr& target,
    const std::vector<std::vector<GaussianRational>>& coeffs) const {
  check_reg();
  if (coeffs.size() != reg_->size()) throw_domain("substitute_linear: one row per source variable");
  std::vector<Polynomial> images;
  images.reserve(coeffs.size());
  for (const auto& row : coeffs) {
    if (row.size() != target->size())
      throw_domain("substitute_linear: one column per target variable");
    Polynomial img(target);
    for (uint32_t j = 0; j < row.size(); ++j) img.add_term(Monomial::var(j), row[j]);
    images.push_back(std::move(img));
  }
  return substitute(images);
}

namespace {

template <typename Value>
Value evaluate_impl(const Polynomial& p, std::span<const Value> point, const Value& one) {
  if (point.size() != p.registry()->size())
    throw_domain("evaluate: point dimension does not match registry");
  std::vector<std::vector<Value>> powers(point.size());
  auto power = [&](uint32_t idx, uint32_t e) -> const Value& {
    auto& cache = powers[idx];
    if (cache.empty()) cache.push_back(one);
    while (cache.size() <= e) cache.push_back(cache.back() * point[idx]);
    return cache[e];
  };
  Value acc = one - one;  // zero of the value type
  for (const auto& [m, c] : p.terms()) {
    Value term = one;
    for (const auto& [idx, exp] : m.entries()) term = term * power(idx, exp);
    if constexpr (std::is_same_v<Value, GaussianRational>) {
      acc += term * c;
    } else {
      acc += term * c.to_complex();
    }
  }
  return acc;
}

}  // namespace

GaussianRational Polynomial::evaluate(std::span<const GaussianRational> point) const {
  check_reg();
  return evaluate_impl<GaussianRational>(*this, point, GaussianRational(1));
}

std::complex<double> Polynomial::evaluate(std::span<const std::complex<double>> point) const {
  check_reg();
  return evaluate_impl<std::complex<double>>(*this, point, {1.0, 0.0});
}

double Polynomial::evaluate_real(std::span<const double> point) const {
  check_reg();
  std::vector<std::complex<double>> cpoint(point.begin(), point.end());
  return evaluate(std::span<const std::complex<double>>(cpoint)).real();
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

std::string Polynomial::to_string() const {
  check_reg();
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (const auto& [idx, exp] : m.entries()) {
      if (!mono.empty()) mono += "*";
      mono += reg_->name(idx);
      if (exp > 1) mono += "^" + std::to_string(exp);
    }
    std::string coef;
    bool negative = false;
    if (c.is_real()) {
      Rational mag = c.re < 0 ? Rational(-c.re) : c.re;
      negative = c.re < 0;
      if (!(mag == 1) || mono.empty()) coef = maval::to_string(mag);
    } else {
      coef = maval::to_string(c);  // "(a,b)" carries its own signs
    }
    if (first) {
      if (negative) out += "-";
      first = false;
    } else {
      out += negative ? " - " : " + ";
    }
    if (!coef.empty() && !mono.empty())
      out += coef + "*" + mono;
    else
      out += coef.empty() ? mono : coef;
  }
  return out;
}

namespace {

struct Lexer {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* ctx) {
    if (!accept(c))
      throw_schema(std::string("polynomial parse: expected '") + c + "' " + ctx + " at offset " +
                   std::to_string(pos));
  }
  // signed rational: [+-] digits [/ digits]
  Rational rational() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
      ++pos;
    if (pos == start) throw_schema("polynomial parse: expected number at offset " + std::to_string(pos));
    return parse_rational(text.substr(start, pos - start));
  }
  // unsigned integer
  uint32_t integer() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start)
      throw_schema("polynomial parse: expected integer at offset " + std::to_string(pos));
    uint32_t v = 0;
    for (size_t i = start; i < pos; ++i) v = v * 10 + static_cast<uint32_t>(text[i] - '0');
    return v;
  }
  std::string name() {
    skip_ws();
    size_t start = pos;
    auto head = [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; };
    auto tail = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (pos < text.size() && head(text[pos])) {
      ++pos;
      while (pos < text.size() && tail(text[pos])) ++pos;
    }
    if (pos == start)
      throw_schema("polynomial parse: expected variable name at offset " + std::to_string(pos));
    return std::string(text.substr(start, pos - start));
  }
};

}  // namespace

Polynomial Polynomial::parse(const VariableRegistry::Ptr& reg, std::string_view text) {
  Lexer lex{text};
  Polynomial out(reg);
  bool first = true;
  while (!lex.eof()) {
    // sign
    GaussianRational sign(1);
    if (lex.accept('+')) {
    } else if (lex.accept('-')) {
      sign = GaussianRational(-1);
    } else if (!first) {
      throw_schema("polynomial parse: expected '+' or '-' between terms at offset " +
                   std::to_string(lex.pos));
    }
    first = false;
    // term: product of factors
    GaussianRational coef = sign;
    Monomial mono = Monomial::one();
    bool expect_factor = true;
    while (expect_factor) {
      char c = lex.peek();
      if (c == '(') {
        lex.expect('(', "opening complex literal");
        Rational re = lex.rational();
        lex.expect(',', "inside complex literal");
        Rational im = lex.rational();
        lex.expect(')', "closing complex literal");
        coef *= GaussianRational(std::move(re), std::move(im));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        coef *= GaussianRational(lex.rational());
      } else {
        std::string nm = lex.name();
        uint32_t idx = reg->require(nm);
        uint32_t exp = 1;
        if (lex.accept('^')) exp = lex.integer();
        mono = mono * Monomial::var(idx, exp);
      }
      expect_factor = lex.accept('*');
    }
    out.add_term(mono, coef);
  }
  return out;
}

}  // namespace maval
