#include "maval/rational.hpp"

#include "maval/error.hpp"

namespace maval {

Rational parse_rational(std::string_view text) {
  // Accepts optional sign, integer numerator, optional "/denominator".
  if (text.empty()) throw_schema("empty rational literal");
  size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') {
    neg = text[pos] == '-';
    ++pos;
  }
  auto read_digits = [&](std::string_view what) {
    size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw_schema("rational literal '" + std::string(text) + "': missing " + std::string(what));
    return std::string(text.substr(start, pos - start));
  };
  BigInt num(read_digits("numerator"));
  BigInt den(1);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = BigInt(read_digits("denominator"));
    if (den == 0) throw_schema("rational literal '" + std::string(text) + "': zero denominator");
  }
  if (pos != text.size()) throw_schema("rational literal '" + std::string(text) + "': trailing characters");
  Rational r = Rational(num) / Rational(den);  // division canonicalizes
  return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& r) { return r.str(); }

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw_domain("division of Gaussian rational by zero");
  Rational n2 = o.norm2();
  Rational nre = (re * o.re + im * o.im) / n2;
  Rational nim = (im * o.re - re * o.im) / n2;
  re = std::move(nre);
  im = std::move(nim);
  return *this;
}

std::string to_string(const GaussianRational& c) {
  if (c.is_real()) return to_string(c.re);
  return "(" + to_string(c.re) + "," + to_string(c.im) + ")";
}

}  // namespace maval
