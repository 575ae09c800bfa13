#include <complex>
#include <map>
#include <vector>

#include "doctest.h"
#include "maval/polynomial.hpp"
#include "test_util.hpp"

using namespace maval;

namespace {

// Independent multiplication oracle: dense exponent vectors in a plain map,
// sharing no code with Monomial/Polynomial arithmetic.
using DensePoly = std::map<std::vector<uint32_t>, GaussianRational>;

DensePoly to_dense(const Polynomial& p) {
  DensePoly out;
  for (const auto& [m, c] : p.terms()) {
    std::vector<uint32_t> exps(p.registry()->size(), 0);
    for (const auto& [idx, exp] : m.entries()) exps[idx] = exp;
    out[exps] = c;
  }
  return out;
}

DensePoly dense_multiply(const DensePoly& a, const DensePoly& b, size_t nvars) {
  DensePoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<uint32_t> e(nvars, 0);
      for (size_t i = 0; i < nvars; ++i) e[i] = ea[i] + eb[i];
      auto& c = out[e];
      c += ca * cb;
      if (c.is_zero()) out.erase(e);
    }
  return out;
}

VariableRegistry::Ptr mat21_registry() { return VariableRegistry::matrix(2, 1); }

}  // namespace

TEST_CASE("multiply: (w_1_1 + w_2_1)^2 expands by the binomial rule") {
  auto reg = mat21_registry();
  auto w11 = Polynomial::variable(reg, 0);
  auto w21 = Polynomial::variable(reg, 1);
  auto sq = (w11 + w21).pow(2);
  auto expected = Polynomial::parse(reg, "w_1_1^2 + 2*w_1_1*w_2_1 + w_2_1^2");
  CHECK(sq == expected);
}

TEST_CASE("differentiate: d(w_1_1^2 * z_1)/d w_1_1 = 2*w_1_1*z_1") {
  auto reg = VariableRegistry::scalars({"w_1_1", "z_1"});
  auto p = Polynomial::parse(reg, "w_1_1^2*z_1");
  CHECK(p.differentiate(0) == Polynomial::parse(reg, "2*w_1_1*z_1"));
}

TEST_CASE("substitute_linear implements the transpose action [g.P](w) = P(g^T w)") {
  auto reg = mat21_registry();
  auto p = Polynomial::parse(reg, "w_1_1^2 + w_1_1*w_2_1");
  // g swaps the two basis vectors; so does g^T.
  std::vector<std::vector<GaussianRational>> gt = {{0, 1}, {1, 0}};
  auto moved = p.substitute_linear(reg, gt);
  CHECK(moved == Polynomial::parse(reg, "w_2_1^2 + w_1_1*w_2_1"));
}

TEST_CASE("leading_term picks the lex-largest monomial (w_1_1 > w_2_1 > ...)") {
  auto reg = mat21_registry();
  auto p = Polynomial::parse(reg, "w_1_1^2*w_2_1 + w_1_1*w_2_1^2");
  auto [m, c] = p.leading_term();
  CHECK(m == Monomial::from_entries({{0, 2}, {1, 1}}));
  CHECK(c == GaussianRational(1));

  // Column-major order across a 2x2 matrix: w_1_1 > w_2_1 > w_1_2 > w_2_2.
  auto reg22 = VariableRegistry::matrix(2, 2);
  auto q = Polynomial::parse(reg22, "w_2_1^3 + w_1_2^5");
  CHECK(q.leading_term().first == Monomial::var(1, 3));
}

TEST_CASE("evaluate: exact path at rational points, float path agrees") {
  auto reg = mat21_registry();
  auto p = Polynomial::parse(reg, "w_1_1^2 + w_1_1*w_2_1");
  std::vector<GaussianRational> pt = {GaussianRational(Rational(1, 2)), GaussianRational(Rational(3))};
  CHECK(p.evaluate(pt) == GaussianRational(Rational(7, 4)));

  std::vector<std::complex<double>> fpt = {{0.5, 0.0}, {3.0, 0.0}};
  CHECK(std::abs(p.evaluate(fpt) - std::complex<double>(1.75, 0.0)) < 1e-12);
}

TEST_CASE("text format round-trips the documented example byte-for-byte") {
  auto reg = VariableRegistry::scalars({"w_1_1", "w_2_1", "z_1", "z_2"});
  const std::string text = "2*w_1_1^2*z_1 - 3/7*w_2_1 + (0,1)*z_2";
  auto p = Polynomial::parse(reg, text);
  CHECK(p.to_string() == text);
  CHECK(Polynomial::parse(reg, p.to_string()) == p);
}

TEST_CASE("parse rejects unknown variables and malformed input") {
  auto reg = mat21_registry();
  CHECK_THROWS_AS((void)Polynomial::parse(reg, "w_9_9 + 1"), error);
  CHECK_THROWS_AS((void)Polynomial::parse(reg, "2*"), error);
  CHECK_THROWS_AS((void)Polynomial::parse(reg, "(1,)"), error);
  CHECK_THROWS_AS((void)parse_rational("1/0"), error);
}

TEST_CASE("parse canonicalizes unreduced fractions") {
  auto reg = mat21_registry();
  auto p = Polynomial::parse(reg, "2/4*w_1_1");
  CHECK(p.to_string() == "1/2*w_1_1");
}

TEST_CASE("property: multiplication matches an independent dense oracle") {
  auto reg = VariableRegistry::scalars({"a", "b", "c"});
  testutil::Rng rng(20240817);
  for (int iter = 0; iter < 50; ++iter) {
    auto p = rng.polynomial(reg);
    auto q = rng.polynomial(reg);
    CHECK(to_dense(p * q) == dense_multiply(to_dense(p), to_dense(q), reg->size()));
  }
}

TEST_CASE("property: ring axioms on random samples") {
  auto reg = VariableRegistry::scalars({"a", "b", "c", "d"});
  testutil::Rng rng(7);
  for (int iter = 0; iter < 25; ++iter) {
    auto p = rng.polynomial(reg);
    auto q = rng.polynomial(reg);
    auto r = rng.polynomial(reg);
    CHECK(p + q == q + p);
    CHECK((p + q) + r == p + (q + r));
    CHECK(p * q == q * p);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p - p == Polynomial::zero(reg));
  }
}

TEST_CASE("property: lex order is a total order compatible with multiplication") {
  testutil::Rng rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    auto a = rng.monomial(4), b = rng.monomial(4), c = rng.monomial(4);
    int ab = Monomial::lex_cmp(a, b);
    CHECK(ab == -Monomial::lex_cmp(b, a));
    if (ab == 0) CHECK(a == b);
    // multiplicative monotonicity: a > b implies a*c > b*c
    if (ab > 0) CHECK(Monomial::lex_cmp(a * c, b * c) > 0);
    // transitivity spot check
    int bc = Monomial::lex_cmp(b, c);
    if (ab > 0 && bc > 0) CHECK(Monomial::lex_cmp(a, c) > 0);
  }
}

TEST_CASE("property: Leibniz rule for derivatives of products") {
  auto reg = VariableRegistry::scalars({"x", "y", "z"});
  testutil::Rng rng(1234);
  for (int iter = 0; iter < 25; ++iter) {
    auto p = rng.polynomial(reg);
    auto q = rng.polynomial(reg);
    uint32_t v = static_cast<uint32_t>(rng.integer(0, 2));
    CHECK((p * q).differentiate(v) == p.differentiate(v) * q + p * q.differentiate(v));
  }
}

TEST_CASE("property: substitution composes contravariantly") {
  auto reg = VariableRegistry::scalars({"x", "y"});
  testutil::Rng rng(555);
  for (int iter = 0; iter < 15; ++iter) {
    auto p = rng.polynomial(reg, 4, 2);
    // images of degree <= 1 to keep sizes modest
    std::vector<Polynomial> g, h;
    for (int i = 0; i < 2; ++i) g.push_back(rng.polynomial(reg, 2, 1));
    for (int i = 0; i < 2; ++i) h.push_back(rng.polynomial(reg, 2, 1));
    std::vector<Polynomial> gh;
    for (const auto& gi : g) gh.push_back(gi.substitute(h));
    CHECK(p.substitute(g).substitute(h) == p.substitute(gh));
  }
}

TEST_CASE("property: exact and float evaluation agree on random data") {
  auto reg = VariableRegistry::scalars({"x", "y", "z"});
  testutil::Rng rng(31337);
  for (int iter = 0; iter < 25; ++iter) {
    auto p = rng.polynomial(reg);
    std::vector<GaussianRational> pt;
    std::vector<std::complex<double>> fpt;
    for (int i = 0; i < 3; ++i) {
      auto g = rng.gaussian();
      pt.push_back(g);
      fpt.push_back(g.to_complex());
    }
    auto exact = p.evaluate(pt).to_complex();
    auto approx = p.evaluate(fpt);
    CHECK(std::abs(exact - approx) <= 1e-9 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("property: printed form parses back bit-exactly") {
  auto reg = VariableRegistry::scalars({"x", "y", "z", "w"});
  testutil::Rng rng(8080);
  for (int iter = 0; iter < 100; ++iter) {
    auto p = rng.polynomial(reg, 6, 4);
    CHECK(Polynomial::parse(reg, p.to_string()) == p);
  }
}

TEST_CASE("derivative agrees with a central finite difference (float oracle)") {
  auto reg = VariableRegistry::scalars({"x", "y"});
  testutil::Rng rng(4242);
  for (int iter = 0; iter < 10; ++iter) {
    auto p = rng.polynomial(reg, 4, 3, /*allow_imag=*/false);
    double x = rng.real01() * 2 - 1, y = rng.real01() * 2 - 1;
    const double h = 1e-5;
    std::vector<double> plus = {x + h, y}, minus = {x - h, y}, at = {x, y};
    double fd = (p.evaluate_real(plus) - p.evaluate_real(minus)) / (2 * h);
    double dx = p.differentiate(0).evaluate_real(at);
    CHECK(dx == doctest::Approx(fd).epsilon(1e-4));
  }
}
