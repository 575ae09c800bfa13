#include "maval/fourier_pws.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "maval/error.hpp"
#include "maval/minor_spaces.hpp"
#include "maval/quadrature.hpp"
#include "test_util.hpp"

using maval::Box;
using maval::BumpDescriptor;
using maval::ComplexPoint;
using maval::DecayReport;
using maval::Polynomial;
using maval::QPolynomial;
using maval::Rational;
using maval::Weight;

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

Weight indicator_unit(size_t n) {
  const auto reg = maval::coordinate_registry(n);
  return Weight::polynomial_on_box(Polynomial::constant(reg, 1), Box::unit(n));
}

Weight centered_bump(size_t n) {
  BumpDescriptor b;
  b.center.assign(n, Rational(0));
  b.sigma = Rational(1);
  return Weight::bump(b);
}

ComplexPoint make_point(std::vector<std::vector<Complex>> slots) {
  ComplexPoint w;
  w.w = std::move(slots);
  return w;
}

}  // namespace

TEST_CASE("fourier_weight: exact values, symmetry, shift identity") {
  const Weight ind = indicator_unit(1);

  // At w = 0 the transform is the total mass.
  CHECK(std::abs(fourier_weight(ind, {Complex(0.0)}) - 1.0) < 1e-13);

  // Closed form on [0,1]: (1 - exp(-i a)) / (i a).
  const double a = 2.0;
  const Complex expected = (1.0 - std::exp(-kI * a)) / (kI * a);
  CHECK(rel_diff(fourier_weight(ind, {Complex(a)}), expected) < 1e-12);

  // Imaginary direction w = i turns the phase into real growth exp(x).
  CHECK(rel_diff(fourier_weight(ind, {kI}), Complex(std::exp(1.0) - 1.0)) < 1e-12);

  // An even weight has a real transform at real directions.
  const Weight bump = centered_bump(1);
  const Complex at_real = fourier_weight(bump, {Complex(3.2)});
  CHECK(std::abs(at_real.imag()) < 1e-12);
  CHECK(std::abs(at_real) > 0.0);

  // Translating the weight multiplies the transform by a pure phase.
  BumpDescriptor base;
  base.center = {Rational(1, 4)};
  base.sigma = Rational(1, 2);
  BumpDescriptor moved = base;
  moved.center = {Rational(3, 4)};
  const double freq = 3.7;
  const Complex lhs = fourier_weight(Weight::bump(moved), {Complex(freq)});
  const Complex rhs = std::exp(-kI * (freq * 0.5)) * fourier_weight(Weight::bump(base), {Complex(freq)});
  CHECK(rel_diff(lhs, rhs) < 1e-12);

  // Scaling the weight scales the transform.
  const Weight scaled = bump.times(Weight::constant(1, Rational(7, 3)));
  CHECK(rel_diff(fourier_weight(scaled, {Complex(3.2)}), (7.0 / 3.0) * at_real) < 1e-13);

  // Pinned node counts converge to the adaptive answer.
  CHECK(rel_diff(fourier_weight(bump, {Complex(3.2)}, 96), at_real) < 1e-10);

  CHECK_THROWS_AS(fourier_weight(Weight::one(1), {Complex(1.0)}), maval::error);
  CHECK_THROWS_AS(fourier_weight(ind, {Complex(1.0), Complex(2.0)}), maval::error);
}

TEST_CASE("f_hat_product: hand value, vanishing columns, zero functional") {
  const auto hreg = maval::hessian_registry(1);
  const Polynomial p = Polynomial::parse(hreg, "s_1_1");
  const QPolynomial q = maval::q_polynomial(p, 1, 1);
  const Weight ind = indicator_unit(1);

  // w = (i, 0): (-1) * Q(i) * transform at i  =  (-1)(i^2) int_0^1 e^x dx.
  const Complex hand = f_hat_product(ind, q, make_point({{kI}, {Complex(0.0)}}));
  CHECK(rel_diff(hand, Complex(std::exp(1.0) - 1.0)) < 1e-12);

  // Q is quadratic in each of the first k columns, so those columns force zeros.
  const Complex at_zero = f_hat_product(ind, q, make_point({{Complex(0.0)}, {Complex(2.0)}}));
  CHECK(at_zero == Complex(0.0));

  // The zero functional transforms to zero without touching the weight.
  const QPolynomial qzero = maval::q_polynomial(Polynomial::zero(hreg), 1, 1);
  CHECK(f_hat_product(Weight::one(1), qzero, make_point({{kI}, {kI}})) == Complex(0.0));

  CHECK_THROWS_AS(f_hat_product(ind, q, make_point({{kI}})), maval::error);
  CHECK_THROWS_AS(f_hat_product(indicator_unit(2), q, make_point({{kI}, {kI}})),
                  maval::error);
}

TEST_CASE("product and polarization paths agree; stored constant calibrates to 1") {
  struct Config {
    int n, k;
    const char* invariant;
  };
  const Config configs[] = {
      {1, 1, "s_1_1"},
      {2, 1, "s_1_1 + s_2_2"},
      {2, 2, "s_1_1*s_2_2 - s_1_2^2"},
  };

  testutil::Rng rng(7);
  for (const auto& cfg : configs) {
    CAPTURE(cfg.n);
    CAPTURE(cfg.k);
    const auto hreg = maval::hessian_registry(cfg.n);
    const Polynomial p = Polynomial::parse(hreg, cfg.invariant);
    const QPolynomial q = maval::q_polynomial(p, cfg.n, cfg.k);
    const Weight phi = centered_bump(static_cast<size_t>(cfg.n));

    for (int trial = 0; trial < 4; ++trial) {
      ComplexPoint w;
      w.w.assign(static_cast<size_t>(cfg.k) + 1, std::vector<Complex>(cfg.n));
      for (int j = 0; j < cfg.k; ++j)
        for (int i = 0; i < cfg.n; ++i)
          w.w[j][i] = Complex(0.0, -1.5 + 3.0 * rng.real01());
      for (int i = 0; i < cfg.n; ++i) w.w[cfg.k][i] = Complex(-2.0 + 4.0 * rng.real01(), 0.0);

      const Complex prod = f_hat_product(phi, q, w);
      const Complex pol = maval::f_hat_polarization(phi, p, cfg.n, cfg.k, w);
      CHECK(rel_diff(prod, pol) < 1e-5);
    }

    const Complex measured =
        maval::measure_fourier_normalization(cfg.n, cfg.k, phi, 11, 3);
    CHECK(std::abs(measured - Complex(1.0)) < 1e-5);
    CHECK(maval::fourier_normalization(cfg.n, cfg.k) == Rational(1));
  }

  // Hand value through the polarization path: same point as the product test.
  const auto h1 = maval::hessian_registry(1);
  const Polynomial s11 = Polynomial::parse(h1, "s_1_1");
  const Complex pol_hand = maval::f_hat_polarization(
      indicator_unit(1), s11, 1, 1, make_point({{kI}, {Complex(0.0)}}));
  CHECK(rel_diff(pol_hand, Complex(std::exp(1.0) - 1.0)) < 1e-12);

  // k = 0 reduces to a constant multiple of the plain transform.
  const Weight phi1 = centered_bump(1);
  const Polynomial half5 = Polynomial::constant(h1, maval::GaussianRational(Rational(5, 2)));
  const Complex k0 = maval::f_hat_polarization(phi1, half5, 1, 0, make_point({{Complex(1.3)}}));
  CHECK(rel_diff(k0, 2.5 * fourier_weight(phi1, {Complex(1.3)})) < 1e-13);
  const QPolynomial q0 = maval::q_polynomial(half5, 1, 0);
  CHECK(rel_diff(k0, f_hat_product(phi1, q0, make_point({{Complex(1.3)}}))) < 1e-13);

  // Contract violations.
  CHECK_THROWS_AS(maval::f_hat_polarization(phi1, s11, 1, 1,
                                            make_point({{Complex(1.0)}, {Complex(0.0)}})),
                  maval::error);  // first slot not purely imaginary
  CHECK_THROWS_AS(maval::f_hat_polarization(phi1, Polynomial::parse(h1, "s_1_1^2"), 1, 1,
                                            make_point({{kI}, {Complex(0.0)}})),
                  maval::error);  // degree mismatch
  CHECK_THROWS_AS(maval::f_hat_polarization(phi1, Polynomial::parse(h1, "s_1_1 + 1"), 1, 1,
                                            make_point({{kI}, {Complex(0.0)}})),
                  maval::error);  // not homogeneous
  CHECK_THROWS_AS(maval::f_hat_polarization(phi1, s11, 1, 1,
                                            make_point({{Complex(0.0, 700.0)}, {Complex(0.0)}})),
                  maval::error);  // growth guard
  CHECK_THROWS_AS(maval::fourier_normalization(0, 0), maval::error);
  CHECK_THROWS_AS(maval::fourier_normalization(2, 3), maval::error);
}

TEST_CASE("coordinate change round-trips and is trivial for k = 0") {
  const auto poly_in_w = [](const ComplexPoint& w) {
    Complex acc = 3.0;
    for (size_t j = 0; j < w.w.size(); ++j)
      for (const auto& c : w.w[j]) acc += static_cast<double>(j + 1) * c * c;
    return acc;
  };

  const ComplexPoint w = make_point({{Complex(1.5, -0.5), Complex(0.25, 2.0)},
                                     {Complex(-3.0, 1.0), Complex(0.5, 0.5)},
                                     {Complex(2.0, -1.0), Complex(-0.75, 0.25)}});

  const auto forward = [&](const ComplexPoint& v) { return maval::coordinate_change_F(poly_in_w, v); };
  const auto back = [&](const ComplexPoint& v) {
    return maval::coordinate_change_F_inverse(poly_in_w, v);
  };
  CHECK(rel_diff(maval::coordinate_change_F_inverse(forward, w), poly_in_w(w)) < 1e-12);
  CHECK(rel_diff(maval::coordinate_change_F(back, w), poly_in_w(w)) < 1e-12);

  // k = 0: no shift, unit factor.
  const ComplexPoint w0 = make_point({{Complex(0.7, 0.1)}});
  CHECK(maval::coordinate_change_F(poly_in_w, w0) == poly_in_w(w0));

  // k = 1 sign and argument shift by hand: F(w) = -f(w_1, w_2 - w_1).
  const auto last_coord = [](const ComplexPoint& v) { return v.w.back()[0]; };
  const ComplexPoint w1 = make_point({{Complex(2.0, 1.0)}, {Complex(5.0, -1.0)}});
  CHECK(maval::coordinate_change_F(last_coord, w1) == -(Complex(5.0, -1.0) - Complex(2.0, 1.0)));
}

TEST_CASE("box support function") {
  const Box a({Rational(-1)}, {Rational(2)});
  CHECK(maval::box_support_d(a, {-3.0}) == 3.0);
  CHECK(maval::box_support_d(a, {2.0}) == 4.0);
  CHECK(maval::box_support_d(Box::centered(2, Rational(2)), {1.0, -1.0}) == 4.0);
  CHECK_THROWS_AS(maval::box_support_d(a, {1.0, 2.0}), maval::error);
}

TEST_CASE("decay report: finite, deterministic, monotone in samples, order, and box") {
  const Weight phi = centered_bump(1);
  const auto h1 = maval::hessian_registry(1);
  const Polynomial p = Polynomial::parse(h1, "s_1_1");
  const Box a = Box::centered(1, Rational(2));

  const DecayReport rep = maval::pws_decay_report(phi, p, 1, 1, a, 0, 5, 64);
  CHECK(std::isfinite(rep.sup_normalized));
  CHECK(rep.sup_normalized > 0.0);
  CHECK(rep.sup_transform > 0.0);
  CHECK(rep.samples == 64);

  // Same seed, same report.
  const DecayReport again = maval::pws_decay_report(phi, p, 1, 1, a, 0, 5, 64);
  CHECK(again.sup_normalized == rep.sup_normalized);
  CHECK(again.sup_transform == rep.sup_transform);

  // Doubling the sample count extends the same stream, so the sup can only grow.
  const DecayReport refined = maval::pws_decay_report(phi, p, 1, 1, a, 0, 5, 128);
  CHECK(refined.sup_normalized >= rep.sup_normalized);
  CHECK(std::isfinite(refined.sup_normalized));

  // Higher decay order weights the same points by (1+|d|)^N >= 1.
  const DecayReport n1 = maval::pws_decay_report(phi, p, 1, 1, a, 1, 5, 64);
  const DecayReport n2 = maval::pws_decay_report(phi, p, 1, 1, a, 2, 5, 64);
  CHECK(n1.sup_normalized >= rep.sup_normalized);
  CHECK(n2.sup_normalized >= n1.sup_normalized);

  // Enlarging the reference box strengthens exp(-h_A), shrinking the sup.
  const DecayReport wider =
      maval::pws_decay_report(phi, p, 1, 1, Box::centered(1, Rational(3)), 0, 5, 64);
  CHECK(wider.sup_normalized <= rep.sup_normalized + 1e-12);

  // The zero functional reports zeros.
  const DecayReport zero = maval::pws_decay_report(phi, Polynomial::zero(h1), 1, 1, a, 2, 5, 16);
  CHECK(zero.sup_normalized == 0.0);
  CHECK(zero.sup_transform == 0.0);

  // A two-dimensional instance stays finite.
  const auto h2 = maval::hessian_registry(2);
  const DecayReport plane = maval::pws_decay_report(
      centered_bump(2), Polynomial::parse(h2, "s_1_1 + s_2_2"), 2, 1,
      Box::centered(2, Rational(2)), 1, 9, 8);
  CHECK(std::isfinite(plane.sup_normalized));
  CHECK(plane.sup_normalized > 0.0);

  // Support must sit inside the reference box.
  try {
    maval::pws_decay_report(phi, p, 1, 1, Box({Rational(0)}, {Rational(2)}), 0, 5, 4);
    FAIL("support outside the box must be rejected");
  } catch (const maval::error& e) {
    CHECK(e.kind() == maval::errc::domain);
  }
  CHECK_THROWS_AS(maval::pws_decay_report(Weight::one(1), p, 1, 1, a, 0, 5, 4),
                  maval::error);
  CHECK_THROWS_AS(maval::pws_decay_report(phi, p, 1, 1, a, -1, 5, 4), maval::error);
}
