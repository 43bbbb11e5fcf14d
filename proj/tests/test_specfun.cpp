#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "singlab/dd.hpp"
#include "singlab/errors.hpp"
#include "singlab/quad.hpp"
#include "singlab/specfun.hpp"

using namespace singlab;
using std::complex;

namespace {

// Independent K0 oracle: trapezoidal rule on K0(x) = int_0^inf e^{-x cosh t}
// dt. The integrand is analytic and decays doubly exponentially, so the
// trapezoid converges geometrically; step and cutoff were tuned offline to
// give ~1e-16 relative error over the grid range.
double k0_trapezoid(double x) {
  double h = 0.17 / std::max(1.0, std::sqrt(x / 8.0));
  double t_max = std::acosh(1.0 + 48.0 / x);
  double sum = 0.5 * std::exp(-x);  // t = 0 endpoint, cosh 0 = 1
  for (double t = h; t <= t_max; t += h) sum += std::exp(-x * std::cosh(t));
  return sum * h;
}

}  // namespace

TEST_CASE("bessel_k0 matches the pinned grid to 1e-12 relative") {
  for (const auto& pt : oracles::k0_grid) {
    double v = specfun::bessel_k0(pt.x);
    CHECK(std::fabs(v - pt.k0) <= 1e-12 * pt.k0);
  }
}

TEST_CASE("bessel_k0 matches an independent representation at random points") {
  std::mt19937 rng(20250817);
  std::uniform_real_distribution<double> ex(-2.0, 2.4);
  for (int i = 0; i < 200; ++i) {
    double x = std::pow(10.0, ex(rng));
    double ref = k0_trapezoid(x);
    CHECK(std::fabs(specfun::bessel_k0(x) - ref) <= 2e-12 * ref);
  }
}

TEST_CASE("bessel_k0 domain and underflow edges") {
  CHECK_THROWS_AS(specfun::bessel_k0(0.0), domain_error);
  CHECK_THROWS_AS(specfun::bessel_k0(-1.0), domain_error);
  CHECK(specfun::bessel_k0(700.0) > 0.0);
  CHECK(specfun::bessel_k0(800.0) == 0.0);  // past the double floor
}

TEST_CASE("si and ci match the pinned grid to 1e-12 relative") {
  for (const auto& pt : oracles::sici_grid) {
    double si = specfun::sine_integral_si(pt.x);
    double ci = specfun::cosine_integral_ci(pt.x);
    CHECK(std::fabs(si - pt.si) <= 1e-12 * std::fabs(pt.si));
    // ci passes through zeros; compare absolutely against the function scale
    CHECK(std::fabs(ci - pt.ci) <= 1e-12 * std::max(1.0, std::fabs(pt.ci)));
  }
}

TEST_CASE("si is odd and approaches pi/2") {
  for (double z : {0.3, 1.7, 12.0, 200.0}) {
    CHECK(specfun::sine_integral_si(-z) ==
          doctest::Approx(-specfun::sine_integral_si(z)).epsilon(1e-15));
  }
  CHECK(specfun::sine_integral_si(0.0) == 0.0);
  double tail = specfun::sine_integral_si(1e6) - std::asin(1.0);
  CHECK(std::fabs(tail) < 2e-6);  // |si(z) - pi/2| <= cos(z)/z + O(1/z^2)
}

TEST_CASE("ci domain and small-argument logarithm") {
  CHECK_THROWS_AS(specfun::cosine_integral_ci(0.0), domain_error);
  CHECK_THROWS_AS(specfun::cosine_integral_ci(-2.0), domain_error);
  double z = 1e-8;
  double expected = specfun::euler_gamma + std::log(z);
  CHECK(specfun::cosine_integral_ci(z) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("K0 cosine transform reproduces pi/(2 sqrt(1+a^2))") {
  // int_0^inf K0(x) cos(a x) dx, checked through the library quadrature so
  // the special function and the integrator are exercised together.
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    quad::QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-11;
    auto f = [a](double x) {
      return complex<double>(specfun::bessel_k0(std::max(x, 1e-300)) *
                             std::cos(a * x));
    };
    auto r = quad::integrate_semi_infinite(f, 0.0, spec);
    double expected = std::asin(1.0) / std::sqrt(1.0 + a * a);
    CHECK(std::fabs(r.value.real() - expected) <= 1e-8);
  }
}

TEST_CASE("complex sqrt and log: principal-branch behavior") {
  specfun::BranchChoice principal;
  auto s = specfun::complex_sqrt(complex<double>(-1.0, 0.0), principal);
  CHECK(s.real() == doctest::Approx(0.0));
  CHECK(s.imag() == doctest::Approx(1.0));
  auto l = specfun::complex_log(complex<double>(0.0, 1.0), principal);
  CHECK(l.real() == doctest::Approx(0.0));
  CHECK(l.imag() == doctest::Approx(std::asin(1.0)));
  CHECK_THROWS_AS(specfun::complex_log(complex<double>(0.0, 0.0)),
                  domain_error);
}

TEST_CASE("BranchTracker keeps the root continuous around the origin") {
  // Walk e^{i theta} for theta in [0, 4pi]; the principal root would jump at
  // theta = pi and 3pi, the tracked root must not.
  specfun::BranchTracker tracker;
  complex<double> prev = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    double theta = 4.0 * std::acos(-1.0) * i / n;
    auto z = std::polar(1.0, theta);
    auto root = tracker.sqrt_step(z);
    if (i > 0) CHECK(std::abs(root - prev) < 0.1);
    if (i == n / 2)  // theta = 2pi: tracked sheet gives -1, principal gives +1
      CHECK(std::abs(root - complex<double>(-1.0, 0.0)) < 1e-12);
    prev = root;
  }
  tracker.reset();
  CHECK(std::abs(tracker.sqrt_step({1.0, 0.0}) - complex<double>(1.0, 0.0)) <
        1e-15);
}

TEST_CASE("BranchTracker along the S-matrix ratio path") {
  // The ratio [b^2+(d-ik)^2]/[b^2+(d+ik)^2] circles the origin as k sweeps
  // through the resonance; its tracked square root must stay continuous.
  double b = 1.0, d = -0.1;
  specfun::BranchTracker tracker;
  complex<double> prev = 0.0;
  bool first = true;
  double max_step = 0.0;
  for (double k = 0.01; k <= 10.0; k += 0.005) {
    complex<double> up = b * b + std::pow(complex<double>(d, -k), 2);
    complex<double> dn = b * b + std::pow(complex<double>(d, k), 2);
    auto root = tracker.sqrt_step(up / dn);
    if (!first) max_step = std::max(max_step, std::abs(root - prev));
    prev = root;
    first = false;
  }
  CHECK(max_step < 0.2);
}

TEST_CASE("double-double exponential reproduces e beyond double precision") {
  auto e = detail::dd_exp(detail::dd{1.0});
  double err = std::fabs((e.hi - oracles::e_hi) + (e.lo - oracles::e_lo));
  CHECK(err < 1e-30);
  auto l = detail::dd_log(detail::dd{2.0});
  auto back = detail::dd_exp(l);
  CHECK(std::fabs((back.hi - 2.0) + back.lo) < 1e-30);
}
