#include <doctest.h>

#include <atomic>
#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "singlab/errors.hpp"
#include "singlab/quad.hpp"
#include "singlab/specfun.hpp"

using namespace singlab;
using std::complex;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("finite: endpoint log singularity, int_0^1 ln(1/x) = 1") {
  auto f = [](double x) { return complex<double>(std::log(1.0 / x)); };
  auto r = quad::integrate_finite(f, 0.0, 1.0);
  CHECK(std::fabs(r.value.real() - 1.0) <= 1e-10);
  CHECK(r.value.imag() == 0.0);
  CHECK(r.evaluations > 0);
}

TEST_CASE("finite: interior singular point is pinned and never evaluated") {
  // int_0^2 K0(|x-1|) dx = 2 int_0^1 K0 = 2.48501969724755653
  std::atomic<long> hits{0};
  auto f = [&hits](double x) {
    if (x == 1.0) ++hits;
    return complex<double>(specfun::bessel_k0(std::fabs(x - 1.0)));
  };
  quad::QuadratureSpec spec;
  spec.singular_points = {1.0};
  auto r = quad::integrate_finite(f, 0.0, 2.0, spec);
  CHECK(hits.load() == 0);
  CHECK(std::fabs(r.value.real() - oracles::int_k0_around_kink) <= 1e-10);
}

TEST_CASE("finite: linearity in the integrand") {
  auto f = [](double x) { return complex<double>(std::sin(3.0 * x)); };
  auto g = [](double x) { return complex<double>(1.0 / (1.0 + x * x)); };
  auto fg = [&](double x) { return 2.0 * f(x) + 3.0 * g(x); };
  auto rf = quad::integrate_finite(f, 0.0, 5.0);
  auto rg = quad::integrate_finite(g, 0.0, 5.0);
  auto rfg = quad::integrate_finite(fg, 0.0, 5.0);
  CHECK(std::abs(rfg.value - (2.0 * rf.value + 3.0 * rg.value)) < 1e-12);
}

TEST_CASE("finite: tighter tolerance does not worsen the result") {
  auto f = [](double x) { return complex<double>(std::sqrt(x)); };
  double exact = 2.0 / 3.0;
  double prev_err = 1.0;
  for (double tol : {1e-4, 1e-8, 1e-12}) {
    quad::QuadratureSpec spec;
    spec.abs_tol = tol;
    spec.rel_tol = tol;
    auto r = quad::integrate_finite(f, 0.0, 1.0, spec);
    double err = std::fabs(r.value.real() - exact);
    CHECK(err <= prev_err + 1e-14);
    CHECK(err <= 10.0 * tol);
    prev_err = err;
  }
}

TEST_CASE("finite: subdivision exhaustion carries the best estimate") {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-14;
  spec.max_subdivisions = 3;  // deliberately too few for a kink
  auto f = [](double x) { return complex<double>(std::fabs(x - 0.37)); };
  try {
    quad::integrate_finite(f, 0.0, 1.0, spec);
    FAIL("expected convergence_error");
  } catch (const convergence_error& e) {
    // exact value 0.37^2/2 + 0.63^2/2
    double exact = 0.5 * (0.37 * 0.37 + 0.63 * 0.63);
    CHECK(std::fabs(e.best_estimate().real() - exact) < 1e-2);
    CHECK(e.error_estimate() >= 0.0);
  }
}

TEST_CASE("semi-infinite exponential: int_0^inf e^{-x} = 1") {
  auto f = [](double x) { return complex<double>(std::exp(-x)); };
  auto r = quad::integrate_semi_infinite(f, 0.0);
  CHECK(std::fabs(r.value.real() - 1.0) <= 1e-10);
}

TEST_CASE("semi-infinite exponential: decaying oscillation and a shifted start") {
  auto f = [](double x) { return complex<double>(std::exp(-x) * std::sin(x)); };
  auto r = quad::integrate_semi_infinite(f, 0.0);
  CHECK(std::fabs(r.value.real() - 0.5) <= 1e-10);

  // int_2^inf e^{-x} = e^{-2}
  auto g = [](double x) { return complex<double>(std::exp(-x)); };
  auto r2 = quad::integrate_semi_infinite(g, 2.0);
  CHECK(std::fabs(r2.value.real() - std::exp(-2.0)) <= 1e-10);
}

TEST_CASE("semi-infinite exponential: K0 cosine transform at weight 1") {
  auto f = [](double x) {
    return complex<double>(specfun::bessel_k0(std::max(x, 1e-300)) *
                           std::cos(x));
  };
  auto r = quad::integrate_semi_infinite(f, 0.0);
  CHECK(std::fabs(r.value.real() - oracles::int_k0_cos_weight1) <= 1e-9);
}

TEST_CASE("semi-infinite oscillatory: algebraic 1/x tail, int sin(x)/x = pi/2") {
  quad::QuadratureSpec spec;
  spec.truncation = quad::TruncationPolicy::oscillatory_tail;
  spec.osc_frequency = 1.0;
  auto f = [](double x) {
    return complex<double>(x == 0.0 ? 1.0 : std::sin(x) / x);
  };
  auto r = quad::integrate_semi_infinite(f, 0.0, spec);
  CHECK(std::fabs(r.value.real() - pi / 2.0) <= 1e-9);
}

TEST_CASE("semi-infinite oscillatory: cos(x)/(1+x^2) = pi/(2e)") {
  quad::QuadratureSpec spec;
  spec.truncation = quad::TruncationPolicy::oscillatory_tail;
  spec.osc_frequency = 1.0;
  auto f = [](double x) {
    return complex<double>(std::cos(x) / (1.0 + x * x));
  };
  auto r = quad::integrate_semi_infinite(f, 0.0, spec);
  CHECK(std::fabs(r.value.real() - oracles::int_cos_over_1px2) <= 1e-9);
}

TEST_CASE("semi-infinite oscillatory: requires a frequency") {
  quad::QuadratureSpec spec;
  spec.truncation = quad::TruncationPolicy::oscillatory_tail;
  auto f = [](double x) { return complex<double>(std::exp(-x)); };
  CHECK_THROWS_AS(quad::integrate_semi_infinite(f, 0.0, spec),
                  precondition_error);
}

TEST_CASE("semi-infinite: non-decaying integrands are rejected") {
  {
    quad::QuadratureSpec spec;
    spec.truncation = quad::TruncationPolicy::oscillatory_tail;
    spec.osc_frequency = 1.0;
    auto f = [](double x) { return complex<double>(std::sin(x)); };
    CHECK_THROWS_AS(quad::integrate_semi_infinite(f, 0.0, spec),
                    divergence_error);
  }
  {
    auto f = [](double) { return complex<double>(1.0); };
    CHECK_THROWS_AS(quad::integrate_semi_infinite(f, 0.0), divergence_error);
  }
}

TEST_CASE("epsilon algorithm accelerates a geometric-tail sequence") {
  // partial sums of sum (-1)^n / (n+1) -> ln 2
  std::vector<complex<double>> s;
  double acc = 0.0;
  for (int n = 0; n < 20; ++n) {
    acc += (n % 2 == 0 ? 1.0 : -1.0) / (n + 1.0);
    s.push_back(acc);
  }
  auto lim = quad::epsilon_limit(s);
  CHECK(std::abs(lim - complex<double>(std::log(2.0), 0.0)) < 1e-12);
}
