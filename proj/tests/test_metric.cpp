#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "singlab/errors.hpp"
#include "singlab/metric.hpp"
#include "singlab/quad.hpp"
#include "testfn_images.hpp"

using namespace singlab;
using std::complex;

namespace {

const double pi = std::acos(-1.0);

// Packet with a narrow Gaussian kappa-profile around kappa0: its expansion
// coefficients <Psi_kappa|g> equal the profile itself, which makes every
// rho_apply statement checkable by one-dimensional quadrature.
struct SpectralPacket {
  model::ModelParams p;
  double kappa0, width;

  double profile(double kappa) const {
    double t = (kappa - kappa0) / width;
    return std::exp(-0.5 * t * t);
  }

  // int w(kappa) (kappa^2+d^2)^power Psi_kappa(x) dkappa
  complex<double> weighted(double x, double power) const {
    quad::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-14;
    auto r = quad::integrate_finite(
        [&](double kappa) {
          double w = std::pow(kappa * kappa + p.d * p.d, power);
          return profile(kappa) * w * metric::psi_k(p, kappa, x);
        },
        1e-6, kappa0 + 8.0 * width, spec);
    return r.value;
  }

  metric::Packet as_packet(double power = 0.0) const {
    return {[*this, power](double x) { return weighted(x, power); }, 26.0};
  }
};

}  // namespace

TEST_CASE("catalog members satisfy their declared boundary classes") {
  model::ModelParams p(1.2, -0.3);
  auto catalog = metric::test_function_catalog(p);
  CHECK(catalog.size() >= 12);
  complex<double> a = p.robin_coef();
  for (const auto& f : catalog) {
    switch (f.bc) {
      case metric::BcClass::robin_H:
        CHECK(std::abs(f.f1(0.0) + a * f.f(0.0)) < 1e-14);
        break;
      case metric::BcClass::robin_H_dagger:
        CHECK(std::abs(f.f1(0.0) + std::conj(a) * f.f(0.0)) < 1e-14);
        break;
      case metric::BcClass::dirichlet:
        CHECK(std::abs(f.f(0.0)) == 0.0);
        break;
      case metric::BcClass::none:
        break;
    }
  }
}

TEST_CASE("catalog derivative maps agree with finite differences") {
  model::ModelParams p(0.9, 0.4);
  auto catalog = metric::test_function_catalog(p);
  double h = 1e-5;
  for (const auto& f : catalog) {
    for (double x : {0.4, 2.0}) {
      auto fd1 = (f.f(x + h) - f.f(x - h)) / (2.0 * h);
      CHECK(std::abs(fd1 - f.f1(x)) < 1e-8);
      auto fd3 = (f.f2(x + h) - f.f2(x - h)) / (2.0 * h);
      CHECK(std::abs(fd3 - f.f3(x)) < 1e-7);
      auto fd4 = (f.f3(x + h) - f.f3(x - h)) / (2.0 * h);
      CHECK(std::abs(fd4 - f.f4(x)) < 1e-6);
    }
  }
}

TEST_CASE("eta annihilates e^{(d-ib)x} and scales e^{-ibx} by d^2") {
  model::ModelParams p(1.0, -0.4);
  complex<double> s(p.d, -p.b);
  metric::AnalyticTestFunction f;
  f.f = [s](double x) { return std::exp(s * x); };
  f.f1 = [s](double x) { return s * std::exp(s * x); };
  f.f2 = [s](double x) { return s * s * std::exp(s * x); };
  f.f3 = [s](double x) { return s * s * s * std::exp(s * x); };
  f.f4 = [s](double x) { return s * s * s * s * std::exp(s * x); };
  for (double x : {0.0, 1.0, 3.0}) {
    CHECK(std::abs(metric::apply_eta(p, f, x)) < 1e-14);
  }

  complex<double> q(0.0, -p.b);
  metric::AnalyticTestFunction g;
  g.f = [q](double x) { return std::exp(q * x); };
  g.f1 = [q](double x) { return q * std::exp(q * x); };
  g.f2 = [q](double x) { return q * q * std::exp(q * x); };
  g.f3 = [q](double x) { return q * q * q * std::exp(q * x); };
  g.f4 = [q](double x) { return q * q * q * q * std::exp(q * x); };
  for (double x : {0.0, 1.0, 3.0}) {
    auto want = p.d * p.d * g.f(x);
    CHECK(std::abs(metric::apply_eta(p, g, x) - want) < 1e-14);
  }
}

TEST_CASE("psi_k pinned value and degenerate-norm rejection") {
  model::ModelParams p(1.0, -0.1);
  auto v = metric::psi_k(p, 2.0, 0.5);
  CHECK(std::abs(v - oracles::psi_k_b1dm01_k2_xhalf) < 1e-14);
  model::ModelParams q(1.0, 0.0);
  CHECK_THROWS_AS(metric::psi_k(q, 0.0, 1.0), domain_error);
}

TEST_CASE("eigenrelations of eta and eta-tilde at random points") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uk(0.1, 8.0), ux(0.0, 15.0);
  model::ModelParams p(1.0, -0.1);
  for (int i = 0; i < 100; ++i) {
    double k = uk(rng), x = ux(rng);
    double ev = k * k + p.d * p.d;
    auto psi = metric::make_psi_k_testfn(p, k);
    auto r1 = metric::apply_eta(p, psi, x) - ev * psi.f(x);
    CHECK(std::abs(r1) <= 1e-13 * std::max(1.0, ev));
    auto tld = metric::make_psi_tilde_k_testfn(p, k);
    auto r2 = metric::apply_eta_tilde(p, tld, x) - ev * tld.f(x);
    CHECK(std::abs(r2) <= 1e-13 * std::max(1.0, ev));
  }
}

TEST_CASE("ladder compositions reproduce eta and eta-tilde coefficients") {
  model::ModelParams p(1.4, 0.7);
  auto catalog = metric::test_function_catalog(p);
  for (const auto& f : catalog) {
    auto ldag_f = testsupport::image_of_Ldag(p, f);
    auto l_f = testsupport::image_of_L(p, f);
    for (double x : {0.0, 0.8, 2.5}) {
      auto lhs1 = metric::apply_L(p, ldag_f, x);
      auto rhs1 = metric::apply_eta(p, f, x);
      CHECK(std::abs(lhs1 - rhs1) <= 1e-13 * std::max(1.0, std::abs(rhs1)));
      auto lhs2 = metric::apply_Ldag(p, l_f, x);
      auto rhs2 = metric::apply_eta_tilde(p, f, x);
      CHECK(std::abs(lhs2 - rhs2) <= 1e-13 * std::max(1.0, std::abs(rhs2)));
    }
  }
}

TEST_CASE("ladders map the eta and eta-tilde eigenfunctions onto each other") {
  model::ModelParams p(1.0, -0.25);
  for (double k : {0.6, 1.3, 4.0}) {
    double root = std::sqrt(k * k + p.d * p.d);
    auto tld = metric::make_psi_tilde_k_testfn(p, k);
    auto psi = metric::make_psi_k_testfn(p, k);
    for (double x : {0.2, 1.0, 6.0}) {
      auto up = metric::apply_L(p, tld, x);
      CHECK(std::abs(up - root * metric::psi_k(p, k, x)) < 1e-13);
      auto down = metric::apply_Ldag(p, psi, x);
      CHECK(std::abs(down - root * metric::psi_tilde_k(p, k, x)) < 1e-13);
    }
  }
}

TEST_CASE("Lstar turns the free sine wave into the H eigenfunction") {
  model::ModelParams p(1.0, -0.1);
  double k = 2.0;
  complex<double> a = p.robin_coef();
  auto root = std::sqrt(complex<double>(k * k) + a * a);
  auto sine = testsupport::sine_testfn(k, std::sqrt(2.0 / pi));
  for (double x : {0.0, 0.7, 3.1}) {
    auto lhs = metric::apply_Lstar(p, sine, x);
    auto rhs = root * model::phi_k(p, k, x);
    CHECK(std::abs(lhs - rhs) < 1e-14);
  }
}

TEST_CASE("intertwining relations hold on boundary-matched functions") {
  model::ModelParams p(1.0, -0.1);
  auto catalog = metric::test_function_catalog(p);
  int robin_count = 0, dirichlet_count = 0;
  for (const auto& f : catalog) {
    if (f.bc == metric::BcClass::robin_H) {
      ++robin_count;
      auto r1 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::etaH_vs_Hdag_eta);
      CHECK(r1.sup_residual < 1e-12);
      CHECK(r1.boundary_defect < 1e-12);
      CHECK(r1.grid.size() >= 100);
      auto r2 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::Ldag_eta_vs_etatilde_Ldag);
      CHECK(r2.sup_residual < 1e-12);
    }
    if (f.bc == metric::BcClass::dirichlet) {
      ++dirichlet_count;
      auto r3 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::eta_L_vs_L_etatilde);
      CHECK(r3.sup_residual < 1e-12);
    }
  }
  CHECK(robin_count >= 3);
  CHECK(dirichlet_count >= 3);
}

TEST_CASE("intertwining verification rejects a mismatched boundary class") {
  model::ModelParams p(1.0, -0.1);
  auto catalog = metric::test_function_catalog(p);
  for (const auto& f : catalog) {
    if (f.bc != metric::BcClass::dirichlet) continue;
    CHECK_THROWS_AS(metric::verify_intertwining(
                        p, f, metric::IntertwiningRelation::etaH_vs_Hdag_eta),
                    precondition_error);
    break;
  }
}

TEST_CASE("boundary defect detects a function outside the eta domain") {
  // Differential expressions commute for any smooth f, so a mislabeled
  // function shows up only in the boundary defect: for real f with
  // f(0) = 1 it equals 2b.
  model::ModelParams p(1.0, -0.1);
  metric::AnalyticTestFunction f;
  f.f = [](double x) { return complex<double>(std::exp(-x)); };
  f.f1 = [](double x) { return complex<double>(-std::exp(-x)); };
  f.f2 = [](double x) { return complex<double>(std::exp(-x)); };
  f.f3 = [](double x) { return complex<double>(-std::exp(-x)); };
  f.f4 = [](double x) { return complex<double>(std::exp(-x)); };
  f.decay_rate = 1.0;
  f.bc = metric::BcClass::robin_H;  // deliberately wrong label
  f.name = "mislabeled";
  auto r = metric::verify_intertwining(
      p, f, metric::IntertwiningRelation::etaH_vs_Hdag_eta);
  CHECK(r.sup_residual < 1e-12);                       // expressions agree
  CHECK(r.boundary_defect == doctest::Approx(2.0 * p.b).epsilon(1e-12));
}

TEST_CASE("rho_apply at power 0 resolves the identity on a packet") {
  SpectralPacket sp{model::ModelParams(1.0, -0.1), 2.0, 0.3};
  auto grid = linspace(0.0, 12.0, 25);
  auto r = metric::rho_apply(sp.p, sp.as_packet(), grid, 0.0);
  CHECK(!r.unbounded_inverse_warning);
  CHECK(r.truncation_k > sp.kappa0);
  CHECK(r.out.valid());
  CHECK(r.out.route == "rho");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst,
                     std::abs(r.out.values[i] - sp.weighted(grid[i], 0.0)));
  CHECK(worst < 1e-6);
}

TEST_CASE("rho_apply at power 1 equals the eta-weighted synthesis") {
  SpectralPacket sp{model::ModelParams(1.0, -0.1), 2.0, 0.3};
  auto grid = linspace(0.0, 10.0, 21);
  // the kappa^2 weight amplifies the packet's own evaluation noise, so the
  // truncation threshold has to sit above that floor
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-8;
  auto r = metric::rho_apply(sp.p, sp.as_packet(), grid, 1.0, spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst,
                     std::abs(r.out.values[i] - sp.weighted(grid[i], 1.0)));
  CHECK(worst < 1e-6);
}

TEST_CASE("two half powers compose to the full metric") {
  SpectralPacket sp{model::ModelParams(1.0, -0.1), 2.0, 0.3};
  auto grid = linspace(0.0, 10.0, 21);
  // first half applied exactly, second through the library
  auto r = metric::rho_apply(sp.p, sp.as_packet(0.5), grid, 0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst,
                     std::abs(r.out.values[i] - sp.weighted(grid[i], 1.0)));
  CHECK(worst < 1e-6);
}

TEST_CASE("negative power with d = 0 raises the unbounded-inverse flag") {
  SpectralPacket singular{model::ModelParams(1.0, 0.0), 2.0, 0.3};
  auto grid = linspace(0.0, 6.0, 7);
  auto r = metric::rho_apply(singular.p, singular.as_packet(), grid, -0.5);
  CHECK(r.unbounded_inverse_warning);
  SpectralPacket regular{model::ModelParams(1.0, -0.1), 2.0, 0.3};
  auto r2 = metric::rho_apply(regular.p, regular.as_packet(), grid, -0.5);
  CHECK(!r2.unbounded_inverse_warning);
}

TEST_CASE("rho_apply grid-function overload round-trips a sampled packet") {
  SpectralPacket sp{model::ModelParams(1.0, -0.1), 2.0, 0.3};
  GridFunction g;
  g.grid = linspace(0.0, 26.0, 521);
  g.values.reserve(g.grid.size());
  for (double x : g.grid) g.values.push_back(sp.weighted(x, 0.0));
  g.b = sp.p.b;
  g.d = sp.p.d;
  g.k = sp.kappa0;
  g.route = "sampled";
  // spline interpolation noise (~h^4) is the coefficient floor here
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-3;
  auto r = metric::rho_apply(sp.p, g, 0.0, spec);
  CHECK(r.out.route == "rho");
  CHECK(r.out.b == sp.p.b);
  CHECK(r.out.k == sp.kappa0);
  REQUIRE(r.out.grid.size() == g.grid.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    if (g.grid[i] < 0.5 || g.grid[i] > 12.0) continue;  // spline end effects
    worst = std::max(worst, std::abs(r.out.values[i] - g.values[i]));
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("rho_apply rejects an unusable packet or grid") {
  model::ModelParams p(1.0, -0.1);
  metric::Packet bad{[](double) { return complex<double>(0.0); }, 0.0};
  auto grid = linspace(0.0, 5.0, 6);
  CHECK_THROWS_AS(metric::rho_apply(p, bad, grid, 0.0), precondition_error);
  GridFunction empty;
  CHECK_THROWS_AS(metric::rho_apply(p, empty, 0.0), precondition_error);
}
