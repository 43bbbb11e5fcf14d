#pragma once

// Images of an AnalyticTestFunction under the first-order ladder operators,
// with derivative maps shifted accordingly. The fourth derivative of the
// image would need the fifth of the source, so it is left unusable (NaN);
// the factorization checks only reach the image's second derivative.

#include <complex>
#include <limits>

#include "singlab/metric.hpp"
#include "singlab/model.hpp"

namespace testsupport {

inline singlab::metric::AnalyticTestFunction first_order_image(
    std::complex<double> c_deriv, std::complex<double> c_id,
    const singlab::metric::AnalyticTestFunction& f) {
  using singlab::metric::AnalyticTestFunction;
  AnalyticTestFunction g;
  auto f0 = f.f, f1 = f.f1, f2 = f.f2, f3 = f.f3, f4 = f.f4;
  g.f = [=](double x) { return c_deriv * f1(x) + c_id * f0(x); };
  g.f1 = [=](double x) { return c_deriv * f2(x) + c_id * f1(x); };
  g.f2 = [=](double x) { return c_deriv * f3(x) + c_id * f2(x); };
  g.f3 = [=](double x) { return c_deriv * f4(x) + c_id * f3(x); };
  g.f4 = [](double) {
    return std::complex<double>(std::numeric_limits<double>::quiet_NaN(), 0.0);
  };
  g.decay_rate = f.decay_rate;
  g.bc = singlab::metric::BcClass::none;
  g.name = f.name + "-image";
  return g;
}

// g = L f = -f' + (d-ib) f
inline singlab::metric::AnalyticTestFunction image_of_L(
    const singlab::model::ModelParams& p,
    const singlab::metric::AnalyticTestFunction& f) {
  return first_order_image({-1.0, 0.0}, {p.d, -p.b}, f);
}

// g = Ldag f = f' + (d+ib) f
inline singlab::metric::AnalyticTestFunction image_of_Ldag(
    const singlab::model::ModelParams& p,
    const singlab::metric::AnalyticTestFunction& f) {
  return first_order_image({1.0, 0.0}, {p.d, p.b}, f);
}

// g = Lstar f = -f' + (d+ib) f
inline singlab::metric::AnalyticTestFunction image_of_Lstar(
    const singlab::model::ModelParams& p,
    const singlab::metric::AnalyticTestFunction& f) {
  return first_order_image({-1.0, 0.0}, {p.d, p.b}, f);
}

// Plain Dirichlet sine wave scale*sin(kx) with exact derivatives.
inline singlab::metric::AnalyticTestFunction sine_testfn(double k,
                                                         double scale) {
  using singlab::metric::AnalyticTestFunction;
  AnalyticTestFunction g;
  g.f = [=](double x) { return std::complex<double>(scale * std::sin(k * x)); };
  g.f1 = [=](double x) {
    return std::complex<double>(scale * k * std::cos(k * x));
  };
  g.f2 = [=](double x) {
    return std::complex<double>(-scale * k * k * std::sin(k * x));
  };
  g.f3 = [=](double x) {
    return std::complex<double>(-scale * k * k * k * std::cos(k * x));
  };
  g.f4 = [=](double x) {
    return std::complex<double>(scale * k * k * k * k * std::sin(k * x));
  };
  g.decay_rate = 0.0;
  g.bc = singlab::metric::BcClass::dirichlet;
  g.name = "sine";
  return g;
}

}  // namespace testsupport
