#include "singlab/model.hpp"

#include <cmath>

#include "singlab/specfun.hpp"

namespace singlab::model {

namespace {

constexpr double pi = 3.14159265358979323846;

// sqrt(2/pi) phi-normalization and the shared root [k^2 + (d+ib)^2]^{1/2}
std::complex<double> norm_root(const ModelParams& p, double k) {
  std::complex<double> a = p.robin_coef();
  std::complex<double> n = k * k + a * a;
  if (std::abs(n) == 0.0)
    throw singular_normalization_error(
        "phi_k: k^2 + (d+ib)^2 = 0 (spectral singularity)");
  return specfun::complex_sqrt(n);
}

}  // namespace

std::complex<double> phi_k(const ModelParams& p, double k, double x) {
  std::complex<double> a = p.robin_coef();
  return std::sqrt(2.0 / pi) / norm_root(p, k) *
         (a * std::sin(k * x) - k * std::cos(k * x));
}

std::complex<double> phi_k_dx(const ModelParams& p, double k, double x) {
  std::complex<double> a = p.robin_coef();
  return std::sqrt(2.0 / pi) / norm_root(p, k) * k *
         (a * std::cos(k * x) + k * std::sin(k * x));
}

std::complex<double> phi_k_dxx(const ModelParams& p, double k, double x) {
  return -k * k * phi_k(p, k, x);
}

std::complex<double> jost_function(const ModelParams& p,
                                   std::complex<double> k) {
  return std::complex<double>(0.0, 1.0) * k + p.robin_coef();
}

std::complex<double> resolvent_kernel(const ModelParams& p, double x,
                                      double xi,
                                      std::complex<double> lambda) {
  if (x < 0.0 || xi < 0.0)
    throw precondition_error("resolvent_kernel: x, xi must be >= 0");
  // Physical sheet: k = i sqrt(-lambda) maps the lambda plane cut along
  // [0, inf) onto Im k > 0; Im k = 0 exactly on the cut.
  std::complex<double> k =
      std::complex<double>(0.0, 1.0) * specfun::complex_sqrt(-lambda);
  if (k.imag() <= 0.0) {
    double w = std::abs(jost_function(p, k));
    throw pole_error("resolvent_kernel: lambda on the continuous spectrum",
                     w);
  }
  std::complex<double> w = jost_function(p, k);
  double scale = std::max(1.0, std::abs(k));
  if (std::abs(w) < 1e-12 * scale)
    throw pole_error("resolvent_kernel: lambda at the discrete eigenvalue",
                     std::abs(w));
  double lo = std::min(x, xi), hi = std::max(x, xi);
  std::complex<double> a = p.robin_coef();
  // phi(x,lambda) = cos(kx) - a sin(kx)/k, entire in lambda
  std::complex<double> phi = std::cos(k * lo) - a * std::sin(k * lo) / k;
  std::complex<double> e =
      std::exp(std::complex<double>(0.0, 1.0) * k * hi);
  return -phi * e / w;
}

SpectrumClass classify_spectrum(const ModelParams& p) {
  SpectrumClass s;
  s.jost_zero_k = {-p.b, p.d};
  if (p.d < 0.0) {
    s.kind = SpectrumKind::regular;
  } else if (p.d == 0.0) {
    s.kind = SpectrumKind::spectral_singularity;
    s.singular_k = std::fabs(p.b);
    s.singular_energy = p.b * p.b;
  } else {
    s.kind = SpectrumKind::bound_state;
    s.bound_energy = s.jost_zero_k * s.jost_zero_k;
  }
  return s;
}

}  // namespace singlab::model
