#pragma once

#include <complex>
#include <optional>

#include "singlab/errors.hpp"

namespace singlab::model {

// Parameters of the Hamiltonian family: H = -d^2/dx^2 on x >= 0 with the
// Robin condition phi'(0) + (d+ib) phi(0) = 0. b = 0 collapses the family
// to the Hermitian case and is rejected.
struct ModelParams {
  double b;
  double d;

  ModelParams(double b_, double d_) : b(b_), d(d_) {
    if (b == 0.0)
      throw precondition_error("ModelParams: b must be nonzero");
  }

  std::complex<double> robin_coef() const {  // d + ib
    return {d, b};
  }
};

enum class SpectrumKind { regular, spectral_singularity, bound_state };

struct SpectrumClass {
  SpectrumKind kind;
  // Zero of the Jost function in the complex k-plane, always -b + id.
  std::complex<double> jost_zero_k;
  // Present iff kind == spectral_singularity (then = b, energy b^2).
  std::optional<double> singular_k;
  std::optional<double> singular_energy;
  // Present iff kind == bound_state; the discrete eigenvalue (-b+id)^2,
  // complex in general.
  std::optional<std::complex<double>> bound_energy;
};

// Continuum eigenfunction, delta-normalized:
//   phi_k(x) = sqrt(2/pi) [k^2+(d+ib)^2]^{-1/2} [(d+ib) sin kx - k cos kx].
// Throws singular_normalization_error when k^2+(d+ib)^2 = 0 (d = 0, k = b).
std::complex<double> phi_k(const ModelParams& p, double k, double x);
std::complex<double> phi_k_dx(const ModelParams& p, double k, double x);
std::complex<double> phi_k_dxx(const ModelParams& p, double k, double x);

// Jost function W(lambda) = ik + d + ib, lambda = k^2; entire in k.
std::complex<double> jost_function(const ModelParams& p,
                                   std::complex<double> k);

// Kernel of (H - lambda)^{-1}:
//   R(x,xi) = -phi(x<,lambda) e(x>,k) / W,  Im k > 0,
// with phi(x,lambda) = cos(sqrt(lambda) x) - (d+ib) sin(sqrt(lambda) x)/sqrt(lambda)
// built from functions even in sqrt(lambda). Throws pole_error on the
// continuous spectrum or at the W zero.
std::complex<double> resolvent_kernel(const ModelParams& p, double x,
                                      double xi, std::complex<double> lambda);

// Pure function of sign(d): d<0 regular, d=0 spectral singularity at k=b,
// d>0 bound state at the Jost zero -b+id.
SpectrumClass classify_spectrum(const ModelParams& p);

}  // namespace singlab::model
