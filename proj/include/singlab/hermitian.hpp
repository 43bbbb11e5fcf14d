#pragma once

#include <complex>
#include <vector>

#include "singlab/grid.hpp"
#include "singlab/model.hpp"
#include "singlab/quad.hpp"

namespace singlab::hermitian {

// J(x,y) = 1/2 K0(|d||y-x|) - 1/2 K0(|d|(y+x)); the closed form of
// int_0^inf sin(k'x) sin(k'y)/sqrt(k'^2+d^2) dk'. Symmetric, positive for
// x,y > 0, depends on d only through |d|. Throws singularity_error at x = y
// (integrable log singularity, to be declared to the quadrature) and
// precondition_error for d = 0 or (x,y) = (0,0).
double kernel_J(const model::ModelParams& p, double x, double y);

// I(x) = int_0^inf e^{iby} sin(ky) J(x,y) dy (semi-infinite, log-singular at
// y = x, oscillatory tail). Exposed for diagnostics.
std::complex<double> eta_half_integral(const model::ModelParams& p, double k,
                                       double x,
                                       const quad::QuadratureSpec& spec = {});

// Fraction of |I(x)| contributed by the K0(|d|(x+y)) part of the kernel;
// decays like e^{-2|d|x} and controls where the far-field fit may start.
double i2_fraction(const model::ModelParams& p, double k, double x,
                   const quad::QuadratureSpec& spec = {});

// Eigenfunction of the equivalent Hermitian Hamiltonian by the integral
// representation Phi_k = (2/pi)^{3/2} L[e^{-ibx} I(x)], the first-order
// operator applied through a five-point stencil on I (one-sided near x = 0).
// Requires d < 0. Grid evaluation is parallel over points.
GridFunction phi_cap_k_numeric(const model::ModelParams& p, double k,
                               const std::vector<double>& grid,
                               const quad::QuadratureSpec& spec = {});

// Same eigenfunction through the spectral representation
//   Phi_k = [k^2+(d+ib)^2]^{-1} eta^{1/2} Lstar psi_k,
// realized semi-analytically: the kappa integrand of eta^{1/2} against the
// scattering state splits into delta terms (kappa = k+b and |k-b|) plus a
// principal-value integral whose tail is corrected analytically. Requires
// d < 0.
GridFunction phi_cap_k_spectral(const model::ModelParams& p, double k,
                                const std::vector<double>& grid,
                                const quad::QuadratureSpec& spec = {});

struct PhaseExtraction {
  double delta = 0.0;      // radians, reported in (-pi/2, pi/2]
  double amplitude = 0.0;
  double residual = 0.0;   // RMS misfit of A sin(kx + delta) over the window
  double x_min = 0.0;
  double x_max = 0.0;
  bool poor_fit = false;   // residual > 0.05 * amplitude
};

// Linear least squares of samples against A sin(kx) cos(delta) +
// A cos(kx) sin(delta) over [x_min, x_max]. Throws insufficient_data_error
// when the window spans fewer than 8 oscillation periods.
PhaseExtraction extract_phase_shift(const GridFunction& samples, double k,
                                    double x_min, double x_max);

// A(x,y) = (1/pi) e^{ib(y-x)} log|(x+y)/(x-y)|, the d = 0 limit kernel.
// Throws singularity_error at x = y and precondition_error at (0,0).
std::complex<double> kernel_A(double b, double x, double y);

// Closed form of Phi_k at the spectral-singularity parameter d = 0, b > 0:
//   sqrt(2/pi^3) e^{-ibx} i { cos[(b-k)x] Ci(|b-k|x) - cos[(b+k)x] Ci[(b+k)x]
//                             + sin[(b-k)x] Si[(b-k)x] - sin[(b+k)x] Si[(b+k)x] }
//   + sqrt(2/pi) e^{-ibx} sin(bx) sin(kx)
//   + (1/sqrt(2pi)) (sign(b-k) - 1) e^{-ibx} cos[(b-k)x],
// with the x = 0 limit of the brace ln(|b-k|/(b+k)). Undefined at k = b
// (throws singularity_error); b < 0 handled by conjugation symmetry.
std::complex<double> phi_cap_k_singular(double b, double k, double x);

// Quadrature route L int_0^R A(x,y) psi_k(y) dy at d = 0. With
// accelerate = true the tail beyond R is summed by oscillatory
// extrapolation (cross-check mode, k != b); with accelerate = false the
// integral is truncated at R literally, exposing the logarithmic growth of
// the imaginary part at k = b.
std::complex<double> phi_cap_k_singular_quad(double b, double k, double x,
                                             double radius, bool accelerate,
                                             const quad::QuadratureSpec& spec = {});

}  // namespace singlab::hermitian
