#pragma once

#include <complex>

#include "singlab/model.hpp"

namespace singlab::scattering {

struct ScatteringPoint {
  double k = 0.0;
  double delta = 0.0;
  std::complex<double> s_value{};
  double sigma = 0.0;
};

struct ResonanceFit {
  double e0 = 0.0;          // fitted resonance energy
  double gamma = 0.0;       // fitted width, positive
  double peak_sigma = 0.0;  // refined maximum of the scanned cross section
  double fit_residual = 0.0;
};

// Phase shift delta(k) = (phi1 + phi2)/2 with the two half-arguments taken
// as separate principal logs:
//   phi1 = Arg[(d+i(b-k))/(d+i(k-b))]/2, phi2 = Arg[(d-i(k+b))/(d+i(k+b))]/2.
// Continuous in k with delta(0+) = 0 and delta -> pi/2 at large k. At d = 0
// the d -> 0- limit applies: 0 below k = b, pi/2 above, singular at k = b.
double phase_shift(const model::ModelParams& p, double k);

// S(k) = e^{2i delta(k)}; unimodular, S^2 equals the Breit-Wigner ratio
// [b^2+(d-ik)^2]/[b^2+(d+ik)^2] identically.
std::complex<double> s_matrix(const model::ModelParams& p, double k);

// Cross section sigma(k) = (2pi/k^2)[1 + (k^2-b^2-d^2)/sqrt((k^2+d^2-b^2)^2
// + 4 b^2 d^2)]. At d = 0 this degenerates to a step (0 below k = b,
// 4pi/k^2 above, singular at k = b).
double sigma(const model::ModelParams& p, double k);

// Breit-Wigner Lorentzian in E = k^2: (4pi/b^2) (G/2)^2 /((E-E0)^2 + (G/2)^2)
// with E0 = b^2 - d^2 and G = 4 b |d|.
double sigma_bw(const model::ModelParams& p, double E);

ScatteringPoint scattering_point(const model::ModelParams& p, double k);

// Dense sigma scan over [k_min, k_max] (n_points samples), golden-section
// refinement of the interior maximum, then a linear least-squares Lorentzian
// fit in the energy variable on the Breit-Wigner channel (4pi/E) sin^2(2
// delta) near the peak. peak_sigma is the refined maximum of sigma itself;
// fit_residual is the RMS relative misfit of the fitted Lorentzian against
// the channel values on the fit window. Preconditions: d < 0, |d| <
// b/sqrt(2), range brackets sqrt(b^2-d^2). Throws no_resonance_error when no
// interior maximum exists.
ResonanceFit find_resonance(const model::ModelParams& p, double k_min,
                            double k_max, int n_points);

}  // namespace singlab::scattering
