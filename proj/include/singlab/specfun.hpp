#pragma once

#include <complex>
#include <optional>

namespace singlab::specfun {

// Euler-Mascheroni constant, 20 digits.
inline constexpr double euler_gamma = 0.57721566490153286061;

enum class BranchMode {
  principal,             // Arg in (-pi, pi]
  positive_definite_root  // sqrt sign continuous in k, the branch selected by
                          // positivity of the metric square root
};

struct BranchChoice {
  BranchMode mode = BranchMode::principal;
};

// Modified Bessel function K0. Relative error <= 1e-12 on (0, 700];
// underflows to 0 beyond ~742. Throws domain_error for x <= 0.
double bessel_k0(double x);

// Sine integral Si(z) = int_0^z sin t / t dt, odd in z.
double sine_integral_si(double z);

// Cosine integral Ci(z) = gamma + ln z + int_0^z (cos t - 1)/t dt, z > 0.
// Throws domain_error for z <= 0; even-argument uses are expressed by the
// caller through Ci(|z|).
double cosine_integral_ci(double z);

// Branch-controlled elementary functions. In positive_definite_root mode a
// single call is anchored at the principal branch (the k -> infinity
// normalization); continuity across Arg = pi crossings along a parameter
// path is provided by BranchTracker below.
std::complex<double> complex_sqrt(std::complex<double> z,
                                  BranchChoice branch = {});
std::complex<double> complex_log(std::complex<double> z,
                                 BranchChoice branch = {});

// Accumulates a continuous argument along a sampled path z(t0), z(t1), ...
// and returns the square root on that continuous branch. The first sample
// anchors at the principal branch; subsequent samples unwind the argument by
// the nearest-multiple rule, so the result never jumps as the path crosses
// the negative real axis (jumps bounded by the path's own sampling density).
class BranchTracker {
 public:
  std::complex<double> sqrt_step(std::complex<double> z);
  void reset();

 private:
  std::optional<double> arg_;  // accumulated continuous argument
};

}  // namespace singlab::specfun
