#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace singlab {

// Argument outside the mathematical domain of an operation (x <= 0 for K0,
// z <= 0 for ci, z = 0 for log, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A stated precondition was violated (wrong boundary class, d >= 0 where
// d < 0 is required, malformed request, ...).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Normalization root k^2 + (d+ib)^2 vanished; callers must branch explicitly
// at this point instead of receiving an infinity.
class singular_normalization_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Operation evaluated exactly at a point where it has no value (k = b in the
// d = 0 closed form, spectral parameter on the continuous spectrum, ...).
class singularity_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Resolvent requested on the spectrum or at the Jost-function zero.
class pole_error : public singularity_error {
 public:
  pole_error(const std::string& what, double abs_w)
      : singularity_error(what), abs_w_(abs_w) {}
  double abs_w() const noexcept { return abs_w_; }

 private:
  double abs_w_;
};

// Quadrature ran out of subdivisions; carries the best estimate so callers
// can decide whether it is usable.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::complex<double> best,
                    double error_estimate)
      : std::runtime_error(what), best_(best), error_(error_estimate) {}
  std::complex<double> best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return error_; }

 private:
  std::complex<double> best_;
  double error_;
};

// Semi-infinite tail shows no decay: the integral does not exist.
class divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase fit asked for on a window with too few oscillation periods.
class insufficient_data_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

// Resonance scan found no interior cross-section maximum.
class no_resonance_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace singlab
