#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace singlab::quad {

enum class TruncationPolicy {
  exponential_decay,      // panel magnitudes fall off geometrically
  oscillatory_tail        // fixed panels of one half-period + extrapolation
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  TruncationPolicy truncation = TruncationPolicy::exponential_decay;
  std::vector<double> singular_points;  // become permanent panel boundaries
  // Dominant angular frequency of the tail oscillation; required by the
  // oscillatory_tail policy (panel length = pi / osc_frequency).
  double osc_frequency = 0.0;
};

struct QuadResult {
  std::complex<double> value{};
  double error = 0.0;       // estimated, not guaranteed
  long evaluations = 0;     // integrand call count
};

using Integrand = std::function<std::complex<double>(double)>;

// Adaptive Gauss-Legendre pair (12/24 nodes) with bisection. Declared
// singular points are pinned as panel boundaries for the whole refinement,
// and since all nodes are interior the integrand is never evaluated at one.
// Throws convergence_error (carrying the best estimate) when
// max_subdivisions is exhausted.
QuadResult integrate_finite(const Integrand& f, double a, double b,
                            const QuadratureSpec& spec = {});

// Semi-infinite integral from a. exponential_decay: panels of geometrically
// growing length, stopping once two consecutive panels are negligible.
// oscillatory_tail: fixed half-period panels with epsilon-algorithm
// extrapolation of the partial sums. Throws divergence_error when panel
// magnitudes show no decay.
QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                   const QuadratureSpec& spec = {});

// Limit of a slowly converging complex sequence via Wynn's epsilon
// algorithm (used on oscillatory partial sums; exposed for reuse).
std::complex<double> epsilon_limit(const std::vector<std::complex<double>>& s);

}  // namespace singlab::quad
