#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "singlab/grid.hpp"
#include "singlab/model.hpp"
#include "singlab/quad.hpp"

namespace singlab::metric {

// Boundary class at x = 0 of a test function:
//   robin_H:        f'(0) + (d+ib) f(0) = 0   (domain of H and eta)
//   robin_H_dagger: f'(0) + (d-ib) f(0) = 0   (domain of H^dagger)
//   dirichlet:      f(0) = 0                  (domain of eta-tilde)
enum class BcClass { robin_H, robin_H_dagger, dirichlet, none };

// Closed-form test function with exact derivatives through fourth order.
struct AnalyticTestFunction {
  using Map = std::function<std::complex<double>(double)>;
  Map f, f1, f2, f3, f4;
  double decay_rate = 1.0;
  BcClass bc = BcClass::none;
  std::string name;
};

// Exponential-polynomial catalog: for each decay alpha in {0.5, 1, 2} one
// member per boundary class, e.g. (1 + (alpha-d-ib)x) e^{-alpha x} for
// robin_H and x e^{-alpha x} for dirichlet.
std::vector<AnalyticTestFunction> test_function_catalog(
    const model::ModelParams& p);

// First-order ladder operators and the metric expression:
//   L = -d/dx + d - ib,  Ldag = d/dx + d + ib,  Lstar = -d/dx + d + ib,
//   eta = -d^2/dx^2 - 2ib d/dx + d^2 + b^2  ( = L Ldag as expressions).
// eta-tilde is the same differential expression on the Dirichlet domain.
std::complex<double> apply_L(const model::ModelParams& p,
                             const AnalyticTestFunction& f, double x);
std::complex<double> apply_Ldag(const model::ModelParams& p,
                                const AnalyticTestFunction& f, double x);
std::complex<double> apply_Lstar(const model::ModelParams& p,
                                 const AnalyticTestFunction& f, double x);
std::complex<double> apply_eta(const model::ModelParams& p,
                               const AnalyticTestFunction& f, double x);
std::complex<double> apply_eta_tilde(const model::ModelParams& p,
                                     const AnalyticTestFunction& f, double x);

// Eigenfunctions of eta and eta-tilde:
//   Psi_k      = sqrt(2/pi) (k^2+d^2)^{-1/2} e^{-ibx} (d sin kx - k cos kx)
//   Psi~_k     = sqrt(2/pi) e^{-ibx} sin kx
// psi_k throws domain_error at k = d = 0 (zero norm).
std::complex<double> psi_k(const model::ModelParams& p, double k, double x);
std::complex<double> psi_tilde_k(const model::ModelParams& p, double k,
                                 double x);

// Exact-derivative wrappers for use with the apply_* operators.
AnalyticTestFunction make_psi_k_testfn(const model::ModelParams& p, double k);
AnalyticTestFunction make_psi_tilde_k_testfn(const model::ModelParams& p,
                                             double k);

// Square-integrable packet: value map plus a radius beyond which it is
// negligible at working precision.
struct Packet {
  std::function<std::complex<double>(double)> f;
  double support_radius;
};

struct RhoResult {
  GridFunction out;
  bool unbounded_inverse_warning = false;  // power < 0 with d = 0
  double truncation_k = 0.0;               // upper end of the kappa integral
};

// eta^power applied through the spectral integral
//   eta^power g = int_0^inf dkappa (kappa^2+d^2)^power Psi_kappa <Psi_kappa|g>,
// kappa truncated where (kappa^2+d^2)^power |<Psi_kappa|g>| stays below
// abs_tol/100. Output sampled on out_grid (callable form) or on g's own grid.
RhoResult rho_apply(const model::ModelParams& p, const Packet& g,
                    const std::vector<double>& out_grid, double power,
                    const quad::QuadratureSpec& spec = {});
RhoResult rho_apply(const model::ModelParams& p, const GridFunction& g,
                    double power, const quad::QuadratureSpec& spec = {});

enum class IntertwiningRelation {
  etaH_vs_Hdag_eta,       // eta H = H^dagger eta        (needs robin_H)
  Ldag_eta_vs_etatilde_Ldag,  // Ldag eta = eta~ Ldag
  eta_L_vs_L_etatilde     // eta L = L eta~
};

struct IntertwiningReport {
  double sup_residual = 0.0;   // sup |LHS f - RHS f| / sup |f| on the grid
  double sup_lhs = 0.0;
  double sup_rhs = 0.0;
  // Closed-form boundary defect <f|eta f> - <eta f|f> =
  // f*(0) f'(0) - (f*)'(0) f(0) + 2ib |f(0)|^2; zero iff f is robin_H.
  // The differential expressions commute for any smooth f, so this is the
  // quantity that actually detects a boundary-class violation.
  double boundary_defect = 0.0;
  std::vector<double> grid;
};

// Evaluates both sides of the relation on x in [0, 20] and reports the
// normalized sup residual plus the boundary defect. Throws
// precondition_error when f's boundary class does not match the relation.
IntertwiningReport verify_intertwining(const model::ModelParams& p,
                                       const AnalyticTestFunction& f,
                                       IntertwiningRelation which);

}  // namespace singlab::metric
