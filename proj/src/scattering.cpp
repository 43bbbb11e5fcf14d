#include "singlab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace singlab::scattering {

namespace {

constexpr double pi = 3.14159265358979323846;
using cplx = std::complex<double>;

double require_positive_k(double k, const char* who) {
  if (!(k > 0.0))
    throw precondition_error(std::string(who) + ": requires k > 0");
  return k;
}

// golden-section maximum refinement on a bracket
template <typename F>
double golden_max(const F& f, double lo, double hi) {
  constexpr double inv_phi = 0.61803398874989485;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double phase_shift(const model::ModelParams& p, double k) {
  require_positive_k(k, "phase_shift");
  double b = p.b, d = p.d;
  if (d == 0.0) {
    double kb = std::fabs(b);
    if (k == kb)
      throw singularity_error(
          "phase_shift: undefined at the spectral singularity k = |b|");
    // d -> 0- limit of the generic formula
    return k < kb ? 0.0 : 0.5 * pi;
  }
  double phi1 = 0.5 * std::arg(cplx(d, b - k) / cplx(d, k - b));
  double phi2 = 0.5 * std::arg(cplx(d, -(k + b)) / cplx(d, k + b));
  return 0.5 * (phi1 + phi2);
}

std::complex<double> s_matrix(const model::ModelParams& p, double k) {
  return std::exp(cplx(0.0, 2.0 * phase_shift(p, k)));
}

double sigma(const model::ModelParams& p, double k) {
  require_positive_k(k, "sigma");
  double b = p.b, d = p.d;
  double u = k * k - b * b - d * d;
  if (d == 0.0) {
    if (k == std::fabs(b))
      throw singularity_error(
          "sigma: undefined at the spectral singularity k = |b|");
    return u < 0.0 ? 0.0 : 4.0 * pi / (k * k);
  }
  // D^2 = (k^2+d^2-b^2)^2 + 4 b^2 d^2 = u^2 + 4 k^2 d^2; the rationalized
  // form is exact and avoids the cancellation of 1 + u/D near k = 0
  double D = std::hypot(u, 2.0 * k * d);
  if (u <= 0.0) return 8.0 * pi * d * d / (D * (D - u));
  return (2.0 * pi / (k * k)) * (1.0 + u / D);
}

double sigma_bw(const model::ModelParams& p, double E) {
  double e0 = p.b * p.b - p.d * p.d;
  double half_g = 2.0 * std::fabs(p.b * p.d);
  double num = half_g * half_g;
  return (4.0 * pi / (p.b * p.b)) * num /
         ((E - e0) * (E - e0) + half_g * half_g);
}

ScatteringPoint scattering_point(const model::ModelParams& p, double k) {
  ScatteringPoint pt;
  pt.k = k;
  pt.delta = phase_shift(p, k);
  pt.s_value = std::exp(cplx(0.0, 2.0 * pt.delta));
  pt.sigma = sigma(p, k);
  return pt;
}

ResonanceFit find_resonance(const model::ModelParams& p, double k_min,
                            double k_max, int n_points) {
  if (!(p.d < 0.0))
    throw precondition_error("find_resonance: requires d < 0");
  if (!(std::fabs(p.d) < std::fabs(p.b) / std::sqrt(2.0)))
    throw precondition_error("find_resonance: requires |d| < |b|/sqrt(2)");
  double k_res = std::sqrt(p.b * p.b - p.d * p.d);
  if (!(k_min > 0.0) || !(k_min < k_res && k_res < k_max))
    throw precondition_error(
        "find_resonance: scan range must bracket sqrt(b^2 - d^2)");
  if (n_points < 16)
    throw precondition_error("find_resonance: needs at least 16 scan points");

  std::vector<double> ks(n_points), sig(n_points);
  for (int i = 0; i < n_points; ++i) {
    ks[i] = k_min + (k_max - k_min) * i / (n_points - 1.0);
    sig[i] = sigma(p, ks[i]);
  }
  std::size_t imax =
      std::max_element(sig.begin(), sig.end()) - sig.begin();
  if (imax == 0 || imax + 1 == sig.size())
    throw no_resonance_error(
        "find_resonance: no interior cross-section maximum in the range");

  auto s = [&](double k) { return sigma(p, k); };
  double k_peak = golden_max(s, ks[imax - 1], ks[imax + 1]);
  double peak_sigma = s(k_peak);

  // The cross section itself is not Lorentzian: it carries a 1/E prefactor
  // and a square-root branch point, and its maximum sits well above
  // E0 = b^2 - d^2. The Breit-Wigner channel (4pi/E) sin^2(2 delta) is an
  // exact Lorentzian, 16 pi d^2 / [(E - E0)^2 + (Gamma/2)^2], so the fit runs
  // there: its inverse is quadratic in E, and a linear least-squares fit
  // against (t^2, t, 1) with t = E - E_peak recovers the pole parameters.
  double e_peak = k_peak * k_peak;
  double g_prior = 4.0 * std::fabs(p.b * p.d);
  double m[3][3] = {};
  double rhs[3] = {};
  std::vector<double> fit_t, fit_y;
  for (int i = 0; i < n_points; ++i) {
    double E = ks[i] * ks[i];
    if (std::fabs(E - e_peak) > g_prior) continue;
    double s2 = std::sin(2.0 * phase_shift(p, ks[i]));
    double ch = 4.0 * pi / E * s2 * s2;
    if (!(ch > 0.0)) continue;
    double t = E - e_peak;
    fit_t.push_back(t);
    fit_y.push_back(ch);
    double row[3] = {t * t, t, 1.0};
    double y = 1.0 / ch;
    for (int r = 0; r < 3; ++r) {
      rhs[r] += row[r] * y;
      for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
    }
  }
  if (fit_t.size() < 5)
    throw no_resonance_error(
        "find_resonance: too few scan points within one width of the peak");

  // 3x3 Gaussian elimination with partial pivoting
  double a[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a[r][c] = m[r][c];
    a[r][3] = rhs[r];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = col + 1; r < 3; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  double coef[3];
  for (int r = 3; r-- > 0;) {
    double t = a[r][3];
    for (int c = r + 1; c < 3; ++c) t -= a[r][c] * coef[c];
    coef[r] = t / a[r][r];
  }
  double qa = coef[0], qb = coef[1], qc = coef[2];
  if (!(qa > 0.0))
    throw no_resonance_error("find_resonance: inverse-channel fit is not convex");
  double t0 = -qb / (2.0 * qa);
  double w2 = qc / qa - t0 * t0;
  if (!(w2 > 0.0))
    throw no_resonance_error("find_resonance: fitted width is not real");

  ResonanceFit fit;
  fit.e0 = e_peak + t0;
  fit.gamma = 2.0 * std::sqrt(w2);
  fit.peak_sigma = peak_sigma;
  double misfit = 0.0;
  for (std::size_t i = 0; i < fit_t.size(); ++i) {
    double t = fit_t[i];
    double model_ch = 1.0 / (qa * t * t + qb * t + qc);
    double rel = (model_ch - fit_y[i]) / fit_y[i];
    misfit += rel * rel;
  }
  fit.fit_residual = std::sqrt(misfit / fit_t.size());
  return fit;
}

}  // namespace singlab::scattering
