#include "singlab/specfun.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include "singlab/dd.hpp"
#include "singlab/errors.hpp"

namespace singlab::specfun {

namespace {

constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// K0. Power series
//   K0 = -(ln(x/2) + gamma) I0(x) + sum_{n>=1} (x^2/4)^n / (n!)^2 * H_n
// loses ~log10(e^{2x}) digits to cancellation, so the series is evaluated in
// double precision only for x <= 2 and in double-double for 2 < x <= 18; the
// asymptotic expansion takes over beyond 18 (its optimal truncation error is
// ~3e-15 there and falls off exponentially).
// ---------------------------------------------------------------------------

double k0_series_double(double x) {
  double q = 0.25 * x * x;
  double log_term = -(std::log(0.5 * x) + euler_gamma);
  double i0_term = 1.0;   // (q^n)/(n!)^2
  double h = 0.0;         // harmonic number H_n
  double sum = log_term;  // n = 0 contribution
  for (int n = 1; n <= 30; ++n) {
    i0_term *= q / (static_cast<double>(n) * n);
    h += 1.0 / n;
    double t = i0_term * (log_term + h);
    sum += t;
    if (std::fabs(t) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double k0_series_dd(double x) {
  using namespace detail;
  dd q = mul(two_prod(x, x), 0.25);
  dd log_term = neg(add(dd_log(mul(dd{x}, 0.5)), dd_euler_gamma()));
  dd i0_term{1.0};
  dd h{0.0};
  dd sum = log_term;
  for (int n = 1; n <= 60; ++n) {
    i0_term = div(mul(i0_term, q), static_cast<double>(n) * n);
    // 1/n must enter in dd: a double-rounded reciprocal injects ~1e-16 I0(x)
    // of noise, which swamps K0 near x = 18 where e^{2x} digits cancel.
    h = add(h, div(dd{1.0}, static_cast<double>(n)));
    dd t = mul(i0_term, add(log_term, h));
    sum = add(sum, t);
    if (std::fabs(t.hi) < 1e-34 * std::fabs(sum.hi)) break;
  }
  return sum.hi + sum.lo;
}

double k0_asymptotic(double x) {
  // K0 ~ sqrt(pi/2x) e^{-x} sum_k (-1)^k ((2k-1)!!)^2 / (k! (8x)^k)
  double sum = 1.0;
  double term = 1.0;
  double prev = std::fabs(term);
  for (int k = 1; k <= 40; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= -(odd * odd) / (k * 8.0 * x);
    if (std::fabs(term) >= prev) break;  // past optimal truncation
    prev = std::fabs(term);
    sum += term;
    if (prev < 1e-17 * std::fabs(sum)) break;
  }
  return std::sqrt(pi / (2.0 * x)) * std::exp(-x) * sum;
}

// Chebyshev proxy of the dd series on the mid range, for the hot kernel
// path: interpolates e^x sqrt(x) K0(x) in u = 1/x on [1/18, 1/2]. The
// function is analytic on the interval but has an essential singularity at
// u = 0 just outside it, which caps the geometric convergence rate near
// rho ~ 2; 64 nodes leave comfortable margin below 1e-13.
constexpr int cheb_n = 64;
constexpr double cheb_a = 1.0 / 18.0;
constexpr double cheb_b = 0.5;
std::array<double, cheb_n> cheb_coef;
std::once_flag cheb_once;

void build_cheb() {
  std::array<double, cheb_n> fv;
  for (int j = 0; j < cheb_n; ++j) {
    double t = std::cos(pi * (j + 0.5) / cheb_n);
    double u = 0.5 * (cheb_a + cheb_b) + 0.5 * (cheb_b - cheb_a) * t;
    double x = 1.0 / u;
    fv[j] = k0_series_dd(x) * std::exp(x) * std::sqrt(x);
  }
  for (int m = 0; m < cheb_n; ++m) {
    double s = 0.0;
    for (int j = 0; j < cheb_n; ++j)
      s += fv[j] * std::cos(pi * m * (j + 0.5) / cheb_n);
    cheb_coef[m] = 2.0 * s / cheb_n;
  }
}

double k0_mid(double x) {
  std::call_once(cheb_once, build_cheb);
  double u = 1.0 / x;
  double t = (2.0 * u - cheb_a - cheb_b) / (cheb_b - cheb_a);
  double b1 = 0.0, b2 = 0.0;
  for (int m = cheb_n - 1; m >= 1; --m) {
    double bk = 2.0 * t * b1 - b2 + cheb_coef[m];
    b2 = b1;
    b1 = bk;
  }
  double f = t * b1 - b2 + 0.5 * cheb_coef[0];
  return f * std::exp(-x) / std::sqrt(x);
}

// ---------------------------------------------------------------------------
// Si / Ci. Same three-regime structure: the Taylor series alternate with
// intermediate terms ~e^z, so double handles z <= 8, double-double carries
// 8 < z < 36, and the asymptotic auxiliary expansions f, g serve z >= 36:
//   si = pi/2 - f cos z - g sin z,  ci = f sin z - g cos z.
// ---------------------------------------------------------------------------

struct SiCi {
  double si;
  double ci;  // NaN when not computed (z outside Ci domain handled upstream)
};

SiCi sici_taylor_double(double z) {
  double z2 = z * z;
  double u = z;    // z^{2n+1}/(2n+1)!
  double si = z;   // n = 0 term
  double v = 1.0;  // z^{2n}/(2n)!
  double cin = 0.0;
  for (int n = 1; n <= 40; ++n) {
    v *= z2 / ((2.0 * n - 1.0) * (2.0 * n));
    u *= z2 / ((2.0 * n) * (2.0 * n + 1.0));
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    si += sgn * u / (2.0 * n + 1.0);
    cin += -sgn * v / (2.0 * n);  // Cin has opposite alternation
    if (u < 1e-18 && v < 1e-18) break;
  }
  return {si, euler_gamma + std::log(z) - cin};
}

SiCi sici_taylor_dd(double z) {
  using namespace detail;
  dd z2 = two_prod(z, z);
  dd u{z};
  dd si{z};
  dd v{1.0};
  dd cin{0.0};
  for (int n = 1; n <= 95; ++n) {
    v = div(mul(v, z2), (2.0 * n - 1.0) * (2.0 * n));
    u = div(mul(u, z2), (2.0 * n) * (2.0 * n + 1.0));
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    si = add(si, mul(div(u, 2.0 * n + 1.0), sgn));
    cin = add(cin, mul(div(v, 2.0 * n), -sgn));
    if (std::fabs(u.hi) < 1e-34 && std::fabs(v.hi) < 1e-34) break;
  }
  dd ci = add(sub(dd_log(dd{z}), cin), dd_euler_gamma());
  return {si.hi + si.lo, ci.hi + ci.lo};
}

SiCi sici_asymptotic(double z) {
  // f ~ (1/z) sum (-1)^n (2n)!/z^{2n}, g ~ (1/z^2) sum (-1)^n (2n+1)!/z^{2n}
  double z2 = z * z;
  double f = 1.0, g = 1.0;
  double tf = 1.0, tg = 1.0;
  double prev_f = 1.0, prev_g = 1.0;
  bool f_done = false, g_done = false;
  for (int n = 1; n <= 30 && !(f_done && g_done); ++n) {
    if (!f_done) {
      tf *= -(2.0 * n - 1.0) * (2.0 * n) / z2;
      if (std::fabs(tf) >= prev_f) {
        f_done = true;
      } else {
        prev_f = std::fabs(tf);
        f += tf;
        if (prev_f < 1e-17) f_done = true;
      }
    }
    if (!g_done) {
      tg *= -(2.0 * n) * (2.0 * n + 1.0) / z2;
      if (std::fabs(tg) >= prev_g) {
        g_done = true;
      } else {
        prev_g = std::fabs(tg);
        g += tg;
        if (prev_g < 1e-17) g_done = true;
      }
    }
  }
  f /= z;
  g /= z2;
  double s = std::sin(z), c = std::cos(z);
  return {0.5 * pi - f * c - g * s, f * s - g * c};
}

SiCi sici_positive(double z) {
  if (z <= 8.0) return sici_taylor_double(z);
  if (z < 36.0) return sici_taylor_dd(z);
  return sici_asymptotic(z);
}

}  // namespace

double bessel_k0(double x) {
  if (!(x > 0.0)) throw domain_error("bessel_k0: requires x > 0");
  if (x <= 2.0) return k0_series_double(x);
  if (x <= 18.0) return k0_mid(x);
  return k0_asymptotic(x);
}

double sine_integral_si(double z) {
  if (z == 0.0) return 0.0;
  double s = sici_positive(std::fabs(z)).si;
  return z > 0.0 ? s : -s;
}

double cosine_integral_ci(double z) {
  if (!(z > 0.0)) throw domain_error("cosine_integral_ci: requires z > 0");
  return sici_positive(z).ci;
}

std::complex<double> complex_sqrt(std::complex<double> z, BranchChoice) {
  // Both modes coincide for a single evaluation: the positive-definite-root
  // branch is anchored at the principal sheet (value +|.| on the positive
  // real axis, the large-k normalization); path continuity across the cut is
  // the job of BranchTracker.
  return std::sqrt(z);
}

std::complex<double> complex_log(std::complex<double> z, BranchChoice) {
  if (z == std::complex<double>(0.0, 0.0))
    throw domain_error("complex_log: log(0) undefined");
  return std::log(z);
}

std::complex<double> BranchTracker::sqrt_step(std::complex<double> z) {
  double raw = std::arg(z);
  if (!arg_) {
    arg_ = raw;
  } else {
    // nearest representative of raw's 2pi class to the running argument
    double k = std::round((*arg_ - raw) / (2.0 * pi));
    arg_ = raw + 2.0 * pi * k;
  }
  return std::polar(std::sqrt(std::abs(z)), 0.5 * *arg_);
}

void BranchTracker::reset() { arg_.reset(); }

}  // namespace singlab::specfun
