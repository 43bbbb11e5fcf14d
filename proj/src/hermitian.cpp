#include "singlab/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "singlab/parallel.hpp"
#include "singlab/specfun.hpp"

namespace singlab::hermitian {

namespace {

constexpr double pi = 3.14159265358979323846;
using cplx = std::complex<double>;
constexpr cplx iu{0.0, 1.0};

double require_negative_d(const model::ModelParams& p, const char* who) {
  if (!(p.d < 0.0))
    throw precondition_error(std::string(who) + ": requires d < 0");
  return p.d;
}

// E_n(y) = int_y^inf e^{it} t^{-n} dt by upward recursion from
// E_1 = -Ci(y) + i (pi/2 - Si(y)); used for the analytic large-kappa tail
cplx exp_moment(int n, double y) {
  cplx e{-specfun::cosine_integral_ci(y),
         0.5 * pi - specfun::sine_integral_si(y)};
  cplx phase = std::exp(iu * y);
  for (int m = 1; m < n; ++m) e = phase / (m * std::pow(y, m)) + iu * e / static_cast<double>(m);
  return e;
}

// five-point first derivative of a sampled map, one-sided near the left edge
template <typename F>
cplx stencil_derivative(const F& f, double x, double h, cplx* center) {
  if (x >= 2.0 * h) {
    cplx m2 = f(x - 2.0 * h), m1 = f(x - h), p1 = f(x + h), p2 = f(x + 2.0 * h);
    if (center) *center = f(x);
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  }
  cplx f0 = f(x), f1 = f(x + h), f2 = f(x + 2.0 * h), f3 = f(x + 3.0 * h),
       f4 = f(x + 4.0 * h);
  if (center) *center = f0;
  return (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) /
         (12.0 * h);
}

cplx half_kernel_integral(const model::ModelParams& p, double k, double x,
                          const quad::QuadratureSpec& spec, bool full,
                          bool reflected_only) {
  double ad = std::fabs(p.d);
  quad::QuadratureSpec s = spec;
  s.truncation = quad::TruncationPolicy::exponential_decay;
  s.singular_points.clear();
  if (full && x > 0.0) s.singular_points.push_back(x);
  auto f = [&, ad](double y) -> cplx {
    double direct = 0.0;
    if (full) {
      double r = std::max(std::fabs(y - x), 1e-30);
      direct = 0.5 * specfun::bessel_k0(ad * r);
    }
    double sum = x + y;
    double reflected =
        sum > 0.0 ? 0.5 * specfun::bessel_k0(std::max(ad * sum, 1e-30)) : 0.0;
    double kern = reflected_only ? -reflected : direct - reflected;
    return std::exp(iu * p.b * y) * std::sin(k * y) * kern;
  };
  return quad::integrate_semi_infinite(f, 0.0, s).value;
}

struct PoleSet {
  double lo = 0.0, hi = 0.0;  // pole positions, lo may be absent
  bool has_lo = false;
  double h_lo = 0.0, h_hi = 0.0;
};

PoleSet make_poles(double b, double k) {
  PoleSet ps;
  ps.hi = k + b;
  double lo = std::fabs(k - b);
  if (lo > 1e-12) {
    ps.has_lo = true;
    ps.lo = lo;
    double h = std::min(0.25, 0.45 * (ps.hi - ps.lo));
    ps.h_lo = std::min(h, 0.9 * ps.lo);
    ps.h_hi = h;
  } else {
    ps.h_hi = 0.25;
  }
  return ps;
}

}  // namespace

double kernel_J(const model::ModelParams& p, double x, double y) {
  if (p.d == 0.0)
    throw precondition_error("kernel_J: requires d != 0");
  if (x < 0.0 || y < 0.0)
    throw precondition_error("kernel_J: x, y must be >= 0");
  if (x == 0.0 && y == 0.0)
    throw precondition_error("kernel_J: undefined at the corner (0,0)");
  if (x == y)
    throw singularity_error("kernel_J: logarithmic singularity at x = y");
  double ad = std::fabs(p.d);
  return 0.5 * specfun::bessel_k0(ad * std::fabs(y - x)) -
         0.5 * specfun::bessel_k0(ad * (y + x));
}

std::complex<double> eta_half_integral(const model::ModelParams& p, double k,
                                       double x,
                                       const quad::QuadratureSpec& spec) {
  if (p.d == 0.0)
    throw precondition_error("eta_half_integral: requires d != 0");
  if (x < 0.0)
    throw precondition_error("eta_half_integral: x must be >= 0");
  return half_kernel_integral(p, k, x, spec, true, false);
}

double i2_fraction(const model::ModelParams& p, double k, double x,
                   const quad::QuadratureSpec& spec) {
  cplx whole = eta_half_integral(p, k, x, spec);
  cplx reflected = half_kernel_integral(p, k, x, spec, false, true);
  return std::abs(reflected) / std::max(std::abs(whole), 1e-300);
}

GridFunction phi_cap_k_numeric(const model::ModelParams& p, double k,
                               const std::vector<double>& grid,
                               const quad::QuadratureSpec& spec) {
  require_negative_d(p, "phi_cap_k_numeric");
  if (!(k > 0.0))
    throw precondition_error("phi_cap_k_numeric: requires k > 0");
  GridFunction out;
  out.grid = grid;
  out.values.assign(grid.size(), 0.0);
  out.b = p.b;
  out.d = p.d;
  out.k = k;
  out.route = "integral";
  double h = std::min(0.05, 0.02 / k);
  double scale = std::pow(2.0 / pi, 1.5);
  parallel_for(grid.size(), [&](std::size_t i) {
    double x = grid[i];
    // Near the boundary the reflected kernel leaves a y^3 log y corner in
    // the integral, which the one-sided stencil resolves only to O(h^2).
    // A much smaller step with a tighter inner tolerance restores the
    // accuracy there (finite-difference noise ~ tol/h stays ~1e-8).
    double hx = h;
    quad::QuadratureSpec sx = spec;
    if (x < 2.0 * h) {
      hx = 1e-3;
      sx.abs_tol = spec.abs_tol * 1e-2;
      sx.rel_tol = spec.rel_tol * 1e-2;
    }
    auto I = [&](double t) { return eta_half_integral(p, k, t, sx); };
    cplx center;
    cplx deriv = stencil_derivative(I, x, hx, &center);
    out.values[i] =
        scale * std::exp(-iu * p.b * x) * (p.d * center - deriv);
  });
  return out;
}

GridFunction phi_cap_k_spectral(const model::ModelParams& p, double k,
                                const std::vector<double>& grid,
                                const quad::QuadratureSpec& spec) {
  require_negative_d(p, "phi_cap_k_spectral");
  if (!(k > 0.0))
    throw precondition_error("phi_cap_k_spectral: requires k > 0");
  if (p.b < 0.0) {
    // conjugation symmetry of the whole construction in b
    model::ModelParams q(-p.b, p.d);
    GridFunction g = phi_cap_k_spectral(q, k, grid, spec);
    for (auto& v : g.values) v = std::conj(v);
    g.b = p.b;
    return g;
  }
  double b = p.b, d = p.d;
  cplx A = p.robin_coef();
  cplx norm = k * k + A * A;

  auto gk = [d](double kap, double x) {
    return d * std::sin(kap * x) - kap * std::cos(kap * x);
  };
  auto w = [d](double kap) { return 1.0 / std::hypot(kap, d); };
  auto c1 = [&](double kap) { return cplx(kap, d) * (k + iu * A); };
  auto c2 = [&](double kap) { return cplx(kap, d) * (k - iu * A); };
  auto c3 = [&](double kap) { return cplx(kap, -d) * (k + iu * A); };
  auto c4 = [&](double kap) { return cplx(kap, -d) * (k - iu * A); };

  PoleSet ps = make_poles(b, k);
  constexpr double kmax = 600.0;

  // residue sum of the third inverse moment controls the analytic tail
  cplx r3 = 2.0 * ((k - iu * A) * (k - b) * (k - b) * cplx(k - b, d) -
                   (k + iu * A) * (b + k) * (b + k) * cplx(b + k, -d));

  GridFunction out;
  out.grid = grid;
  out.values.assign(grid.size(), 0.0);
  out.b = p.b;
  out.d = p.d;
  out.k = k;
  out.route = "spectral";

  parallel_for(grid.size(), [&](std::size_t i) {
    double x = grid[i];
    auto smooth = [&](double kap) -> cplx {
      cplx s = c1(kap) / (kap + b + k) + c2(kap) / (kap + b - k) +
               c3(kap) / ((b + k) - kap) + c4(kap) / ((b - k) - kap);
      return w(kap) * gk(kap, x) * s;
    };

    // delta contributions at kappa = k+b and |k-b|
    cplx mdel = c3(k + b) * w(k + b) * gk(k + b, x);
    if (k > b + 1e-12) mdel += c2(k - b) * w(k - b) * gk(k - b, x);
    if (b > k + 1e-12) mdel += c4(b - k) * w(b - k) * gk(b - k, x);
    mdel *= 0.25 * pi;

    // principal value over [0, kmax]: smooth pieces plus symmetric windows
    quad::QuadratureSpec fs = spec;
    fs.singular_points.clear();
    fs.abs_tol = spec.abs_tol / 64.0;
    auto chunked = [&](double lo, double hi) -> cplx {
      if (hi <= lo) return 0.0;
      double chunk = 2.0 * pi * 30.0 / std::max(x, 0.5);
      cplx acc = 0.0;
      double t = lo;
      while (t < hi) {
        double u = std::min(t + chunk, hi);
        acc += quad::integrate_finite(smooth, t, u, fs).value;
        t = u;
      }
      return acc;
    };

    cplx pv = 0.0;
    double left = 0.0;
    if (ps.has_lo) {
      pv += chunked(left, ps.lo - ps.h_lo);
      pv += quad::integrate_finite(
                [&](double s) {
                  return smooth(ps.lo + s) + smooth(ps.lo - s);
                },
                0.0, ps.h_lo, fs)
                .value;
      left = ps.lo + ps.h_lo;
    }
    pv += chunked(left, ps.hi - ps.h_hi);
    pv += quad::integrate_finite(
              [&](double s) { return smooth(ps.hi + s) + smooth(ps.hi - s); },
              0.0, ps.h_hi, fs)
              .value;
    pv += chunked(ps.hi + ps.h_hi, kmax);

    // analytic tail of the 1/kappa^3 remainder beyond kmax
    cplx tail;
    if (x < 1e-8) {
      tail = -r3 / (2.0 * kmax * kmax);
    } else {
      double y = kmax * x;
      tail = -r3 * x * x * exp_moment(3, y).real() +
             d * r3 * x * x * x * exp_moment(4, y).imag();
    }

    cplx m = mdel + 0.25 * iu * (pv + tail);
    out.values[i] =
        std::pow(2.0 / pi, 1.5) * std::exp(-iu * b * x) * m / norm;
  });
  return out;
}

PhaseExtraction extract_phase_shift(const GridFunction& samples, double k,
                                    double x_min, double x_max) {
  if (!(k > 0.0))
    throw precondition_error("extract_phase_shift: requires k > 0");
  double periods = (x_max - x_min) * k / (2.0 * pi);
  if (periods + 1e-9 < 8.0)
    throw insufficient_data_error(
        "extract_phase_shift: window spans fewer than 8 periods");
  double s2 = 0.0, c2 = 0.0, sc = 0.0;
  cplx rs = 0.0, rc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < samples.grid.size(); ++i) {
    double x = samples.grid[i];
    if (x < x_min || x > x_max) continue;
    double s = std::sin(k * x), c = std::cos(k * x);
    s2 += s * s;
    c2 += c * c;
    sc += s * c;
    rs += s * samples.values[i];
    rc += c * samples.values[i];
    ++n;
  }
  if (n < 16)
    throw insufficient_data_error(
        "extract_phase_shift: fewer than 16 samples in the window");
  double det = s2 * c2 - sc * sc;
  cplx a1 = (c2 * rs - sc * rc) / det;
  cplx a2 = (s2 * rc - sc * rs) / det;

  PhaseExtraction res;
  res.delta = std::atan2((a2 * std::conj(a1)).real(), std::norm(a1));
  if (res.delta == -0.5 * pi) res.delta = 0.5 * pi;
  res.amplitude = std::sqrt(std::norm(a1) + std::norm(a2));
  double misfit = 0.0;
  for (std::size_t i = 0; i < samples.grid.size(); ++i) {
    double x = samples.grid[i];
    if (x < x_min || x > x_max) continue;
    cplx fit = a1 * std::sin(k * x) + a2 * std::cos(k * x);
    misfit += std::norm(samples.values[i] - fit);
  }
  res.residual = std::sqrt(misfit / n);
  res.x_min = x_min;
  res.x_max = x_max;
  res.poor_fit = res.residual > 0.05 * res.amplitude;
  return res;
}

std::complex<double> kernel_A(double b, double x, double y) {
  if (b == 0.0) throw precondition_error("kernel_A: requires b != 0");
  if (x < 0.0 || y < 0.0)
    throw precondition_error("kernel_A: x, y must be >= 0");
  if (x == 0.0 && y == 0.0)
    throw precondition_error("kernel_A: undefined at the corner (0,0)");
  if (x == y)
    throw singularity_error("kernel_A: logarithmic singularity at x = y");
  return (1.0 / pi) * std::exp(iu * b * (y - x)) *
         std::log(std::fabs((x + y) / (x - y)));
}

std::complex<double> phi_cap_k_singular(double b, double k, double x) {
  if (b == 0.0)
    throw precondition_error("phi_cap_k_singular: requires b != 0");
  if (b < 0.0) return std::conj(phi_cap_k_singular(-b, k, x));
  if (!(k > 0.0))
    throw precondition_error("phi_cap_k_singular: requires k > 0");
  if (x < 0.0)
    throw precondition_error("phi_cap_k_singular: x must be >= 0");
  if (k == b)
    throw singularity_error(
        "phi_cap_k_singular: undefined at the singular momentum k = b");
  double u = b - k, v = b + k;
  double sgn = u > 0.0 ? 1.0 : -1.0;
  cplx phase = std::exp(-iu * b * x);
  double brace;
  if (x == 0.0) {
    brace = std::log(std::fabs(u) / v);
    return std::sqrt(2.0 / (pi * pi * pi)) * iu * brace +
           (sgn - 1.0) / std::sqrt(2.0 * pi);
  }
  brace = std::cos(u * x) * specfun::cosine_integral_ci(std::fabs(u) * x) -
          std::cos(v * x) * specfun::cosine_integral_ci(v * x) +
          std::sin(u * x) * specfun::sine_integral_si(u * x) -
          std::sin(v * x) * specfun::sine_integral_si(v * x);
  return std::sqrt(2.0 / (pi * pi * pi)) * phase * iu * brace +
         std::sqrt(2.0 / pi) * phase * std::sin(b * x) * std::sin(k * x) +
         (sgn - 1.0) / std::sqrt(2.0 * pi) * phase * std::cos(u * x);
}

std::complex<double> phi_cap_k_singular_quad(double b, double k, double x,
                                             double radius, bool accelerate,
                                             const quad::QuadratureSpec& spec) {
  if (b == 0.0)
    throw precondition_error("phi_cap_k_singular_quad: requires b != 0");
  if (!(k > 0.0))
    throw precondition_error("phi_cap_k_singular_quad: requires k > 0");
  if (x < 0.0)
    throw precondition_error("phi_cap_k_singular_quad: x must be >= 0");
  if (!(radius > x + 1.0))
    throw precondition_error(
        "phi_cap_k_singular_quad: radius must exceed x + 1");

  auto V = [&](double xs) -> cplx {
    auto logker = [xs](double y) {
      double num = xs + y, den = std::fabs(xs - y);
      if (den == 0.0) den = 1e-300;
      return std::log(num / den);
    };
    quad::QuadratureSpec fs = spec;
    fs.singular_points.clear();
    if (xs > 0.0 && xs < radius) fs.singular_points.push_back(xs);
    auto f = [&](double y) {
      return std::exp(iu * b * y) * std::sin(k * y) * logker(y);
    };
    cplx val = quad::integrate_finite(f, 0.0, radius, fs).value;
    if (accelerate) {
      // e^{iby} sin(ky) = (e^{i(b+k)y} - e^{i(b-k)y}) / 2i
      for (double q : {b + k, b - k}) {
        double sign = q == b + k ? 1.0 : -1.0;
        auto osc = [&](double y) { return std::exp(iu * q * y) * logker(y); };
        quad::QuadratureSpec ts = spec;
        ts.singular_points.clear();
        if (std::fabs(q) > 1e-9) {
          ts.truncation = quad::TruncationPolicy::oscillatory_tail;
          ts.osc_frequency = std::fabs(q);
        } else {
          ts.truncation = quad::TruncationPolicy::exponential_decay;
        }
        val += sign / (2.0 * iu) *
               quad::integrate_semi_infinite(osc, radius, ts).value;
      }
    }
    return val;
  };

  double h = 0.01;
  cplx deriv = stencil_derivative(V, x, h, nullptr);
  return -(1.0 / pi) * std::sqrt(2.0 / pi) * std::exp(-iu * b * x) * deriv;
}

}  // namespace singlab::hermitian
