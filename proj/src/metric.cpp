#include "singlab/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "singlab/parallel.hpp"

namespace singlab::metric {

namespace {

constexpr double pi = 3.14159265358979323846;
using cplx = std::complex<double>;
constexpr cplx iu{0.0, 1.0};

// (A + Bx) e^{-alpha x} with exact derivatives f^(n) = e^{-alpha x}
// [(-alpha)^n (A + Bx) + n (-alpha)^{n-1} B]
AnalyticTestFunction exp_poly(cplx A, cplx B, double alpha, BcClass bc,
                              std::string name) {
  auto deriv = [A, B, alpha](int n) {
    return [A, B, alpha, n](double x) {
      double e = std::exp(-alpha * x);
      double an = std::pow(-alpha, n);
      double an1 = n == 0 ? 0.0 : n * std::pow(-alpha, n - 1);
      return e * (an * (A + B * x) + an1 * B);
    };
  };
  AnalyticTestFunction t;
  t.f = deriv(0);
  t.f1 = deriv(1);
  t.f2 = deriv(2);
  t.f3 = deriv(3);
  t.f4 = deriv(4);
  t.decay_rate = alpha;
  t.bc = bc;
  t.name = std::move(name);
  return t;
}

// nth derivative of e^{-ibx} g(x) with g = d sin(kx) + c cos(kx), via the
// quarter-turn property g^(j) = k^j [d sin(kx + j pi/2) + c cos(kx + j pi/2)]
AnalyticTestFunction trig_envelope(double b, double d, double c, double k,
                                   cplx scale, BcClass bc, std::string name) {
  auto deriv = [b, d, c, k, scale](int n) {
    return [b, d, c, k, scale, n](double x) {
      cplx sum = 0.0;
      double binom = 1.0;
      for (int j = 0; j <= n; ++j) {
        double ph = k * x + 0.5 * pi * j;
        cplx gj = std::pow(k, j) * (d * std::sin(ph) + c * std::cos(ph));
        sum += binom * std::pow(-iu * b, n - j) * gj;
        binom *= static_cast<double>(n - j) / (j + 1.0);
      }
      return scale * std::exp(-iu * b * x) * sum;
    };
  };
  AnalyticTestFunction t;
  t.f = deriv(0);
  t.f1 = deriv(1);
  t.f2 = deriv(2);
  t.f3 = deriv(3);
  t.f4 = deriv(4);
  t.decay_rate = 0.0;
  t.bc = bc;
  t.name = std::move(name);
  return t;
}

cplx norm_psik(const model::ModelParams& p, double k) {
  double n2 = k * k + p.d * p.d;
  if (n2 == 0.0)
    throw domain_error("psi_k: zero norm at k = d = 0");
  return std::sqrt(2.0 / pi) / std::sqrt(n2);
}

// natural cubic spline on a strictly increasing grid, complex values
class CubicSpline {
 public:
  CubicSpline(const std::vector<double>& x, const std::vector<cplx>& y)
      : x_(x), y_(y), m_(x.size(), 0.0) {
    std::size_t n = x.size();
    if (n < 3) return;  // linear fallback via zero second derivatives
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];
    std::vector<double> diag(n - 2), sub(n - 2), sup(n - 2);
    std::vector<cplx> rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sub[i - 1] = h[i - 1];
      diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
      sup[i - 1] = h[i];
      rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    for (std::size_t i = 1; i < rhs.size(); ++i) {
      double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = rhs.size(); i-- > 0;) {
      cplx t = rhs[i];
      if (i + 1 < rhs.size()) t -= sup[i] * m_[i + 2];
      m_[i + 1] = t / diag[i];
    }
  }

  cplx operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    std::size_t i =
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
    double h = x_[i + 1] - x_[i];
    double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h /
               6.0;
  }

 private:
  std::vector<double> x_;
  std::vector<cplx> y_;
  std::vector<cplx> m_;
};

// composite Gauss-Legendre 12 rule with fixed panel length; deterministic
// cost for strongly oscillatory Fourier-type integrals
struct FixedRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  FixedRule(double a, double b, double panel_len) {
    static const std::array<double, 6> gx = [] {
      // Legendre-12 positive abscissae by Newton iteration
      std::array<double, 6> r{};
      for (int i = 0; i < 6; ++i) {
        double t = std::cos(pi * (i + 0.75) / 12.5);
        for (int it = 0; it < 60; ++it) {
          double p0 = 1.0, p1 = t;
          for (int j = 2; j <= 12; ++j) {
            double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
          }
          double dp = 12.0 * (t * p1 - p0) / (t * t - 1.0);
          double dt = p1 / dp;
          t -= dt;
          if (std::fabs(dt) < 1e-17) break;
        }
        r[i] = t;
      }
      return r;
    }();
    static const std::array<double, 6> gw = [] {
      std::array<double, 6> r{};
      for (int i = 0; i < 6; ++i) {
        double t = gx[i];
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= 12; ++j) {
          double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = 12.0 * (t * p1 - p0) / (t * t - 1.0);
        r[i] = 2.0 / ((1.0 - t * t) * dp * dp);
      }
      return r;
    }();
    int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_len)));
    double len = (b - a) / panels;
    nodes.reserve(panels * 12);
    weights.reserve(panels * 12);
    for (int p = 0; p < panels; ++p) {
      double mid = a + (p + 0.5) * len, half = 0.5 * len;
      for (int i = 0; i < 6; ++i) {
        nodes.push_back(mid - half * gx[i]);
        weights.push_back(half * gw[i]);
        nodes.push_back(mid + half * gx[i]);
        weights.push_back(half * gw[i]);
      }
    }
  }
};

// spectral coefficient <Psi_kappa|g> on a fixed y-rule dense enough for the
// largest kappa in play
cplx coefficient(const model::ModelParams& p, double kappa,
                 const FixedRule& rule, const std::vector<cplx>& gvals) {
  cplx acc = 0.0;
  for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
    double t = kappa * rule.nodes[m];
    acc += gvals[m] * (p.d * std::sin(t) - kappa * std::cos(t));
  }
  double n2 = kappa * kappa + p.d * p.d;
  return std::sqrt(2.0 / pi) / std::sqrt(n2) * acc;
}

RhoResult rho_apply_impl(const model::ModelParams& p,
                         const std::function<cplx(double)>& g, double radius,
                         const std::vector<double>& out_grid, double power,
                         const quad::QuadratureSpec& spec) {
  RhoResult res;
  res.unbounded_inverse_warning = power < 0.0 && p.d == 0.0;
  double threshold = spec.abs_tol / 100.0;

  // cutoff scan: doubling ladder with off-harmonic confirmation probes so a
  // single zero of the coefficient cannot fake decay. Two consecutive
  // sub-threshold rungs are required before accepting a cutoff, so a gap
  // below a spectral band cannot end the scan early. A tail that stops
  // shrinking between rungs is the noise floor of the supplied packet (or
  // an algebraic tail the power weight cancels); it will never clear, and
  // each further rung doubles the probe cost, so the scan aborts instead.
  double cutoff = 0.0;
  double candidate = 0.0;
  double best = std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (double kap = 1.0; kap <= 1.0e5; kap *= 2.0) {
    FixedRule probe_rule(0.0, radius, pi / std::max(1.0, 2.0 * kap));
    std::vector<cplx> gv(probe_rule.nodes.size());
    for (std::size_t m = 0; m < gv.size(); ++m)
      gv[m] = probe_rule.weights[m] *
              std::exp(iu * p.b * probe_rule.nodes[m]) * g(probe_rule.nodes[m]);
    double worst = 0.0;
    for (double frac : {1.0, 1.13, 1.29, 1.47, 1.71, 1.93}) {
      double kk = kap * frac;
      double w = std::pow(kk * kk + p.d * p.d, power) *
                 std::abs(coefficient(p, kk, probe_rule, gv));
      worst = std::max(worst, w);
    }
    if (worst < threshold) {
      if (candidate > 0.0) {
        cutoff = 2.0 * candidate;
        break;
      }
      candidate = kap;
      continue;
    }
    candidate = 0.0;
    best = std::min(best, worst);
    if (worst > 0.35 * prev) {
      if (++stalled >= 2) break;
    } else {
      stalled = 0;
    }
    prev = worst;
  }
  if (cutoff == 0.0 && candidate > 0.0) cutoff = 2.0 * candidate;
  if (cutoff == 0.0)
    throw convergence_error("rho_apply: coefficient tail does not clear the "
                            "truncation threshold",
                            best, threshold);
  res.truncation_k = cutoff;

  double x_max = out_grid.empty() ? 1.0 : out_grid.back();

  // The synthesis cost is (y-nodes) x (kappa-nodes), each count linear in
  // the cutoff. A packet that violates the Robin boundary condition has a
  // kappa^{-2} coefficient tail, so a tight threshold can demand a cutoff
  // whose nested rules are unaffordable; refuse rather than burn hours.
  double yn = radius * cutoff * 12.0 / pi;
  double kn = cutoff * std::max(1.0, x_max) * 12.0 / pi;
  if (yn * kn > 2.0e9)
    throw convergence_error(
        "rho_apply: truncation cutoff implies an unaffordable quadrature; "
        "the packet's boundary behavior keeps the weighted coefficient tail "
        "above the threshold (loosen abs_tol)",
        cutoff, threshold);

  // shared y-rule resolving oscillation up to the cutoff
  FixedRule yrule(0.0, radius, pi / std::max(1.0, cutoff));
  std::vector<cplx> gvals(yrule.nodes.size());
  for (std::size_t m = 0; m < gvals.size(); ++m)
    gvals[m] = yrule.weights[m] * std::exp(iu * p.b * yrule.nodes[m]) *
               g(yrule.nodes[m]);

  // kappa-rule resolving oscillation up to the farthest output point
  FixedRule krule(0.0, cutoff, pi / std::max(1.0, x_max));
  std::size_t nk = krule.nodes.size();
  std::vector<cplx> coef(nk);
  parallel_for(nk, [&](std::size_t j) {
    coef[j] = coefficient(p, krule.nodes[j], yrule, gvals);
  });

  res.out.grid = out_grid;
  res.out.values.assign(out_grid.size(), 0.0);
  res.out.b = p.b;
  res.out.d = p.d;
  res.out.route = "rho";
  parallel_for(out_grid.size(), [&](std::size_t i) {
    double x = out_grid[i];
    cplx acc = 0.0;
    for (std::size_t j = 0; j < nk; ++j) {
      double kap = krule.nodes[j];
      double n2 = kap * kap + p.d * p.d;
      double t = kap * x;
      acc += krule.weights[j] * std::pow(n2, power) / std::sqrt(n2) *
             (p.d * std::sin(t) - kap * std::cos(t)) * coef[j];
    }
    res.out.values[i] = std::sqrt(2.0 / pi) * std::exp(-iu * p.b * x) * acc;
  });
  return res;
}

}  // namespace

std::vector<AnalyticTestFunction> test_function_catalog(
    const model::ModelParams& p) {
  std::vector<AnalyticTestFunction> cat;
  cplx a = p.robin_coef();
  for (double alpha : {0.5, 1.0, 2.0}) {
    std::string tag = " alpha=" + std::to_string(alpha).substr(0, 3);
    cat.push_back(exp_poly(1.0, alpha - a, alpha, BcClass::robin_H,
                           "robin_H" + tag));
    cat.push_back(exp_poly(1.0, alpha - std::conj(a), alpha,
                           BcClass::robin_H_dagger, "robin_H_dagger" + tag));
    cat.push_back(exp_poly(0.0, 1.0, alpha, BcClass::dirichlet,
                           "dirichlet" + tag));
    cat.push_back(exp_poly(1.0, 0.0, alpha, BcClass::none, "plain" + tag));
  }
  return cat;
}

std::complex<double> apply_L(const model::ModelParams& p,
                             const AnalyticTestFunction& f, double x) {
  return -f.f1(x) + (p.d - iu * p.b) * f.f(x);
}

std::complex<double> apply_Ldag(const model::ModelParams& p,
                                const AnalyticTestFunction& f, double x) {
  return f.f1(x) + (p.d + iu * p.b) * f.f(x);
}

std::complex<double> apply_Lstar(const model::ModelParams& p,
                                 const AnalyticTestFunction& f, double x) {
  return -f.f1(x) + (p.d + iu * p.b) * f.f(x);
}

std::complex<double> apply_eta(const model::ModelParams& p,
                               const AnalyticTestFunction& f, double x) {
  return -f.f2(x) - 2.0 * iu * p.b * f.f1(x) +
         (p.d * p.d + p.b * p.b) * f.f(x);
}

std::complex<double> apply_eta_tilde(const model::ModelParams& p,
                                     const AnalyticTestFunction& f,
                                     double x) {
  return -f.f2(x) - 2.0 * iu * p.b * f.f1(x) +
         (p.d * p.d + p.b * p.b) * f.f(x);
}

std::complex<double> psi_k(const model::ModelParams& p, double k, double x) {
  return norm_psik(p, k) * std::exp(-iu * p.b * x) *
         (p.d * std::sin(k * x) - k * std::cos(k * x));
}

std::complex<double> psi_tilde_k(const model::ModelParams& p, double k,
                                 double x) {
  return std::sqrt(2.0 / pi) * std::exp(-iu * p.b * x) * std::sin(k * x);
}

AnalyticTestFunction make_psi_k_testfn(const model::ModelParams& p,
                                       double k) {
  cplx scale = norm_psik(p, k);
  return trig_envelope(p.b, p.d, -k, k, scale, BcClass::robin_H,
                       "psi_k k=" + std::to_string(k).substr(0, 4));
}

AnalyticTestFunction make_psi_tilde_k_testfn(const model::ModelParams& p,
                                             double k) {
  return trig_envelope(p.b, 1.0, 0.0, k, std::sqrt(2.0 / pi),
                       BcClass::dirichlet,
                       "psi_tilde_k k=" + std::to_string(k).substr(0, 4));
}

RhoResult rho_apply(const model::ModelParams& p, const Packet& g,
                    const std::vector<double>& out_grid, double power,
                    const quad::QuadratureSpec& spec) {
  if (!(g.support_radius > 0.0))
    throw precondition_error("rho_apply: packet needs a positive support radius");
  return rho_apply_impl(p, g.f, g.support_radius, out_grid, power, spec);
}

RhoResult rho_apply(const model::ModelParams& p, const GridFunction& g,
                    double power, const quad::QuadratureSpec& spec) {
  if (!g.valid())
    throw precondition_error("rho_apply: grid function is not valid");
  CubicSpline interp(g.grid, g.values);
  auto res = rho_apply_impl(
      p, [interp](double x) { return interp(x); }, g.grid.back(), g.grid,
      power, spec);
  res.out.k = g.k;
  return res;
}

IntertwiningReport verify_intertwining(const model::ModelParams& p,
                                       const AnalyticTestFunction& f,
                                       IntertwiningRelation which) {
  BcClass need = which == IntertwiningRelation::eta_L_vs_L_etatilde
                     ? BcClass::dirichlet
                     : BcClass::robin_H;
  if (f.bc != need)
    throw precondition_error(
        "verify_intertwining: test function boundary class does not match "
        "the relation");

  IntertwiningReport rep;
  rep.grid = linspace(0.0, 20.0, 201);
  cplx a = p.robin_coef();
  double sb = p.d * p.d + p.b * p.b;
  double sup_f = 1e-300;
  for (double x : rep.grid) sup_f = std::max(sup_f, std::abs(f.f(x)));

  for (double x : rep.grid) {
    cplx f0 = f.f(x), f1 = f.f1(x), f2 = f.f2(x), f3 = f.f3(x), f4 = f.f4(x);
    cplx lhs, rhs;
    switch (which) {
      case IntertwiningRelation::etaH_vs_Hdag_eta: {
        cplx hf = -f2, hf1 = -f3, hf2 = -f4;
        lhs = -hf2 - 2.0 * iu * p.b * hf1 + sb * hf;
        cplx ef2 = -f4 - 2.0 * iu * p.b * f3 + sb * f2;
        rhs = -ef2;
        break;
      }
      case IntertwiningRelation::Ldag_eta_vs_etatilde_Ldag: {
        cplx ef = -f2 - 2.0 * iu * p.b * f1 + sb * f0;
        cplx ef1 = -f3 - 2.0 * iu * p.b * f2 + sb * f1;
        lhs = ef1 + a * ef;
        cplx g0 = f1 + a * f0, g1 = f2 + a * f1, g2 = f3 + a * f2;
        rhs = -g2 - 2.0 * iu * p.b * g1 + sb * g0;
        break;
      }
      case IntertwiningRelation::eta_L_vs_L_etatilde: {
        cplx g0 = -f1 + std::conj(a) * f0, g1 = -f2 + std::conj(a) * f1,
             g2 = -f3 + std::conj(a) * f2;
        lhs = -g2 - 2.0 * iu * p.b * g1 + sb * g0;
        cplx ef = -f2 - 2.0 * iu * p.b * f1 + sb * f0;
        cplx ef1 = -f3 - 2.0 * iu * p.b * f2 + sb * f1;
        rhs = -ef1 + std::conj(a) * ef;
        break;
      }
    }
    rep.sup_lhs = std::max(rep.sup_lhs, std::abs(lhs));
    rep.sup_rhs = std::max(rep.sup_rhs, std::abs(rhs));
    rep.sup_residual = std::max(rep.sup_residual, std::abs(lhs - rhs) / sup_f);
  }

  cplx f0 = f.f(0.0), f1 = f.f1(0.0);
  rep.boundary_defect = std::abs(std::conj(f0) * f1 - std::conj(f1) * f0 +
                                 2.0 * iu * p.b * std::norm(f0));
  return rep;
}

}  // namespace singlab::metric
