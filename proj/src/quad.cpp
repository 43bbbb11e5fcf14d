#include "singlab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>

#include "singlab/errors.hpp"

namespace singlab::quad {

namespace {

constexpr double pi = 3.14159265358979323846;

// Gauss-Legendre nodes/weights computed at startup by Newton iteration on
// the Legendre recurrence (no tabulated constants). 12/24 embedded pair.
struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

GLRule make_gl(int n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 60; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) {
        // one clean-up pass after convergence
        if (it > 50) break;
      }
      if (std::fabs(dt) < 1e-17) break;
    }
    r.x[i] = t;
    r.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return r;
}

const GLRule& gl12() {
  static const GLRule r = make_gl(12);
  return r;
}
const GLRule& gl24() {
  static const GLRule r = make_gl(24);
  return r;
}

struct Panel {
  double a, b;
  std::complex<double> value;
  double error;
};

Panel eval_panel(const Integrand& f, double a, double b, long& evals) {
  const GLRule& lo = gl12();
  const GLRule& hi = gl24();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> s_lo{}, s_hi{};
  for (int i = 0; i < 12; ++i) s_lo += lo.w[i] * f(mid + half * lo.x[i]);
  for (int i = 0; i < 24; ++i) s_hi += hi.w[i] * f(mid + half * hi.x[i]);
  evals += 36;
  s_lo *= half;
  s_hi *= half;
  return {a, b, s_hi, std::abs(s_hi - s_lo)};
}

struct WorseError {
  bool operator()(const Panel& p, const Panel& q) const {
    return p.error < q.error;
  }
};

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b,
                            const QuadratureSpec& spec) {
  if (!(a <= b)) throw precondition_error("integrate_finite: requires a <= b");
  if (a == b) return {};

  // breakpoints: endpoints plus interior singular abscissae, so that a
  // singular point is always a panel endpoint (never a quadrature node)
  std::vector<double> bp{a, b};
  for (double s : spec.singular_points)
    if (s > a && s < b) bp.push_back(s);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  long evals = 0;
  std::priority_queue<Panel, std::vector<Panel>, WorseError> heap;
  std::complex<double> total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    Panel p = eval_panel(f, bp[i], bp[i + 1], evals);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int splits = 0;
  double width_floor = 1e-15 * (std::fabs(a) + std::fabs(b) + 1.0);
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions || heap.empty())
      throw convergence_error("integrate_finite: subdivision limit", total,
                              total_err);
    Panel worst = heap.top();
    heap.pop();
    if (worst.b - worst.a < width_floor) {
      // cannot refine further; accept this panel's estimate as-is
      if (heap.empty() || heap.top().error < 1e-300)
        throw convergence_error("integrate_finite: panel width floor", total,
                                total_err);
      continue;
    }
    double m = 0.5 * (worst.a + worst.b);
    Panel left = eval_panel(f, worst.a, m, evals);
    Panel right = eval_panel(f, m, worst.b, evals);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  return {total, total_err, evals};
}

std::complex<double> epsilon_limit(
    const std::vector<std::complex<double>>& s) {
  // Wynn's epsilon algorithm; the highest even column of the table is the
  // extrapolated limit. Small guarded denominators keep near-converged
  // sequences from poisoning the table.
  std::size_t n = s.size();
  if (n == 0) return {};
  if (n == 1) return s[0];
  std::vector<std::complex<double>> prev2(n + 1, 0.0);  // eps_{-1} column
  std::vector<std::complex<double>> prev1(s);           // eps_0 column
  std::vector<std::complex<double>> cur;
  std::complex<double> best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    cur.assign(n - k, 0.0);
    for (std::size_t j = 0; j + k < n; ++j) {
      std::complex<double> d = prev1[j + 1] - prev1[j];
      if (std::abs(d) < 1e-290) {
        // column converged; its value is the limit
        return prev1[j + 1];
      }
      cur[j] = prev2[j + 1] + 1.0 / d;
    }
    if (k % 2 == 0 && !cur.empty()) {
      std::complex<double> c = cur.back();
      if (std::isfinite(c.real()) && std::isfinite(c.imag())) best = c;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return best;
}

QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                   const QuadratureSpec& spec) {
  QuadratureSpec panel_spec = spec;
  panel_spec.singular_points.clear();
  panel_spec.max_subdivisions = std::max(200, spec.max_subdivisions / 10);

  long evals = 0;
  auto segment = [&](double lo, double hi) {
    QuadratureSpec s = panel_spec;
    s.abs_tol = spec.abs_tol * 0.01;
    s.rel_tol = spec.rel_tol * 0.01;
    // keep declared singular points that fall inside this segment
    for (double sp : spec.singular_points)
      if (sp > lo && sp < hi) s.singular_points.push_back(sp);
    QuadResult r = integrate_finite(f, lo, hi, s);
    evals += r.evaluations;
    return r;
  };

  if (spec.truncation == TruncationPolicy::exponential_decay) {
    // the integrand may rise toward a declared singular point before its
    // tail sets in, so no stopping decision is made until past the last one
    double settle_after = a;
    for (double sp : spec.singular_points) settle_after = std::max(settle_after, sp);
    std::complex<double> total{};
    double err = 0.0;
    double x = a;
    double len = 1.0;
    std::vector<double> mags;
    for (int n = 0; n < 120; ++n) {
      QuadResult r = segment(x, x + len);
      total += r.value;
      err += r.error;
      mags.push_back(std::abs(r.value));
      x += len;
      len = std::min(len * 2.0, 64.0);
      if (x <= settle_after) continue;
      double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
      std::size_t m = mags.size();
      if (m >= 2 && mags[m - 1] < 0.05 * tol && mags[m - 2] < 0.05 * tol) {
        // geometric tail bound from the observed decay ratio
        double ratio = mags[m - 2] > 0 ? mags[m - 1] / mags[m - 2] : 0.0;
        double tail = ratio < 1.0 ? mags[m - 1] * ratio / (1.0 - ratio)
                                  : mags[m - 1];
        return {total, err + tail, evals};
      }
    }
    double peak = *std::max_element(mags.begin(), mags.end());
    if (mags.back() >= 0.7 * peak)
      throw divergence_error(
          "integrate_semi_infinite: tail panels are not decaying");
    throw convergence_error("integrate_semi_infinite: panel limit", total,
                            err);
  }

  // oscillatory_tail: fixed half-period panels, epsilon extrapolation
  if (!(spec.osc_frequency > 0.0))
    throw precondition_error(
        "integrate_semi_infinite: oscillatory_tail needs osc_frequency > 0");
  double len = pi / spec.osc_frequency;
  int max_panels = std::clamp(spec.max_subdivisions, 40, 240);
  std::vector<std::complex<double>> sums;
  std::vector<double> mags;
  std::complex<double> running{};
  double panel_err = 0.0;
  std::complex<double> prev_eps{};
  bool have_prev = false;
  int stable = 0;
  double x = a;
  for (int n = 0; n < max_panels; ++n) {
    QuadResult r = segment(x, x + len);
    x += len;
    running += r.value;
    panel_err += r.error;
    mags.push_back(std::abs(r.value));
    sums.push_back(running);
    if (sums.size() < 10) continue;
    std::size_t win = std::min<std::size_t>(sums.size(), 48);
    std::vector<std::complex<double>> tail(sums.end() - win, sums.end());
    std::complex<double> eps = epsilon_limit(tail);
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(eps));
    // extrapolation is only trusted once the panel magnitudes have come
    // down from their peak; a non-decaying tail would otherwise be
    // silently Abel-summed
    double peak = *std::max_element(mags.begin(), mags.end());
    bool decaying = mags.back() < 0.9 * peak || mags.back() < 0.05 * tol;
    if (sums.size() >= 16) {
      double recent = *std::max_element(mags.end() - 8, mags.end());
      double earlier = *std::max_element(mags.end() - 16, mags.end() - 8);
      if (recent >= 0.99 * earlier && recent > tol)
        throw divergence_error(
            "integrate_semi_infinite: oscillatory tail is not decaying");
    }
    if (have_prev) {
      double diff = std::abs(eps - prev_eps);
      stable = diff < tol ? stable + 1 : 0;
      if (stable >= 2 && decaying) return {eps, diff + panel_err, evals};
    }
    prev_eps = eps;
    have_prev = true;
  }
  throw convergence_error("integrate_semi_infinite: extrapolation stalled",
                          have_prev ? prev_eps : running, panel_err);
}

}  // namespace singlab::quad
