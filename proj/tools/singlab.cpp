// singlab: command-line front end for the half-line Robin-boundary
// scattering toolkit. Verbs: scan, verify, resonance, phi, jost.
// Data goes to standard output (or --out); diagnostics go to standard
// error. Exit codes: 0 success, 1 computation-level failure, 2 usage or
// precondition error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "singlab/errors.hpp"
#include "singlab/grid.hpp"
#include "singlab/hermitian.hpp"
#include "singlab/metric.hpp"
#include "singlab/model.hpp"
#include "singlab/parallel.hpp"
#include "singlab/quad.hpp"
#include "singlab/scattering.hpp"
#include "singlab/specfun.hpp"

namespace {

using namespace singlab;
using std::complex;

const double pi = std::acos(-1.0);

std::string fmt(const char* pattern, ...) {
  char buf[1024];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// 15 significant digits, scientific; non-finite values serialize as "nan"
std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  return fmt("%.14e", v);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw precondition_error("cannot open output file: " + path);
  os << content;
}

// ---------------------------------------------------------------- SVG plot

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> pts;
};

std::string render_svg(const std::string& title,
                       const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin < xmax)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
             "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
             W, H, W, H);
  svg += fmt("<rect width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", W, H);
  svg += fmt("<text x=\"%.1f\" y=\"24\" font-family=\"monospace\" "
             "font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
             0.5 * W, title.c_str());
  svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
             "stroke=\"black\"/>\n",
             ml, H - mb, W - mr, H - mb);
  svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
             "stroke=\"black\"/>\n",
             ml, mt, ml, H - mb);
  for (int t = 0; t <= 4; ++t) {
    double fx = xmin + (xmax - xmin) * t / 4.0;
    double fy = ymin + (ymax - ymin) * t / 4.0;
    svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
               "stroke=\"black\"/>\n",
               px(fx), H - mb, px(fx), H - mb + 5.0);
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" "
               "font-size=\"11\" text-anchor=\"middle\">%.4g</text>\n",
               px(fx), H - mb + 18.0, fx);
    svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
               "stroke=\"black\"/>\n",
               ml - 5.0, py(fy), ml, py(fy));
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" "
               "font-size=\"11\" text-anchor=\"end\">%.4g</text>\n",
               ml - 8.0, py(fy) + 4.0, fy);
  }
  double ly = mt + 4.0;
  for (const auto& s : series) {
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" "
               "font-size=\"12\" fill=\"%s\" text-anchor=\"end\">%s</text>\n",
               W - mr - 4.0, ly, s.color.c_str(), s.label.c_str());
    ly += 16.0;
    std::string points;
    bool open = false;
    for (const auto& [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      points += fmt("%s%.2f,%.2f", open ? " " : "", px(x), py(y));
      open = true;
    }
    svg += fmt("<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
               "stroke-width=\"1.5\"/>\n",
               points.c_str(), s.color.c_str());
  }
  svg += "</svg>\n";
  return svg;
}

// --------------------------------------------------------------------- scan

struct ScanRow {
  double k = 0.0;
  double delta = 0.0;
  complex<double> s{};
  double sigma = 0.0;
  double sigma_bw = 0.0;
  bool singular = false;
};

int run_scan(double b, double d, double kmin, double kmax, int n,
             const std::string& format, const std::string& out,
             const std::string& plot) {
  if (!(kmin < kmax) || !(kmin > 0.0))
    throw precondition_error("scan: requires 0 < kmin < kmax");
  if (n < 2) throw precondition_error("scan: requires n >= 2");
  model::ModelParams p(b, d);

  auto cls = model::classify_spectrum(p);
  if (cls.kind == model::SpectrumKind::bound_state)
    std::fprintf(stderr,
                 "note: d > 0 supports a bound state at k = %.6g%+.6gi, "
                 "energy %.6g%+.6gi\n",
                 cls.jost_zero_k.real(), cls.jost_zero_k.imag(),
                 cls.bound_energy->real(), cls.bound_energy->imag());
  if (cls.kind == model::SpectrumKind::spectral_singularity)
    std::fprintf(stderr,
                 "note: d = 0 places a spectral singularity at k = %.6g "
                 "(energy %.6g)\n",
                 *cls.singular_k, *cls.singular_energy);

  std::vector<ScanRow> rows(n);
  parallel_for(rows.size(), [&](std::size_t i) {
    ScanRow& r = rows[i];
    r.k = kmin + (kmax - kmin) * static_cast<double>(i) /
                     static_cast<double>(n - 1);
    try {
      r.delta = scattering::phase_shift(p, r.k);
      r.s = scattering::s_matrix(p, r.k);
      r.sigma = scattering::sigma(p, r.k);
      r.sigma_bw = scattering::sigma_bw(p, r.k * r.k);
    } catch (const singularity_error&) {
      r.singular = true;
    }
  });

  for (const auto& r : rows)
    if (r.singular)
      std::fprintf(stderr,
                   "warning: row k = %.14e sits at the spectral singularity "
                   "k = b; fields emitted as nan\n",
                   r.k);

  std::string body;
  if (format == "json") {
    body += "{\n";
    body += "  \"b\": " + num(b) + ",\n";
    body += "  \"d\": " + num(d) + ",\n";
    body += "  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.singular) {
        body += fmt("    {\"k\": %s, \"delta\": null, \"re_s\": null, "
                    "\"im_s\": null, \"sigma\": null, \"sigma_bw\": null}",
                    num(r.k).c_str());
      } else {
        body += fmt("    {\"k\": %s, \"delta\": %s, \"re_s\": %s, "
                    "\"im_s\": %s, \"sigma\": %s, \"sigma_bw\": %s}",
                    num(r.k).c_str(), num(r.delta).c_str(),
                    num(r.s.real()).c_str(), num(r.s.imag()).c_str(),
                    num(r.sigma).c_str(), num(r.sigma_bw).c_str());
      }
      body += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    body += "  ]\n}\n";
  } else {
    body = "k,delta,re_s,im_s,sigma,sigma_bw\n";
    for (const auto& r : rows) {
      if (r.singular) {
        body += num(r.k) + ",nan,nan,nan,nan,nan\n";
      } else {
        body += num(r.k) + "," + num(r.delta) + "," + num(r.s.real()) + "," +
                num(r.s.imag()) + "," + num(r.sigma) + "," + num(r.sigma_bw) +
                "\n";
      }
    }
  }
  emit(out, body);

  if (!plot.empty()) {
    Series ss{"sigma", "#1f77b4", {}}, sb{"sigma_bw", "#d62728", {}};
    for (const auto& r : rows) {
      if (r.singular) continue;
      ss.pts.emplace_back(r.k, r.sigma);
      sb.pts.emplace_back(r.k, r.sigma_bw);
    }
    emit(plot, render_svg(fmt("cross section, b = %.4g, d = %.4g", b, d),
                          {ss, sb}));
  }
  return 0;
}

// ------------------------------------------------------------------- verify

struct Check {
  std::string name;
  double target;
  double achieved;
  bool pass;
};

void suite_metric(const model::ModelParams& p,
                  const quad::QuadratureSpec& spec,
                  std::vector<Check>& checks) {
  double ab = std::fabs(p.b);
  double m_eta = 0.0, m_eta_tilde = 0.0, m_ladder = 0.0;
  for (double k : {0.4 * ab, 1.1 * ab, 2.7 * ab}) {
    auto psi = metric::make_psi_k_testfn(p, k);
    auto psit = metric::make_psi_tilde_k_testfn(p, k);
    double lam = k * k + p.d * p.d;
    for (double x : linspace(0.0, 12.0, 121)) {
      m_eta = std::max(m_eta,
                       std::abs(metric::apply_eta(p, psi, x) - lam * psi.f(x)));
      m_eta_tilde = std::max(
          m_eta_tilde,
          std::abs(metric::apply_eta_tilde(p, psit, x) - lam * psit.f(x)));
      m_ladder =
          std::max(m_ladder, std::abs(metric::apply_L(p, psit, x) -
                                      std::sqrt(lam) * metric::psi_k(p, k, x)));
    }
  }
  checks.push_back({"eta_psi_eigenrelation", 1e-13, m_eta, m_eta <= 1e-13});
  checks.push_back({"eta_tilde_psi_tilde_eigenrelation", 1e-13, m_eta_tilde,
                    m_eta_tilde <= 1e-13});
  checks.push_back(
      {"ladder_psi_tilde_to_psi", 1e-13, m_ladder, m_ladder <= 1e-13});

  // centered far enough from x = 0 that the packet's Robin boundary defect
  // (which leaves a kappa^{-2} coefficient tail) sits below the truncation
  // threshold; abs_tol 1e-8 keeps the scan from chasing that tail
  auto gauss = [](double x) {
    double t = x - 5.5;
    return complex<double>(std::exp(-t * t / (2.0 * 0.8 * 0.8)), 0.0);
  };
  metric::Packet g{gauss, 12.0};
  auto grid = linspace(0.0, 8.0, 17);
  quad::QuadratureSpec rho_spec = spec;
  rho_spec.abs_tol = std::max(spec.abs_tol, 1e-8);
  auto res = metric::rho_apply(p, g, grid, 0.0, rho_spec);
  double m_rec = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    m_rec = std::max(m_rec, std::abs(res.out.values[i] - gauss(grid[i])));
  checks.push_back({"packet_reconstruction", 1e-6, m_rec, m_rec <= 1e-6});
}

void suite_susy(const model::ModelParams& p, std::vector<Check>& checks) {
  auto catalog = metric::test_function_catalog(p);
  double m_etaH = 0.0, m_ldag = 0.0, m_el = 0.0, m_def = 0.0;
  for (const auto& f : catalog) {
    if (f.bc == metric::BcClass::robin_H) {
      auto r1 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::etaH_vs_Hdag_eta);
      auto r2 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::Ldag_eta_vs_etatilde_Ldag);
      m_etaH = std::max(m_etaH, r1.sup_residual);
      m_ldag = std::max(m_ldag, r2.sup_residual);
      m_def = std::max(m_def, std::fabs(r1.boundary_defect));
    }
    if (f.bc == metric::BcClass::dirichlet) {
      auto r3 = metric::verify_intertwining(
          p, f, metric::IntertwiningRelation::eta_L_vs_L_etatilde);
      m_el = std::max(m_el, r3.sup_residual);
    }
  }
  double ab = std::fabs(p.b);
  double m_ladder = 0.0;
  for (double k : {0.4 * ab, 1.1 * ab, 2.7 * ab}) {
    auto psi = metric::make_psi_k_testfn(p, k);
    double root = std::sqrt(k * k + p.d * p.d);
    for (double x : linspace(0.0, 12.0, 121))
      m_ladder = std::max(m_ladder,
                          std::abs(metric::apply_Ldag(p, psi, x) -
                                   root * metric::psi_tilde_k(p, k, x)));
  }
  checks.push_back({"eta_H_intertwining", 1e-12, m_etaH, m_etaH <= 1e-12});
  checks.push_back({"Ldag_eta_intertwining", 1e-12, m_ldag, m_ldag <= 1e-12});
  checks.push_back({"eta_L_intertwining", 1e-12, m_el, m_el <= 1e-12});
  checks.push_back(
      {"robin_boundary_defect", 1e-12, m_def, m_def <= 1e-12});
  checks.push_back(
      {"ladder_psi_to_psi_tilde", 1e-13, m_ladder, m_ladder <= 1e-13});
}

void suite_asymptotics(const model::ModelParams& p,
                       std::vector<Check>& checks) {
  double m_unit = 0.0, m_euler = 0.0, m_bw = 0.0, m_scale = 0.0;
  double min_sigma = std::numeric_limits<double>::infinity();
  model::ModelParams ps(1.7 * p.b, 1.7 * p.d);
  for (int i = 0; i < 64; ++i) {
    double k = 0.05 * std::pow(20.0 / 0.05, i / 63.0);
    if (p.d == 0.0 && std::fabs(k - std::fabs(p.b)) < 1e-6) continue;
    complex<double> s = scattering::s_matrix(p, k);
    double delta = scattering::phase_shift(p, k);
    m_unit = std::max(m_unit, std::fabs(std::abs(s) - 1.0));
    m_euler = std::max(
        m_euler, std::abs(s - std::exp(complex<double>(0.0, 2.0 * delta))));
    complex<double> bw = (p.b * p.b + std::pow(complex<double>(p.d, -k), 2)) /
                         (p.b * p.b + std::pow(complex<double>(p.d, k), 2));
    m_bw = std::max(m_bw, std::abs(s * s - bw));
    m_scale = std::max(
        m_scale, std::fabs(scattering::phase_shift(ps, 1.7 * k) - delta));
    if (p.d != 0.0)
      min_sigma = std::min(min_sigma, scattering::sigma(p, k));
  }
  checks.push_back({"unitarity", 1e-12, m_unit, m_unit <= 1e-12});
  checks.push_back({"euler_consistency", 1e-12, m_euler, m_euler <= 1e-12});
  checks.push_back({"bw_square", 1e-12, m_bw, m_bw <= 1e-12});
  checks.push_back({"scale_invariance", 1e-13, m_scale, m_scale <= 1e-13});
  double hi = std::fabs(scattering::phase_shift(p, 1e6) - 0.5 * pi);
  checks.push_back({"high_energy_phase", 1e-3, hi, hi <= 1e-3});
  double tail = scattering::sigma(p, 1e3);
  checks.push_back({"sigma_decay", 1.3e-5, tail, tail <= 1.3e-5});
  if (p.d != 0.0)
    checks.push_back({"sigma_positivity", 0.0, min_sigma, min_sigma > 0.0});
}

void suite_singular(const model::ModelParams& p,
                    const quad::QuadratureSpec& spec,
                    std::vector<Check>& checks) {
  double ab = std::fabs(p.b);
  double below = std::fabs(scattering::phase_shift(p, 0.5 * ab));
  checks.push_back({"phase_step_below_edge", 1e-15, below, below <= 1e-15});
  double above = std::fabs(scattering::phase_shift(p, 1.5 * ab) - 0.5 * pi);
  checks.push_back({"phase_step_above_edge", 1e-15, above, above <= 1e-15});
  bool threw = false;
  try {
    scattering::phase_shift(p, ab);
  } catch (const singularity_error&) {
    threw = true;
  }
  checks.push_back({"edge_undefined", 0.0, threw ? 0.0 : 1.0, threw});
  double diff = std::abs(
      hermitian::phi_cap_k_singular(p.b, 0.5 * ab, 2.0) -
      hermitian::phi_cap_k_singular_quad(p.b, 0.5 * ab, 2.0, 40.0, true,
                                         spec));
  checks.push_back({"closed_vs_quadrature", 1e-5, diff, diff <= 1e-5});
  double prev = 0.0, min_step = std::numeric_limits<double>::infinity();
  for (double radius : {50.0, 100.0, 200.0, 400.0}) {
    double im = std::fabs(
        hermitian::phi_cap_k_singular_quad(p.b, ab, 1.5, radius, false, spec)
            .imag());
    min_step = std::min(min_step, im - prev);
    prev = im;
  }
  checks.push_back(
      {"truncated_imag_growth", 0.0, min_step, min_step > 0.0});
}

int run_verify(double b, double d, const std::string& suite,
               const quad::QuadratureSpec& spec, const std::string& out) {
  model::ModelParams p(b, d);
  if (suite == "singular" && d != 0.0)
    throw precondition_error("verify: the singular suite requires d = 0");

  std::vector<Check> checks;
  if (suite == "metric" || suite == "all") suite_metric(p, spec, checks);
  if (suite == "susy" || suite == "all") suite_susy(p, checks);
  if (suite == "asymptotics" || suite == "all") suite_asymptotics(p, checks);
  if (suite == "singular" || (suite == "all" && d == 0.0))
    suite_singular(p, spec, checks);

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;

  std::string body = "{\n  \"suite\": \"" + suite + "\",\n  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    body += fmt("    {\"name\": \"%s\", \"target\": %s, \"achieved\": %s, "
                "\"pass\": %s}%s\n",
                c.name.c_str(), num(c.target).c_str(), num(c.achieved).c_str(),
                c.pass ? "true" : "false", i + 1 < checks.size() ? "," : "");
  }
  body += fmt("  ],\n  \"pass\": %s\n}\n", all_pass ? "true" : "false");
  emit(out, body);
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- resonance

int run_resonance(double b, double d, double kmin, double kmax, int n,
                  const std::string& out) {
  model::ModelParams p(b, d);
  // Default scan range brackets the resonance momentum sqrt(b^2 - d^2).
  double k_res = std::sqrt(std::max(b * b - d * d, 0.0));
  if (kmin <= 0.0) kmin = 0.25 * k_res;
  if (kmax <= 0.0) kmax = 2.0 * k_res;
  auto fit = scattering::find_resonance(p, kmin, kmax, n);
  std::string body = "{\n";
  body += "  \"e0\": " + num(fit.e0) + ",\n";
  body += "  \"gamma\": " + num(fit.gamma) + ",\n";
  body += "  \"peak_sigma\": " + num(fit.peak_sigma) + ",\n";
  body += "  \"fit_residual\": " + num(fit.fit_residual) + "\n";
  body += "}\n";
  emit(out, body);
  return 0;
}

// ---------------------------------------------------------------------- phi

int run_phi(double b, double d, double k, double xmax, int n,
            const std::string& route, const quad::QuadratureSpec& spec,
            const std::string& out, const std::string& plot) {
  if (!(xmax > 0.0)) throw precondition_error("phi: requires xmax > 0");
  if (n < 2) throw precondition_error("phi: requires n >= 2");
  auto grid = linspace(0.0, xmax, n);

  GridFunction gf;
  if (route == "singular") {
    if (d != 0.0)
      throw precondition_error("phi: the singular route requires d = 0");
    gf.grid = grid;
    gf.values.reserve(grid.size());
    for (double x : grid)
      gf.values.push_back(hermitian::phi_cap_k_singular(b, k, x));
    gf.b = b;
    gf.d = d;
    gf.k = k;
    gf.route = "singular";
  } else {
    model::ModelParams p(b, d);
    gf = route == "spectral" ? hermitian::phi_cap_k_spectral(p, k, grid, spec)
                             : hermitian::phi_cap_k_numeric(p, k, grid, spec);
  }

  std::string body = "x,re_phi,im_phi\n";
  for (std::size_t i = 0; i < gf.grid.size(); ++i)
    body += num(gf.grid[i]) + "," + num(gf.values[i].real()) + "," +
            num(gf.values[i].imag()) + "\n";
  emit(out, body);

  if (!plot.empty()) {
    Series re{"re_phi", "#1f77b4", {}}, im{"im_phi", "#d62728", {}};
    for (std::size_t i = 0; i < gf.grid.size(); ++i) {
      re.pts.emplace_back(gf.grid[i], gf.values[i].real());
      im.pts.emplace_back(gf.grid[i], gf.values[i].imag());
    }
    emit(plot,
         render_svg(fmt("Phi_k (%s route), b = %.4g, d = %.4g, k = %.4g",
                        gf.route.c_str(), b, d, k),
                    {re, im}));
  }
  return 0;
}

// --------------------------------------------------------------------- jost

int run_jost(double b, double d, double kmin, double kmax, double imin,
             double imax, int n, const std::string& out) {
  if (!(kmin < kmax) || !(imin < imax))
    throw precondition_error("jost: requires kmin < kmax and imin < imax");
  if (n < 2) throw precondition_error("jost: requires n >= 2");
  model::ModelParams p(b, d);
  std::string body = "re_k,im_k,re_w,im_w,abs_w\n";
  for (int j = 0; j < n; ++j) {
    double ik = imin + (imax - imin) * j / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) {
      double rk = kmin + (kmax - kmin) * i / static_cast<double>(n - 1);
      complex<double> w = model::jost_function(p, complex<double>(rk, ik));
      body += num(rk) + "," + num(ik) + "," + num(w.real()) + "," +
              num(w.imag()) + "," + num(std::abs(w)) + "\n";
    }
  }
  emit(out, body);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "scattering toolkit for -d^2/dx^2 on the half line with the Robin "
      "condition phi'(0) + (d+ib) phi(0) = 0"};
  app.require_subcommand(1);

  double b = 0.0, d = 0.0, tol = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--b", b, "boundary parameter b (nonzero)")->required();
    sub->add_option("--d", d, "boundary parameter d")->required();
    sub->add_option("--tol", tol,
                    "quadrature tolerance override (absolute and relative)");
  };

  // Each subcommand gets its own bound variables: default_val writes through
  // to the variable at registration time, so sharing one variable across
  // subcommands would leave it holding whichever default was registered last.
  double kmin = 0.1, kmax = 2.5;
  double rkmin = 0.0, rkmax = 0.0;
  double jkmin = -3.0, jkmax = 1.0, imin = -1.0, imax = 1.0;
  double k = 1.0, xmax = 40.0;
  int scan_n = 256, res_n = 2001, phi_n = 201, jost_n = 41;
  std::string format = "csv", suite = "all", route = "integral";
  std::string out, plot;

  CLI::App* scan =
      app.add_subcommand("scan", "tabulate delta, S, sigma, sigma_bw on a "
                                 "k-grid (CSV or JSON)");
  add_common(scan);
  scan->add_option("--kmin", kmin, "lower end of the k-grid")->required();
  scan->add_option("--kmax", kmax, "upper end of the k-grid")->required();
  scan->add_option("--n", scan_n, "number of grid points")->default_val(256);
  scan->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--out", out, "output path (default: standard output)");
  scan->add_option("--plot", plot, "write an SVG plot of sigma and sigma_bw");

  CLI::App* verify = app.add_subcommand(
      "verify", "run an invariant suite and emit a JSON report");
  add_common(verify);
  verify->add_option("--suite", suite, "which suite to run")
      ->check(CLI::IsMember({"all", "metric", "susy", "asymptotics",
                             "singular"}));
  verify->add_option("--out", out, "output path (default: standard output)");

  CLI::App* resonance = app.add_subcommand(
      "resonance", "scan sigma, fit the Breit-Wigner resonance, emit JSON");
  add_common(resonance);
  resonance->add_option("--kmin", rkmin,
                        "lower end of the scan (default brackets the peak)");
  resonance->add_option("--kmax", rkmax,
                        "upper end of the scan (default brackets the peak)");
  resonance->add_option("--n", res_n, "scan points")->default_val(2001);
  resonance->add_option("--out", out,
                        "output path (default: standard output)");

  CLI::App* phi = app.add_subcommand(
      "phi", "sample the equivalent-Hermitian eigenfunction Phi_k (CSV)");
  add_common(phi);
  phi->add_option("--k", k, "momentum")->required();
  phi->add_option("--xmax", xmax, "upper end of the x-grid");
  phi->add_option("--n", phi_n, "number of grid points")->default_val(201);
  phi->add_option("--route", route, "construction route")
      ->check(CLI::IsMember({"integral", "spectral", "singular"}));
  phi->add_option("--out", out, "output path (default: standard output)");
  phi->add_option("--plot", plot, "write an SVG plot of re/im parts");

  CLI::App* jost = app.add_subcommand(
      "jost", "tabulate the Jost function on a complex-k rectangle (CSV)");
  add_common(jost);
  jost->add_option("--kmin", jkmin, "lower end of Re k")->default_val(-3.0);
  jost->add_option("--kmax", jkmax, "upper end of Re k")->default_val(1.0);
  jost->add_option("--imin", imin, "lower end of Im k");
  jost->add_option("--imax", imax, "upper end of Im k");
  jost->add_option("--n", jost_n, "grid points per axis")->default_val(41);
  jost->add_option("--out", out, "output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  quad::QuadratureSpec spec;
  if (tol > 0.0) {
    spec.abs_tol = tol;
    spec.rel_tol = tol;
  }

  try {
    if (app.got_subcommand(scan))
      return run_scan(b, d, kmin, kmax, scan_n, format, out, plot);
    if (app.got_subcommand(verify))
      return run_verify(b, d, suite, spec, out);
    if (app.got_subcommand(resonance))
      return run_resonance(b, d, rkmin, rkmax, res_n, out);
    if (app.got_subcommand(phi))
      return run_phi(b, d, k, xmax, phi_n, route, spec, out, plot);
    if (app.got_subcommand(jost))
      return run_jost(b, d, jkmin, jkmax, imin, imax, jost_n, out);
  } catch (const singularity_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const precondition_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
