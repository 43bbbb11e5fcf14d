#pragma once

#include <complex>
#include <string>
#include <vector>

namespace singlab {

// Sampled complex-valued function on a strictly increasing nonnegative grid,
// tagged with the parameters and construction route that produced it.
struct GridFunction {
  std::vector<double> grid;
  std::vector<std::complex<double>> values;
  double b = 0.0;
  double d = 0.0;
  double k = 0.0;
  std::string route;  // e.g. "integral", "spectral", "singular"

  bool valid() const noexcept {
    if (grid.size() != values.size() || grid.empty()) return false;
    if (grid.front() < 0.0) return false;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) return false;
    for (auto v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

}  // namespace singlab
