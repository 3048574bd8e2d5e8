#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace qkd {

// Golden-section maximization of a unimodal function on [lo, hi].
// Tolerance is on the argument.
template <typename F>
double golden_section_maximize(F f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Nelder-Mead maximization in a fixed dimension; deterministic, no
// restarts. Good enough as the local-refinement stage after a coarse
// grid scan.
inline std::vector<double> nelder_mead_maximize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
    double step, double tol, int max_iter = 400) {
  const std::size_t n = start.size();
  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  std::vector<Vertex> simplex(n + 1);
  simplex[0] = {start, f(start)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = start;
    x[i] += step;
    simplex[i + 1] = {x, f(x)};
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.fx > b.fx; };
  for (int iter = 0; iter < max_iter; ++iter) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      spread = std::max(spread, std::abs(simplex.front().fx - simplex.back().fx));
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      size = std::max(size, std::abs(simplex.front().x[i] - simplex.back().x[i]));
    if (spread < tol && size < tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / double(n);

    auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = centroid[i] + coef * (centroid[i] - simplex[n].x[i]);
      return x;
    };

    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr > simplex[0].fx) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe > fr) simplex[n] = {xe, fe};
      else simplex[n] = {xr, fr};
    } else if (fr > simplex[n - 1].fx) {
      simplex[n] = {xr, fr};
    } else {
      std::vector<double> xc = blend(-0.5);
      const double fc = f(xc);
      if (fc > simplex[n].fx) {
        simplex[n] = {xc, fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t i = 0; i < n; ++i)
            simplex[v].x[i] = 0.5 * (simplex[v].x[i] + simplex[0].x[i]);
          simplex[v].fx = f(simplex[v].x);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  return simplex.front().x;
}

}  // namespace qkd
