#pragma once

#include <utility>
#include <vector>

namespace forge {

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

template <class F>
double gl_integrate(F&& f, double a, double b, int order = 20) {
  const auto& nw = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (const auto& [x, w] : nw) acc += w * f(mid + half * x);
  return acc * half;
}

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
template <class F>
double gl_composite(F&& f, double a, double b, int panels, int order = 20) {
  double acc = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) acc += gl_integrate(f, a + i * h, a + (i + 1) * h, order);
  return acc;
}

// Composite Simpson on uniformly spaced samples (even number of intervals).
double simpson(const std::vector<double>& y, double h);

}  // namespace forge
