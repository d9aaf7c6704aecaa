#include "forge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace forge {

namespace {

std::vector<std::pair<double, double>> compute_gl(int n) {
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

double simpson(const std::vector<double>& y, double h) {
  const size_t n = y.size() - 1;  // intervals
  if (y.size() < 2) return 0.0;
  if (n == 1) return 0.5 * h * (y[0] + y[1]);
  size_t even = (n % 2 == 0) ? n : n - 3;
  double acc = 0.0;
  for (size_t i = 0; i + 2 <= even; i += 2) acc += y[i] + 4.0 * y[i + 1] + y[i + 2];
  acc *= h / 3.0;
  if (even != n) {  // trailing Simpson 3/8 panel
    acc += 3.0 * h / 8.0 * (y[even] + 3.0 * y[even + 1] + 3.0 * y[even + 2] + y[even + 3]);
  }
  return acc;
}

}  // namespace forge
