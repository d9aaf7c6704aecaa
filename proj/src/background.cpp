#include "forge/background.hpp"

#include <cmath>
#include <numbers>

#include "forge/errors.hpp"
#include "forge/quadrature.hpp"

namespace forge {

double unit_sphere_area(int k) {
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

BackgroundSpace BackgroundSpace::round(int n, double K0) {
  require(n >= 2, "dimension must be >= 2");
  return BackgroundSpace{n, K0};
}

double BackgroundSpace::sn(double r) const {
  if (K0 > 0) {
    const double q = std::sqrt(K0);
    return std::sin(q * r) / q;
  }
  if (K0 < 0) {
    const double q = std::sqrt(-K0);
    return std::sinh(q * r) / q;
  }
  return r;
}

double BackgroundSpace::sn_diff(double a, double x) const {
  if (K0 > 0) {
    const double q = std::sqrt(K0);
    return 2.0 * std::cos(q * (a + 0.5 * x)) * std::sin(0.5 * q * x) / q;
  }
  if (K0 < 0) {
    const double q = std::sqrt(-K0);
    return 2.0 * std::cosh(q * (a + 0.5 * x)) * std::sinh(0.5 * q * x) / q;
  }
  return x;
}

double BackgroundSpace::cn(double r) const {
  if (K0 > 0) return std::cos(std::sqrt(K0) * r);
  if (K0 < 0) return std::cosh(std::sqrt(-K0) * r);
  return 1.0;
}

double BackgroundSpace::mean_curv(double r) const {
  if (K0 > 0) {
    const double q = std::sqrt(K0);
    return q / std::tan(q * r);
  }
  if (K0 < 0) {
    const double q = std::sqrt(-K0);
    return q / std::tanh(q * r);
  }
  return 1.0 / r;
}

double BackgroundSpace::max_radius() const {
  if (K0 > 0) return std::numbers::pi / std::sqrt(K0);
  return std::numeric_limits<double>::infinity();
}

double BackgroundSpace::sphere_area(double r) const {
  return unit_sphere_area(n - 1) * std::pow(sn(r), n - 1);
}

double BackgroundSpace::ball_volume(double r) const {
  auto f = [&](double x) { return std::pow(sn(x), n - 1); };
  return unit_sphere_area(n - 1) * gl_composite(f, 0.0, r, 8, 20);
}

double scalar_from_curve(const BackgroundSpace& bg, double r, double sin_theta, double k,
                         double k_coef) {
  const double RM = bg.scalar();
  if (sin_theta == 0.0) return RM;
  const int n = bg.n;
  const double c = bg.mean_curv(r);
  const double s2 = sin_theta * sin_theta;
  return RM - 2.0 * bg.ric_radial() * s2 + (n - 1.0) * (n - 2.0) * c * c * s2 -
         k_coef * c * k * sin_theta;
}

}  // namespace forge
