#pragma once

// Space-form backgrounds: constant sectional curvature K0, dimension n.
// Distance spheres about a point have warp sn_K0(r) and mean-curvature
// factor c(r) = cn_K0(r)/sn_K0(r), both exact.

#include <limits>

namespace forge {

// Area of the unit round k-sphere S^k.
double unit_sphere_area(int k);
// Volume of the unit Euclidean n-ball.
double unit_ball_volume(int n);

struct BackgroundSpace {
  int n = 3;
  double K0 = 1.0;

  static BackgroundSpace round(int n, double K0 = 1.0);

  double sn(double r) const;
  // sn(a + x) - sn(a) without cancellation.
  double sn_diff(double a, double x) const;
  double cn(double r) const;
  // cn/sn; the principal curvature of the distance sphere of radius r.
  double mean_curv(double r) const;
  double ric_radial() const { return (n - 1) * K0; }
  double scalar() const { return n * (n - 1) * K0; }
  // Largest admissible radius (antipodal distance for K0 > 0).
  double max_radius() const;
  // Area of the distance sphere of radius r.
  double sphere_area(double r) const;
  // Volume of the geodesic ball of radius r (Gauss-Legendre quadrature).
  double ball_volume(double r) const;
};

// Scalar curvature of the hypersurface of revolution generated by a curve
// with angle theta (passed as sin theta), radius r and geodesic curvature k.
// k_coef is the coefficient on the c*k*sin(theta) term: 2(n-1) is the
// Gauss-equation value; pass (n-1) to get the alternative convention.
double scalar_from_curve(const BackgroundSpace& bg, double r, double sin_theta, double k,
                         double k_coef);
inline double scalar_from_curve(const BackgroundSpace& bg, double r, double sin_theta,
                                double k) {
  return scalar_from_curve(bg, r, sin_theta, k, 2.0 * (bg.n - 1));
}

}  // namespace forge
