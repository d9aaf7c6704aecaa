#pragma once

// Comparison maps onto the round unit sphere for rotationally symmetric
// metrics dt^2 + w(t)^2 g_round: F(t, x) = (f(t), x) with f decreasing from pi
// to 0. F is 1-Lipschitz iff (f')^2 <= 1 and sin^2 f <= w^2 pointwise.

#include <memory>
#include <utility>
#include <vector>

#include "forge/gluing.hpp"
#include "forge/report.hpp"
#include "forge/sequences.hpp"
#include "forge/smoothing.hpp"

namespace forge {

struct AxialMap {
  double D = 0.0;
  // f = pi - t on [0, t_corner], a t + b on [t_corner, D]; mollified at the corner.
  double t_corner = 0.0, a = 0.0, b = 0.0;
  double f_corner = 0.0;  // f(t_corner) = rho_min / 10
  double epsilon = 0.0;   // mollification scale, 0 without a corner
  double gap = 0.0;       // corner to the end of the equality region
  double rho_min = 0.0;   // smallest background radius along the manifold
  double s_rho_min = 0.0;
  double neck_offset = 0.0;  // s_rho_min - D/2
  // Explicit breakpoints (t, f) for hand-made maps; used instead of the rule when set.
  std::vector<std::pair<double, double>> knots;
  std::shared_ptr<const Mollified> corner;

  double value(double t) const;
  double slope(double t) const;
};

// The corner sits where pi - t meets rho_min / 10; throws NoNeck when the
// manifold has no interior minimum of the warp. The round sphere gives f = pi - t.
AxialMap build_axial_map(const GluedManifold& m, const MollifierSpec& spec = {});

// Piecewise-linear map through the given knots (negative controls).
AxialMap piecewise_map(const GluedManifold& m, std::vector<std::pair<double, double>> knots);

// (f')^2 <= 1 and sin^2 f <= w^2 (10^-12 slack) on 2^14 uniform samples and every
// interface, plus strict monotonicity and f(0) = pi, f(D) = 0.
VerificationReport certify_lipschitz(const AxialMap& map, const GluedManifold& m,
                                     int samples = 1 << 14);

// 4 pi for n = 3 when `cert` passed; CertificationMissing otherwise.
double certify_width(const VerificationReport& cert, const GluedManifold& m);

// Wells dominate the base: on each well the projection to the removed ball
// has |dr/ds| <= 1, is monotone, and matches the spherical factor; the volume
// change stays below the telescoping bound.
VerificationReport certify_vadb(const Member& m);

}  // namespace forge
