#pragma once

// Rotationally symmetric metrics ds^2 + w(s)^2 g_{S^{n-1}} sampled span by
// span. Spans keep a local step h so that profiles descending to r ~ 1e-50
// keep full relative resolution.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "forge/background.hpp"
#include "forge/curve_kernel.hpp"

namespace forge {

enum class CapKind { pole, boundary };
struct Cap {
  CapKind kind = CapKind::boundary;
  double radius = 0.0;  // w at the end (0 for a pole)
};

struct WarpSpan {
  std::string role;
  double s0 = 0.0;  // coordinate of the first sample
  double h = 0.0;   // uniform local step
  std::vector<double> w;
  // dw[i] = w[i] - w[i-1] (dw[0] = 0), computed from the step rather than by
  // subtraction so that differences of nearly equal w keep their precision.
  std::vector<double> dw;
  std::vector<double> r;  // background radius when known (w = sn(r)); may be empty

  double length() const { return h * static_cast<double>(w.size() - 1); }
  double s_at(size_t i) const { return s0 + h * static_cast<double>(i); }
};

struct WarpedManifold {
  int n = 3;
  BackgroundSpace bg;
  double kappa = 0.0;
  double floor_drop = 0.0;
  int j = 0;
  std::string label;
  Cap start, end;
  std::vector<WarpSpan> spans;
  std::shared_ptr<const ProfileCurve> curve;  // generating curve, if any

  double kappa_floor() const { return kappa - floor_drop; }
  double s_begin() const { return spans.front().s0; }
  double s_end() const { return spans.back().s0 + spans.back().length(); }
  double length() const;
  size_t sample_count() const;
  // Linear interpolation of w (r) at coordinate s; for plotting and coarse queries.
  double w_at(double s) const;
  double r_at(double s) const;
};

WarpedManifold realize(const ProfileCurve& curve, const BackgroundSpace& bg);
WarpedManifold realize(std::shared_ptr<const ProfileCurve> curve);

// A warp given by a formula on [a, b] with N (even) steps.
WarpedManifold warp_from_function(int n, const BackgroundSpace& bg,
                                  const std::function<double(double)>& w, double a, double b,
                                  int N, const std::string& role = "sampled");

using SampledField = std::vector<std::vector<double>>;  // per span, per sample

// Hypersurface formula from (r, theta, k). k_coef = 0 selects 2(n-1).
SampledField scalar_curvature_gauss(const ProfileCurve& curve, double k_coef = 0.0);
// Warp formula with finite differences; NaN where w = 0.
SampledField scalar_curvature_warp(const WarpedManifold& m);
double scalar_curvature_warp_at(const WarpedManifold& m, size_t span, size_t i);

struct CrossOracle {
  size_t compared = 0;
  double max_diff = 0.0;        // max |R_gauss - R_warp|
  double max_abs_R = 0.0;       // max |R_gauss|
  double max_local_rel = 0.0;   // max |dR| / (1 + |R| + size of the cancelling terms)
  double max_diff_alt = 0.0;    // same with the (n-1) coefficient on the k term
  double tol = 1e-6;
  std::string agreeing;         // "2(n-1)" or "(n-1)"
  bool pass = false;
  double bound() const { return tol * (1.0 + max_abs_R); }
};
CrossOracle cross_oracle(const ProfileCurve& curve, const WarpedManifold& m, double tol = 1e-6);

struct FieldRange {
  double min = 0.0, max = 0.0;
  double s_min = 0.0;
};
FieldRange field_range(const WarpedManifold& m, const SampledField& f);

struct VolumeEstimate {
  double value = 0.0;
  double error = 0.0;  // Richardson estimate from the coarse (2h) grid
};
VolumeEstimate volume(const WarpedManifold& m);

struct DiameterBounds {
  double lower = 0.0;
  double upper = 0.0;
  double pivot = 0.0;  // level through which the upper-bound path runs
};
DiameterBounds diameter_bounds(const WarpedManifold& m);

struct Neck {
  double s = 0.0;
  double w = 0.0;
  double area = 0.0;
};
std::vector<Neck> neck_areas(const WarpedManifold& m);

// max |w - sn(2 delta - u)| over the spans with role "collar" (u from the collar start),
// and the same for the first two finite-difference derivatives.
struct CollarCheck {
  double value = 0.0, slope = 0.0, second = 0.0;
  size_t samples = 0;
};
CollarCheck collar_check(const WarpedManifold& m, double delta);

// |1 - |w'|| from the last (or first) 16 samples at a pole cap.
double pole_closure_defect(const WarpedManifold& m, bool at_end);

// On a space form the induced metric of a distance sphere is already round,
// so the boundary interpolation between g_c and c^2 g_round is the identity:
// returns || g_rd - g_c / sn(c)^2 || = 0 computed from the two sides.
double metric_interpolation_defect(const BackgroundSpace& bg, double c);

void write_samples_csv(std::ostream& os, const ProfileCurve& curve, const WarpedManifold& m);

}  // namespace forge
