#pragma once

// Generating curves gamma(s) = (t(s), r(s)) of hypersurfaces of revolution
// in a space-form ball. The tangent is (sin theta, -cos theta) and
// theta' = k(s). Profiles are stored as segments with segment-local
// coordinates because the constructions shrink the radius geometrically:
// a well for j = 40 ends at r ~ 1e-50 while the collar sits at r ~ 0.05.

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "forge/background.hpp"

namespace forge {

inline constexpr double kHalfPi = std::numbers::pi / 2;

// An angle carried together with its complement phi = pi/2 - theta, so both
// ends of [0, pi/2] keep full relative precision.
struct Angle {
  double theta = 0.0;
  double phi = kHalfPi;

  static Angle from_theta(double t) { return {t, kHalfPi - t}; }
  static Angle from_phi(double p) { return {kHalfPi - p, p}; }

  double sin() const;
  double cos() const;
  Angle turned(double dtheta) const { return {theta + dtheta, phi - dtheta}; }
};

// b.theta - a.theta, evaluated in whichever representation is smaller.
double angle_diff(const Angle& a, const Angle& b);

enum class ProfileMode { plain, well, half_tunnel };
const char* to_string(ProfileMode m);
ProfileMode profile_mode_from(const std::string& s);

// One piece of k(s): constant (k_from == k_to, ramp = false) or a
// transition k_from + (k_to - k_from) g(u / length).
struct CurvatureSegment {
  double length = 0.0;
  double k_from = 0.0;
  double k_to = 0.0;
  bool ramp = false;
  std::string role;

  static CurvatureSegment constant(double k, double length, std::string role);
  static CurvatureSegment blend(double k_from, double k_to, double length, std::string role);

  double k_at(double u) const;
  double turn_to(double u) const;    // int_0^u k
  double turn_from(double u) const;  // int_u^L k
  double turn() const;               // int_0^L k
};

struct Breakpoint {
  std::string label;
  double s = 0.0;  // arclength from the start of the profile
  double t = 0.0;
  double r = 0.0;
  Angle a;
};

// Closed-form data of the piecewise-constant construction.
struct ArcRecord {
  double s0 = 0.0;          // length of the unit arc
  int m = 0;                // number of inductive arcs
  std::vector<double> k;    // k[0] = 1, k[1..m], k[m+1]
  std::vector<double> ds;   // ds[0] = s0, ds[1..m]
  std::vector<double> r;    // r[i] = r(s_i), i = 0..m
  std::vector<Angle> theta; // theta_i, i = 0..m
  double length_to_sm = 0.0;  // arclength from r = 2 delta to s_m
  Angle theta_bar;
  double r_m1 = 0.0;        // radius where the k_{m+1} arc reaches pi/2
  double stop_phi_upper = 0.0;  // admissible run angles: phi in (0, stop_phi_upper)
  Angle stop;               // chosen run angle (well)
  double k_close = 0.0;     // k_{m+3} (well)
  double r_run_end = 0.0;   // r_{m+2}
  double r_close_end = 0.0; // r_{m+3}
  double plateau_radius = 0.0;  // c (half tunnel)
  double arc_margin = 0.0;  // min over breakpoints past s0 of sin/(4r) - k, k > 0
  std::vector<Breakpoint> points;
};

struct CurvatureProfile {
  ProfileMode mode = ProfileMode::plain;
  BackgroundSpace bg;
  double delta = 0.0;
  double delta0 = 0.0;
  double d = 0.0;
  double kappa = 0.0;
  double floor_drop = 0.0;  // accepted floor is kappa - floor_drop (1/j by default)
  int j = 0;

  double s_init = 0.0;  // global arclength of the first point
  double t_init = 0.0;
  double r_init = 0.0;
  std::vector<CurvatureSegment> segments;
  // Exact angles imposed at junctions (size segments + 1). Junction 0 must be set.
  std::vector<std::optional<Angle>> anchors;
  // Radii known at junctions (closed form or locally integrated). Integration
  // restarts from them: a description by lengths alone is ill-conditioned,
  // since an absolute error made at r ~ 0.1 survives down to r ~ 1e-50.
  std::vector<std::optional<double>> radii;
  bool terminal_pole = false;  // last segment ends at r = 0

  bool smoothed = false;
  double alpha_rel = 0.0;  // blend width as a fraction of the adjacent segment
  int first_margin_segment = 0;  // segments from here on lie past s0

  ArcRecord arcs;

  double kappa_floor() const { return kappa - floor_drop; }
  double total_length() const;
  std::vector<double> segment_starts() const;  // global s of each segment start
};

// Angles at every junction, each propagated from the nearest anchor that
// keeps the accumulated magnitude (and hence rounding) smallest.
std::vector<Angle> junction_angles(const CurvatureProfile& p);

struct StepPolicy {
  double base_step = 1.0 / 512;  // cap on step length where the curve moves radially
  int min_steps = 64;            // per segment
  int min_blend_steps = 2048;    // blends: the profile's higher derivatives are large
  double max_turn = 2e-3;        // cap on angle change per step
  int refine = 0;                // every segment uses 2^refine times the base count

  StepPolicy refined(int levels = 1) const {
    StepPolicy p = *this;
    p.refine += levels;
    return p;
  }
};

struct CurveSample {
  double u = 0.0;   // arclength offset within the span
  double dt = 0.0;  // t offset within the span
  double r = 0.0;
  double dr = 0.0;  // r - r of the previous sample, as computed by the step (0 at the start)
  double theta = 0.0;
  double phi = 0.0;
  double k = 0.0;

  Angle angle() const { return {theta, phi}; }
};

// Samples of one segment on a uniform local grid (endpoints included).
struct CurveSpan {
  int segment = 0;
  std::string role;
  double s0 = 0.0;  // global arclength of the first sample
  double t0 = 0.0;  // global t of the first sample
  double h = 0.0;
  double length = 0.0;
  std::vector<CurveSample> pts;
};

struct ProfileCurve {
  ProfileMode mode = ProfileMode::plain;
  BackgroundSpace bg;
  double delta = 0.0, delta0 = 0.0, d = 0.0, kappa = 0.0, floor_drop = 0.0;
  int j = 0;
  bool terminal_pole = false;
  int first_margin_span = 0;
  double max_radius_gap = 0.0;  // worst |integrated - stored| junction radius, relative
  std::vector<CurveSpan> spans;

  size_t sample_count() const;  // junction samples counted once
  double length() const;
};

struct CurveStart {
  double t = 0.0;
  double r = 0.0;
  Angle a;
};

int steps_for(const CurvatureSegment& seg, const Angle& entry, const Angle& exit,
              const StepPolicy& policy);

ProfileCurve integrate_curve(const CurvatureProfile& profile, const StepPolicy& policy = {});
ProfileCurve integrate_curve(const CurvatureProfile& profile, const CurveStart& initial,
                             const StepPolicy& policy);

// Max over spans of |t'^2 + r'^2 - 1| from fourth-order differences.
double unit_speed_defect(const CurveSpan& span);

// Closed-form advance along a constant-curvature arc. If `exit` is given the
// arc ends exactly at that angle (length must be consistent with it).
CurveStart advance_arc(const CurveStart& s, double k, double length,
                       const std::optional<Angle>& exit = std::nullopt);

struct ArcParams {
  double delta = 0.0;
  double delta0 = 0.0;      // 0 selects delta / 2
  double d = 0.0;
  double kappa = 0.0;
  int j = 1;
  double floor_drop = 0.0;  // 0 selects 1 / j
};

CurvatureProfile build_well_arcs(const ArcParams& p, const BackgroundSpace& bg);
CurvatureProfile build_half_tunnel_arcs(const ArcParams& p, const BackgroundSpace& bg);

// A free profile from an initial point and angle; no junction data beyond the start.
CurvatureProfile plain_profile(const BackgroundSpace& bg, double r_init, const Angle& start,
                               std::vector<CurvatureSegment> segments, double t_init = 0.0);

// Straight profiles used for the untouched parts of glued manifolds.
CurvatureProfile vertical_profile(double r_from, double r_to, const BackgroundSpace& bg,
                                  double kappa);
CurvatureProfile plateau_profile(double radius, double length, const BackgroundSpace& bg,
                                 double kappa);

}  // namespace forge
