#include "forge/curve_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "forge/errors.hpp"
#include "forge/transition.hpp"

namespace forge {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

double Angle::sin() const {
  return std::fabs(theta) <= std::numbers::pi / 4 ? std::sin(theta) : std::cos(phi);
}

double Angle::cos() const {
  return std::fabs(phi) <= std::numbers::pi / 4 ? std::sin(phi) : std::cos(theta);
}

double angle_diff(const Angle& a, const Angle& b) {
  const double mt = std::max(std::fabs(a.theta), std::fabs(b.theta));
  const double mp = std::max(std::fabs(a.phi), std::fabs(b.phi));
  return mt <= mp ? b.theta - a.theta : a.phi - b.phi;
}

const char* to_string(ProfileMode m) {
  switch (m) {
    case ProfileMode::plain: return "plain";
    case ProfileMode::well: return "well";
    case ProfileMode::half_tunnel: return "half-tunnel";
  }
  return "plain";
}

ProfileMode profile_mode_from(const std::string& s) {
  if (s == "well") return ProfileMode::well;
  if (s == "half-tunnel") return ProfileMode::half_tunnel;
  if (s == "plain") return ProfileMode::plain;
  throw ForgeError(ErrorKind::ParseError, "unknown profile mode '" + s + "'");
}

// ---------------------------------------------------------------- segments

CurvatureSegment CurvatureSegment::constant(double k, double length, std::string role) {
  return {length, k, k, false, std::move(role)};
}

CurvatureSegment CurvatureSegment::blend(double k_from, double k_to, double length,
                                         std::string role) {
  return {length, k_from, k_to, true, std::move(role)};
}

double CurvatureSegment::k_at(double u) const {
  if (!ramp) return k_from;
  return k_from + (k_to - k_from) * transition::g(u / length);
}

double CurvatureSegment::turn_to(double u) const {
  if (!ramp) return k_from * u;
  const double x = u / length;
  return length * (k_from * x + (k_to - k_from) * transition::G1(x));
}

double CurvatureSegment::turn_from(double u) const {
  if (!ramp) return k_from * (length - u);
  const double y = 1.0 - u / length;
  return length * (k_to * y - (k_to - k_from) * transition::G1(y));
}

double CurvatureSegment::turn() const {
  if (!ramp) return k_from * length;
  return 0.5 * length * (k_from + k_to);
}

double CurvatureProfile::total_length() const {
  double acc = 0.0;
  for (const auto& s : segments) acc += s.length;
  return acc;
}

std::vector<double> CurvatureProfile::segment_starts() const {
  std::vector<double> out;
  double s = s_init;
  for (const auto& seg : segments) {
    out.push_back(s);
    s += seg.length;
  }
  return out;
}

size_t ProfileCurve::sample_count() const {
  size_t n = 0;
  for (size_t i = 0; i < spans.size(); ++i) n += spans[i].pts.size() - (i ? 1 : 0);
  return n;
}

double ProfileCurve::length() const {
  double acc = 0.0;
  for (const auto& sp : spans) acc += sp.length;
  return acc;
}

// ------------------------------------------------------------------ angles

std::vector<Angle> junction_angles(const CurvatureProfile& p) {
  const size_t S = p.segments.size();
  require(p.anchors.size() == S + 1, "anchors must have one entry per junction");
  require(p.anchors[0].has_value(), "the initial angle must be anchored");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // For theta (sign +1) and phi (sign -1): forward and backward chains.
  auto chain = [&](bool use_theta) {
    const double sgn = use_theta ? 1.0 : -1.0;
    std::vector<double> fv(S + 1), fm(S + 1, inf), bv(S + 1), bm(S + 1, inf);
    double cur = 0.0, mx = inf;
    for (size_t J = 0; J <= S; ++J) {
      if (p.anchors[J]) {
        cur = use_theta ? p.anchors[J]->theta : p.anchors[J]->phi;
        mx = std::fabs(cur);
      } else if (mx < inf) {
        cur += sgn * p.segments[J - 1].turn();
        mx = std::max(mx, std::fabs(cur));
      }
      fv[J] = cur;
      fm[J] = mx;
    }
    cur = 0.0;
    mx = inf;
    for (size_t Jp = S + 1; Jp-- > 0;) {
      if (p.anchors[Jp]) {
        cur = use_theta ? p.anchors[Jp]->theta : p.anchors[Jp]->phi;
        mx = std::fabs(cur);
      } else if (mx < inf) {
        cur -= sgn * p.segments[Jp].turn();
        mx = std::max(mx, std::fabs(cur));
      }
      bv[Jp] = cur;
      bm[Jp] = mx;
    }
    std::vector<double> out(S + 1);
    for (size_t J = 0; J <= S; ++J) out[J] = (fm[J] <= bm[J]) ? fv[J] : bv[J];
    return out;
  };
  const auto th = chain(true);
  const auto ph = chain(false);
  std::vector<Angle> out(S + 1);
  for (size_t J = 0; J <= S; ++J) out[J] = {th[J], ph[J]};
  return out;
}

namespace {

// Angle inside a segment, taken from whichever end keeps magnitudes small.
Angle angle_in(const CurvatureSegment& seg, const Angle& entry, const Angle& exit, double u) {
  const double kf = seg.turn_to(u);
  const double kb = seg.turn_from(u);
  Angle a;
  a.theta = (std::fabs(entry.theta) + std::fabs(kf) <= std::fabs(exit.theta) + std::fabs(kb))
                ? entry.theta + kf
                : exit.theta - kb;
  a.phi = (std::fabs(entry.phi) + std::fabs(kf) <= std::fabs(exit.phi) + std::fabs(kb))
              ? entry.phi - kf
              : exit.phi + kb;
  return a;
}

}  // namespace

int steps_for(const CurvatureSegment& seg, const Angle& entry, const Angle& exit,
              const StepPolicy& policy) {
  const double turn = std::fabs(angle_diff(entry, exit));
  const double radial = seg.length * std::max(std::fabs(entry.cos()), std::fabs(exit.cos()));
  double n = seg.ramp ? std::max(policy.min_steps, policy.min_blend_steps) : policy.min_steps;
  n = std::max(n, std::ceil(turn / policy.max_turn));
  n = std::max(n, std::ceil(radial / policy.base_step));
  n = std::min(n, 4.0e6);
  long N = static_cast<long>(n);
  if (N % 2) ++N;
  return static_cast<int>(N << policy.refine);
}

// --------------------------------------------------------------- integrate

ProfileCurve integrate_curve(const CurvatureProfile& profile, const StepPolicy& policy) {
  require(profile.anchors.size() == profile.segments.size() + 1 && profile.anchors[0],
          "profile has no initial angle");
  return integrate_curve(profile, {profile.t_init, profile.r_init, *profile.anchors[0]},
                         policy);
}

ProfileCurve integrate_curve(const CurvatureProfile& profile, const CurveStart& initial,
                             const StepPolicy& policy) {
  require(policy.base_step > 0 && policy.min_steps >= 4 && policy.max_turn > 0,
          "step policy must be positive");
  require(initial.r > 0, "initial radius must be positive");
  CurvatureProfile p = profile;
  p.anchors[0] = initial.a;
  p.radii.resize(p.segments.size() + 1);
  if (!p.radii[0] || *p.radii[0] != initial.r) {
    std::fill(p.radii.begin(), p.radii.end(), std::nullopt);
  }
  const auto J = junction_angles(p);

  ProfileCurve out;
  out.mode = p.mode;
  out.bg = p.bg;
  out.delta = p.delta;
  out.delta0 = p.delta0;
  out.d = p.d;
  out.kappa = p.kappa;
  out.floor_drop = p.floor_drop;
  out.j = p.j;
  out.terminal_pole = p.terminal_pole;
  out.first_margin_span = p.first_margin_segment;

  double s0 = p.s_init, t0 = initial.t, r = initial.r;
  const size_t S = p.segments.size();
  for (size_t i = 0; i < S; ++i) {
    const auto& seg = p.segments[i];
    require(seg.length > 0, "segment '" + seg.role + "' has non-positive length");
    const Angle entry = J[i], exit = J[i + 1];
    if (i > 0 && p.radii[i]) {
      const double scale = out.spans.back().pts.front().r;
      out.max_radius_gap = std::max(out.max_radius_gap, std::fabs(r - *p.radii[i]) / scale);
      r = *p.radii[i];
    }
    const int N = steps_for(seg, entry, exit, policy);
    const double h = seg.length / N;
    CurveSpan sp;
    sp.segment = static_cast<int>(i);
    sp.role = seg.role;
    sp.s0 = s0;
    sp.t0 = t0;
    sp.h = h;
    sp.length = seg.length;
    sp.pts.resize(N + 1);

    auto at = [&](int idx, double u) {
      if (idx == 0) return entry;
      if (idx == 2 * N) return exit;
      return angle_in(seg, entry, exit, u);
    };
    double dt = 0.0;
    Angle a0 = entry;
    sp.pts[0] = {0.0, 0.0, r, 0.0, entry.theta, entry.phi, seg.k_at(0.0)};
    for (int n = 0; n < N; ++n) {
      const double u1 = (n + 1 == N) ? seg.length : (n + 1) * h;
      const double um = n * h + 0.5 * h;
      const Angle am = at(2 * n + 1, um);
      const Angle a1 = at(2 * n + 2, u1);
      // Classical RK4 with a state-independent right-hand side.
      dt += h / 6.0 * (a0.sin() + 4.0 * am.sin() + a1.sin());
      const double dr = -h / 6.0 * (a0.cos() + 4.0 * am.cos() + a1.cos());
      r += dr;
      sp.pts[n + 1] = {u1, dt, r, dr, a1.theta, a1.phi, seg.k_at(u1)};
      a0 = a1;
    }
    const bool last = (i + 1 == S);
    if (last && p.terminal_pole) {
      sp.pts.back().dr = -sp.pts[sp.pts.size() - 2].r;
      sp.pts.back().r = 0.0;
    } else if (p.radii[i + 1]) {
      const double gap = std::fabs(sp.pts.back().r - *p.radii[i + 1]) / sp.pts.front().r;
      if (gap > 1e-8) {
        throw ForgeError(ErrorKind::StepTooCoarse, "radius drifts from the stored junction value in '" +
                                                       seg.role + "'");
      }
    }
    for (size_t q = 1; q < sp.pts.size(); ++q) {
      const bool terminal_point = last && p.terminal_pole && q + 1 == sp.pts.size();
      if (!terminal_point && !(sp.pts[q].r > 0.0)) {
        throw ForgeError(ErrorKind::NonPositiveRadius,
                         "radius reached " + std::to_string(sp.pts[q].r) + " in segment '" +
                             seg.role + "'");
      }
    }
    const double defect = unit_speed_defect(sp);
    const double ks = std::max(std::fabs(seg.k_from), std::fabs(seg.k_to)) + 1.0 / seg.length;
    const double tol = 10.0 * std::pow(h * ks, 4) + 1e-9;
    if (defect > tol) {
      throw ForgeError(ErrorKind::StepTooCoarse, "unit-speed defect " + fmt_g(defect) +
                                                     " (tolerance " + fmt_g(tol) + ") in segment '" +
                                                     seg.role + "' #" + std::to_string(i));
    }
    s0 += seg.length;
    t0 += sp.pts.back().dt;
    r = sp.pts.back().r;
    out.spans.push_back(std::move(sp));
  }
  return out;
}

double unit_speed_defect(const CurveSpan& span) {
  const auto& q = span.pts;
  if (q.size() < 5) return 0.0;
  double worst = 0.0;
  const double h = span.h;
  for (size_t i = 2; i + 2 < q.size(); ++i) {
    const double tp = (-q[i + 2].dt + 8.0 * q[i + 1].dt - 8.0 * q[i - 1].dt + q[i - 2].dt) / (12.0 * h);
    // r differences rebuilt from the step increments: r_{i+2} - r_{i-2} etc.
    const double outer = q[i - 1].dr + q[i].dr + q[i + 1].dr + q[i + 2].dr;
    const double inner = q[i].dr + q[i + 1].dr;
    const double rp = (-outer + 8.0 * inner) / (12.0 * h);
    worst = std::max(worst, std::fabs(tp * tp + rp * rp - 1.0));
  }
  return worst;
}

// ------------------------------------------------------------- closed form

CurveStart advance_arc(const CurveStart& s, double k, double length,
                       const std::optional<Angle>& exit) {
  const Angle end = exit ? *exit : s.a.turned(k * length);
  const double half_turn = 0.5 * angle_diff(s.a, end);
  const Angle mid{0.5 * (s.a.theta + end.theta), 0.5 * (s.a.phi + end.phi)};
  const double sinc = half_turn == 0.0 ? 1.0 : std::sin(half_turn) / half_turn;
  const double chord = length * sinc;
  return {s.t + chord * mid.sin(), s.r - chord * mid.cos(), end};
}

namespace {

struct Builder {
  CurvatureProfile p;
  CurveStart state;
  double s = 0.0;  // arclength from the start

  void push(CurvatureSegment seg, std::optional<Angle> exit = std::nullopt) {
    state = advance_arc(state, seg.k_from, seg.length, exit);
    s += seg.length;
    p.segments.push_back(std::move(seg));
    p.anchors.push_back(exit);
    p.radii.push_back(state.r);
  }
  void mark(const std::string& label) { p.arcs.points.push_back({label, s, state.t, state.r, state.a}); }
};

double resolve_drop(const ArcParams& a) { return a.floor_drop > 0 ? a.floor_drop : 1.0 / a.j; }

Builder build_core(const ArcParams& a, const BackgroundSpace& bg, ProfileMode mode) {
  require(bg.n >= 3, "dimension must be at least 3");
  require(a.j >= 1, "tolerance index j must be >= 1");
  require(a.delta > 0, "delta must be positive");
  require(2.0 * a.delta < bg.max_radius(), "2 delta exceeds the injectivity radius");
  const double delta0 = a.delta0 > 0 ? a.delta0 : 0.5 * a.delta;
  require(delta0 < a.delta, "delta0 must lie in (0, delta)");
  const double drop = resolve_drop(a);
  const double floor = a.kappa - drop;

  Builder b;
  b.p.mode = mode;
  b.p.bg = bg;
  b.p.delta = a.delta;
  b.p.delta0 = delta0;
  b.p.d = a.d;
  b.p.kappa = a.kappa;
  b.p.floor_drop = drop;
  b.p.j = a.j;
  b.p.s_init = -(2.0 * a.delta - delta0);
  b.p.t_init = 0.0;
  b.p.r_init = 2.0 * a.delta;
  b.p.anchors.push_back(Angle::from_theta(0.0));
  b.p.radii.push_back(2.0 * a.delta);
  b.state = {0.0, 2.0 * a.delta, Angle::from_theta(0.0)};
  b.mark("start");

  b.push(CurvatureSegment::constant(0.0, 2.0 * a.delta - delta0, "collar"), Angle::from_theta(0.0));
  b.state.r = delta0;  // exact by construction
  b.p.radii.back() = delta0;
  b.mark("inner");

  // Largest s0 <= delta0/2 keeping R above the floor and k_1 < 1 on a 2^10 grid.
  // A relative margin of 1e-12 keeps the accept decision robust to rounding.
  const double guard = floor + 1e-12 * std::max(1.0, std::fabs(floor));
  auto admissible = [&](double s) {
    for (int i = 0; i <= 1024; ++i) {
      const double x = s * i / 1024.0;
      const double r = delta0 - std::sin(x);
      if (!(r > 0)) return false;
      if (!(scalar_from_curve(bg, r, std::sin(x), 1.0) > guard)) return false;
      if (!(std::sin(x) / (8.0 * r) < 1.0)) return false;
    }
    return true;
  };
  double s0 = 0.5 * delta0;
  if (!admissible(s0)) {
    if (!admissible(0.0)) {
      throw ForgeError(ErrorKind::NoAdmissibleS0, "background scalar curvature below the floor");
    }
    double lo = 0.0, hi = s0;
    for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
    }
    s0 = lo;
  }
  if (!(s0 > 0)) throw ForgeError(ErrorKind::NoAdmissibleS0, "no positive s0 found");

  auto& rec = b.p.arcs;
  rec.s0 = s0;
  rec.k.push_back(1.0);
  rec.ds.push_back(s0);
  b.push(CurvatureSegment::constant(1.0, s0, "unit-arc"));
  b.mark("s0");
  rec.r.push_back(b.state.r);
  rec.theta.push_back(b.state.a);
  b.p.first_margin_segment = static_cast<int>(b.p.segments.size());

  const Angle bar{std::atan2(12.0, 5.0), std::atan2(5.0, 12.0)};
  rec.theta_bar = bar;
  for (int i = 1;; ++i) {
    require(i < 1000000, "inductive arcs failed to reach the target angle");
    const double sin_prev = b.state.a.sin();
    const double k = sin_prev / (8.0 * b.state.r);
    double ds = 0.5 * b.state.r;
    std::optional<Angle> exit;
    const bool last = b.state.a.theta + k * ds >= bar.theta;
    if (last) {
      ds = angle_diff(b.state.a, bar) / k;
      exit = bar;
    }
    rec.k.push_back(k);
    rec.ds.push_back(ds);
    b.push(CurvatureSegment::constant(k, ds, "arc-" + std::to_string(i)), exit);
    b.mark("s" + std::to_string(i));
    rec.r.push_back(b.state.r);
    rec.theta.push_back(b.state.a);
    if (last) {
      rec.m = i;
      break;
    }
  }
  rec.length_to_sm = b.s;

  // Window for k_{m+1}: 2(1 - sin(bar))/r_m < k < sin(bar)/(4 r_m); take the midpoint.
  const double rm = b.state.r;
  const double sb = bar.sin();
  const double k1 = 0.5 * (2.0 * (1.0 - sb) / rm + sb / (4.0 * rm));
  rec.k.push_back(k1);
  const Angle right = Angle::from_phi(0.0);
  const CurveStart full = advance_arc(b.state, k1, bar.phi / k1, right);
  rec.r_m1 = full.r;
  return b;
}

double arc_margin(const CurvatureProfile& p) {
  // Evaluated on the exact breakpoint data for every segment past s0.
  const auto J = junction_angles(p);
  double margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < p.segments.size(); ++i) {
    const auto& seg = p.segments[i];
    if (static_cast<int>(i) < p.first_margin_segment || !(seg.k_from > 0)) continue;
    const double r0 = *p.radii[i], r1 = *p.radii[i + 1];
    margin = std::min(margin, J[i].sin() / (4.0 * r0) - seg.k_from);
    if (r1 > 0) margin = std::min(margin, J[i + 1].sin() / (4.0 * r1) - seg.k_from);
  }
  return margin;
}

}  // namespace

CurvatureProfile build_well_arcs(const ArcParams& a, const BackgroundSpace& bg) {
  require(a.d > 0, "wells need a positive elongation d");
  Builder b = build_core(a, bg, ProfileMode::well);
  auto& rec = b.p.arcs;
  const double k1 = rec.k.back();

  // Run angle: theta_hat in (max{bar, acos(r_{m+1} / (2 max(d,1)))}, pi/2), midpoint.
  const double D = std::max(a.d, 1.0);
  const double x = rec.r_m1 / (2.0 * D);
  const double upper = std::min(rec.theta_bar.phi, x < 1.0 ? std::asin(x) : kHalfPi);
  if (!(upper > 0.0) || !std::isfinite(upper)) {
    throw ForgeError(ErrorKind::StopAngleInfeasible, "empty run-angle interval");
  }
  rec.stop_phi_upper = upper;
  rec.stop = Angle::from_phi(0.5 * upper);
  b.push(CurvatureSegment::constant(k1, (rec.theta_bar.phi - rec.stop.phi) / k1, "stop-arc"),
         rec.stop);
  b.mark("run-start");
  b.push(CurvatureSegment::constant(0.0, a.d, "run"), rec.stop);
  b.mark("run-end");
  rec.r_run_end = b.state.r;

  const double k3 = -4.0 * rec.stop.sin() / b.state.r;
  rec.k_close = k3;
  b.push(CurvatureSegment::constant(k3, rec.stop.theta / -k3, "closing-arc"),
         Angle::from_theta(0.0));
  b.mark("closing-end");
  rec.r_close_end = b.state.r;
  if (!(b.state.r > 0)) throw ForgeError(ErrorKind::NonPositiveRadius, "closing arc overshoots");
  b.push(CurvatureSegment::constant(0.0, b.state.r, "pole-run"), Angle::from_theta(0.0));
  b.state.r = 0.0;
  b.p.radii.back() = 0.0;
  b.mark("tip");
  b.p.terminal_pole = true;
  rec.arc_margin = arc_margin(b.p);
  return b.p;
}

CurvatureProfile build_half_tunnel_arcs(const ArcParams& a, const BackgroundSpace& bg) {
  ArcParams q = a;
  q.d = 0.0;
  Builder b = build_core(q, bg, ProfileMode::half_tunnel);
  auto& rec = b.p.arcs;
  const double k1 = rec.k.back();
  b.push(CurvatureSegment::constant(k1, rec.theta_bar.phi / k1, "stop-arc"), Angle::from_phi(0.0));
  b.mark("plateau-start");
  rec.plateau_radius = b.state.r;
  b.push(CurvatureSegment::constant(0.0, b.state.r, "plateau"), Angle::from_phi(0.0));
  b.mark("plateau-end");
  rec.arc_margin = arc_margin(b.p);
  return b.p;
}

CurvatureProfile plain_profile(const BackgroundSpace& bg, double r_init, const Angle& start,
                               std::vector<CurvatureSegment> segments, double t_init) {
  CurvatureProfile p;
  p.bg = bg;
  p.r_init = r_init;
  p.t_init = t_init;
  p.segments = std::move(segments);
  p.anchors.assign(p.segments.size() + 1, std::nullopt);
  p.anchors[0] = start;
  p.radii.assign(p.segments.size() + 1, std::nullopt);
  p.radii[0] = r_init;
  return p;
}

CurvatureProfile vertical_profile(double r_from, double r_to, const BackgroundSpace& bg,
                                  double kappa) {
  require(r_from > r_to && r_to > 0, "vertical profile needs r_from > r_to > 0");
  CurvatureProfile p;
  p.bg = bg;
  p.kappa = kappa;
  p.r_init = r_from;
  p.anchors = {Angle::from_theta(0.0), Angle::from_theta(0.0)};
  p.segments = {CurvatureSegment::constant(0.0, r_from - r_to, "cap")};
  p.radii = {r_from, r_to};
  return p;
}

CurvatureProfile plateau_profile(double radius, double length, const BackgroundSpace& bg,
                                 double kappa) {
  require(radius > 0 && length > 0, "cylinder needs positive radius and length");
  CurvatureProfile p;
  p.bg = bg;
  p.kappa = kappa;
  p.r_init = radius;
  p.anchors = {Angle::from_phi(0.0), Angle::from_phi(0.0)};
  p.segments = {CurvatureSegment::constant(0.0, length, "cylinder")};
  p.radii = {radius, radius};
  return p;
}

}  // namespace forge
