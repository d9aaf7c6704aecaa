#include "forge/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forge/errors.hpp"
#include "forge/transition.hpp"

namespace forge {

namespace {

// Appends segments while tracking the end state: closed form on constant
// segments, a local integration on blends. Every junction radius is stored.
struct Assembler {
  CurvatureProfile q;
  CurveStart state;
  StepPolicy policy;

  void add(CurvatureSegment s, std::optional<Angle> exit = std::nullopt, bool terminal = false) {
    if (!(s.length > 0)) {
      throw ForgeError(ErrorKind::StopAngleInfeasible, "non-positive smoothed segment '" + s.role + "'");
    }
    if (!s.ramp) {
      state = advance_arc(state, s.k_from, s.length, exit);
    } else {
      CurvatureProfile one;
      one.bg = q.bg;
      one.t_init = state.t;
      one.r_init = state.r;
      one.segments = {s};
      one.anchors = {state.a, exit};
      one.radii = {state.r, std::nullopt};
      const ProfileCurve c = integrate_curve(one, policy);
      const auto& e = c.spans.back().pts.back();
      state = {state.t + e.dt, e.r, exit ? *exit : e.angle()};
    }
    if (terminal) state.r = 0.0;
    if (!terminal && !(state.r > 0)) throw ForgeError(ErrorKind::NonPositiveRadius, "smoothed curve reaches the axis in '" + s.role + "'");
    q.segments.push_back(std::move(s));
    q.anchors.push_back(exit);
    q.radii.push_back(state.r);
  }
};

Assembler start_like(const CurvatureProfile& p, double alpha, const StepPolicy& policy) {
  Assembler a;
  a.q = p;
  a.q.segments.clear();
  a.q.anchors = {p.anchors.at(0)};
  a.q.radii = {p.r_init};
  a.q.smoothed = true;
  a.q.alpha_rel = alpha;
  a.q.terminal_pole = false;
  a.state = {p.t_init, p.r_init, *p.anchors.at(0)};
  a.policy = policy;
  return a;
}

// Generic pass: a blend at the start of every segment whose k jumps.
CurvatureProfile smooth_plain(const CurvatureProfile& p, double alpha, const StepPolicy& policy) {
  Assembler a = start_like(p, alpha, policy);
  for (size_t i = 0; i < p.segments.size(); ++i) {
    const auto& s = p.segments[i];
    if (i > 0 && p.segments[i - 1].k_to != s.k_from) {
      const double w = alpha * std::min(p.segments[i - 1].length, s.length);
      a.add(CurvatureSegment::blend(p.segments[i - 1].k_to, s.k_from, w, "blend"));
      a.add(CurvatureSegment::constant(s.k_from, s.length - w, s.role));
    } else {
      a.add(s);
    }
  }
  a.q.terminal_pole = p.terminal_pole;
  if (a.q.terminal_pole) a.q.radii.back() = 0.0;
  return a.q;
}

// Blended well / half-tunnel. The curvature values k_i are those of the
// closed-form construction; each arc's length is re-derived from the smoothed
// radius at its start (half of it), which keeps the halving of r intact.
// Blends give up a little angle, so a few arcs past m may be needed; those
// take k from the same rule applied to the smoothed state.
CurvatureProfile smooth_construction(const CurvatureProfile& p, double alpha,
                                     const StepPolicy& policy) {
  const auto& rec = p.arcs;
  const auto& seg = p.segments;
  Assembler a = start_like(p, alpha, policy);

  a.add(CurvatureSegment::constant(0.0, seg.at(0).length, "collar"), Angle::from_theta(0.0));
  a.state.r = p.delta0;
  a.q.radii.back() = p.delta0;
  // Unit arc: rise 0 -> 1 on [0, a0] and fall 1 -> k_1 on [s0 - a1, s0].
  const double a0 = alpha * rec.s0;
  const double a1 = alpha * std::min(rec.s0, rec.ds.at(1));
  a.add(CurvatureSegment::blend(0.0, 1.0, a0, "blend"));
  a.add(CurvatureSegment::constant(1.0, rec.s0 - a0 - a1, "unit-arc"));
  a.add(CurvatureSegment::blend(1.0, rec.k.at(1), a1, "blend"));
  a.q.first_margin_segment = static_cast<int>(a.q.segments.size());

  // Inductive arcs; arc i >= 2 starts with a blend k_{i-1} -> k_i.
  const Angle bar = rec.theta_bar;
  const int m = rec.m;
  double k_prev = rec.k.at(1), full_prev = 0.0, last_len = 0.0;
  int mt = 0;
  for (int i = 1;; ++i) {
    if (i > 4 * m + 64) throw ForgeError(ErrorKind::StopAngleInfeasible, "smoothed arcs never reach the target angle");
    const double k = i <= m ? rec.k.at(i) : a.state.a.sin() / (8.0 * a.state.r);
    const double full = 0.5 * a.state.r;
    double w = 0.0;
    if (i >= 2) {
      w = alpha * std::min(full_prev, full);
      a.add(CurvatureSegment::blend(k_prev, k, w, "blend"));
    }
    const std::string role = "arc-" + std::to_string(i);
    if (a.state.a.theta + k * (full - w) >= bar.theta) {
      const double len = angle_diff(a.state.a, bar) / k;
      a.add(CurvatureSegment::constant(k, len, role), bar);
      last_len = len;
      mt = i;
      break;
    }
    a.add(CurvatureSegment::constant(k, full - w, role));
    k_prev = k;
    full_prev = full;
  }
  // k_{m+1}: keep the closed-form value while it stays inside the window.
  double k1 = rec.k.at(m + 1);
  {
    const double sb = bar.sin(), rm = a.state.r;
    const double lo = 2.0 * (1.0 - sb) / rm, hi = sb / (4.0 * rm);
    if (mt != m || !(k1 > lo && k1 < hi)) k1 = 0.5 * (lo + hi);
  }
  const double km = a.q.segments.back().k_from;
  const double wm = alpha * std::min(last_len, bar.phi / k1);
  a.add(CurvatureSegment::blend(km, k1, wm, "blend"));
  const CurveStart A = a.state;
  const double phiA = A.a.phi;

  if (p.mode == ProfileMode::half_tunnel) {
    // Constant k_{m+1} until phi*, then a blend of width beta that lands on pi/2.
    const double beta = alpha * (phiA / k1);
    a.add(CurvatureSegment::constant(k1, phiA / k1 - 0.5 * beta, "stop-arc"));
    a.add(CurvatureSegment::blend(k1, 0.0, beta, "blend"), Angle::from_phi(0.0));
    a.q.arcs.plateau_radius = a.state.r;
    a.add(CurvatureSegment::constant(0.0, beta, "plateau"), Angle::from_phi(0.0));
    return a.q;
  }

  // Well: re-select the run angle from the smoothed state so that it sits at
  // the midpoint of the admissible interval after the exit blend.
  const CurveStart full = advance_arc(A, k1, phiA / k1, Angle::from_phi(0.0));
  const double D = std::max(p.d, 1.0);
  const double x = full.r / (2.0 * D);
  const double upper = std::min(bar.phi, x < 1.0 ? std::asin(x) : kHalfPi);
  if (!(upper > 0)) throw ForgeError(ErrorKind::StopAngleInfeasible, "empty run-angle interval");
  const Angle run = Angle::from_phi(0.5 * upper);
  const double wx = alpha * (phiA / k1);
  if (!(p.d > wx)) throw ForgeError(ErrorKind::StopAngleInfeasible, "run shorter than its blend");
  a.add(CurvatureSegment::constant(k1, (phiA - run.phi - 0.5 * k1 * wx) / k1, "stop-arc"));
  a.add(CurvatureSegment::blend(k1, 0.0, wx, "blend"), run);
  a.add(CurvatureSegment::constant(0.0, p.d - wx, "run"), run);
  a.q.arcs.stop = run;
  a.q.arcs.stop_phi_upper = upper;

  const double k3 = -4.0 * run.sin() / a.state.r;
  const double beta = alpha * (run.theta / -k3);
  a.add(CurvatureSegment::blend(0.0, k3, beta, "blend"));
  a.add(CurvatureSegment::constant(k3, run.theta / -k3 - beta, "closing-arc"));
  a.add(CurvatureSegment::blend(k3, 0.0, beta, "blend"), Angle::from_theta(0.0));
  a.q.arcs.k_close = k3;
  if (!(a.state.r > beta)) {
    throw ForgeError(ErrorKind::NonPositiveRadius, "closing blend leaves no vertical run");
  }
  a.add(CurvatureSegment::constant(0.0, a.state.r, "pole-run"), Angle::from_theta(0.0), true);
  a.q.terminal_pole = true;
  return a.q;
}

}  // namespace

SmoothingChecks check_smoothed(const CurvatureProfile& q, const ProfileCurve& c) {
  SmoothingChecks out;
  const double floor = q.kappa_floor();
  double minR = std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  for (size_t si = 0; si < c.spans.size(); ++si) {
    const auto& sp = c.spans[si];
    for (size_t i = 0; i < sp.pts.size(); ++i) {
      const auto& pt = sp.pts[i];
      if (pt.r <= 0) continue;  // terminal pole
      const double s = pt.angle().sin();
      minR = std::min(minR, scalar_from_curve(q.bg, pt.r, s, pt.k));
      if (static_cast<int>(si) >= c.first_margin_span && pt.k > 0) {
        margin = std::min(margin, s / (4.0 * pt.r) - pt.k);
      }
    }
  }
  // Angle kink at junctions: propagated entry + turn against the exit value.
  const auto J = junction_angles(q);
  double resid = 0.0;
  for (size_t i = 0; i < q.segments.size(); ++i) {
    const Angle prop = J[i].turned(q.segments[i].turn());
    resid = std::max(resid, std::fabs(angle_diff(prop, J[i + 1])));
  }
  out.min_R = minR;
  out.arc_margin = margin;
  out.anchor_residual = resid;
  out.pass = true;
  if (!(minR >= floor)) {
    out.pass = false;
    out.failure = "scalar curvature below floor";
  } else if (!(margin > 0)) {
    out.pass = false;
    out.failure = "curvature bound sin/(4r) > k violated";
  } else if (!(resid <= 1e-12)) {
    out.pass = false;
    out.failure = "imposed angle disagrees with propagation";
  }
  return out;
}

CurvatureProfile smooth_curvature(const CurvatureProfile& profile, const BumpBlend& blend,
                                  const StepPolicy& policy) {
  require(blend.alpha > 0 && blend.alpha < 0.5, "blend width must lie in (0, 1/2)");
  double alpha = blend.alpha;
  std::string last_failure = "no attempt";
  for (int attempt = 0; attempt <= blend.max_halvings; ++attempt, alpha *= 0.5) {
    try {
      CurvatureProfile q = profile.mode == ProfileMode::plain
                               ? smooth_plain(profile, alpha, policy)
                               : smooth_construction(profile, alpha, policy);
      if (profile.mode == ProfileMode::plain) return q;
      const ProfileCurve c = integrate_curve(q, policy);
      const SmoothingChecks chk = check_smoothed(q, c);
      if (chk.pass) return q;
      last_failure = chk.failure;
    } catch (const ForgeError& e) {
      if (e.kind() != ErrorKind::NonPositiveRadius && e.kind() != ErrorKind::StopAngleInfeasible &&
          e.kind() != ErrorKind::InvalidInput) {
        throw;
      }
      last_failure = e.what();
    }
  }
  throw ForgeError(ErrorKind::AlphaTooLarge,
                   "smoothing failed after " + std::to_string(blend.max_halvings) +
                       " halvings: " + last_failure);
}

// ---------------------------------------------------------------- mollifier

double mollifier_sigma(double t) {
  const double a = std::fabs(t);
  if (a >= 0.5) return 0.0;
  if (a <= 0.25) return 0.01;
  return 0.01 * (1.0 - transition::g(4.0 * (a - 0.25)));
}

double mollifier_dsigma(double t) {
  const double a = std::fabs(t);
  if (a >= 0.5 || a <= 0.25) return 0.0;
  const double d = -0.01 * 4.0 * transition::dg(4.0 * (a - 0.25));
  return t < 0 ? -d : d;
}

const std::vector<std::pair<double, double>>& mollifier_nodes() {
  static const std::vector<std::pair<double, double>> nodes = [] {
    constexpr int N = 512;
    std::vector<std::pair<double, double>> v(N + 1);
    double total = 0.0;
    for (int i = 0; i <= N; ++i) {
      const double s = -1.0 + 2.0 * i / N;
      const double phi = std::fabs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
      const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      v[i] = {s, w * phi};
      total += w * phi;
    }
    for (auto& [s, w] : v) w /= total;
    // Exact antisymmetry of s and symmetry of weights.
    for (int i = 0; i < N / 2; ++i) {
      v[N - i].first = -v[i].first;
      v[N - i].second = v[i].second;
    }
    v[N / 2].first = 0.0;
    return v;
  }();
  return nodes;
}

Mollified::Mollified(CornerFunction h, MollifierSpec spec) : h_(std::move(h)), spec_(spec) {
  if (!(spec_.epsilon > 0) || !(spec_.epsilon < spec_.epsilon0 / 10.0)) {
    throw ForgeError(ErrorKind::ScaleTooLarge, "epsilon must lie in (0, epsilon0/10)");
  }
}

double Mollified::width(double t) const {
  const double e = spec_.epsilon;
  return e * e * e * mollifier_sigma(t / e);
}

double Mollified::operator()(double t) const {
  const double sg = width(t);
  if (sg == 0.0) return h_.value(t);
  double acc = 0.0;
  for (const auto& [s, w] : mollifier_nodes()) acc += w * h_.value(t - sg * s);
  return acc;
}

double Mollified::derivative(double t) const {
  const double e = spec_.epsilon;
  const double sg = width(t);
  if (sg == 0.0) return h_.slope(t);
  const double dsg = e * e * mollifier_dsigma(t / e);
  double acc = 0.0;
  for (const auto& [s, w] : mollifier_nodes()) acc += w * h_.slope(t - sg * s) * (1.0 - s * dsg);
  return acc;
}

Mollified mollify_lipschitz(CornerFunction h, MollifierSpec spec) {
  return Mollified(std::move(h), spec);
}

}  // namespace forge
