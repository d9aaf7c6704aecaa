#include "forge/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forge/errors.hpp"

namespace forge {

namespace {

WarpSpan mirrored_span(const WarpSpan& sp) {
  WarpSpan out = sp;
  std::reverse(out.w.begin(), out.w.end());
  std::reverse(out.r.begin(), out.r.end());
  if (!sp.dw.empty()) {
    const size_t N = sp.dw.size() - 1;
    out.dw[0] = 0.0;
    for (size_t i = 1; i <= N; ++i) out.dw[i] = -sp.dw[N - i + 1];
  }
  return out;
}

// One-sided fourth-order derivatives at the first sample of a span, in the
// direction of increasing index.
struct EndDerivs {
  double d1, d2;
};

EndDerivs end_derivs(const WarpSpan& sp, bool at_end) {
  const size_t N = sp.w.size() - 1;
  require(N >= 5, "span too short for interface differences");
  double v[6];
  // v[k] = w at k steps inward from the chosen end, minus w at the end.
  for (size_t k = 0; k <= 5; ++k) {
    double acc = 0.0;
    for (size_t q = 1; q <= k; ++q) {
      if (sp.dw.empty()) {
        acc = at_end ? sp.w[N - k] - sp.w[N] : sp.w[k] - sp.w[0];
        break;
      }
      acc += at_end ? -sp.dw[N - q + 1] : sp.dw[q];
    }
    v[k] = acc;
  }
  const double h = sp.h;
  const double d1 = (48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
  const double d2 = (-154 * v[1] + 214 * v[2] - 156 * v[3] + 61 * v[4] - 10 * v[5]) / (12 * h * h);
  // Stepping inward from the end runs against the coordinate.
  return at_end ? EndDerivs{-d1, d2} : EndDerivs{d1, d2};
}

bool retryable(ErrorKind k) {
  switch (k) {
    case ErrorKind::AlphaTooLarge:
    case ErrorKind::NoAdmissibleS0:
    case ErrorKind::StopAngleInfeasible:
    case ErrorKind::NonPositiveRadius:
    case ErrorKind::StepTooCoarse:
      return true;
    default:
      return false;
  }
}

GluedPiece piece_from(const std::string& name, ProfileCurve curve) {
  GluedPiece p;
  p.name = name;
  p.curve = std::make_shared<const ProfileCurve>(std::move(curve));
  p.warp = realize(p.curve);
  return p;
}

template <typename Build>
GluedPiece with_retries(double delta, const BuildOptions& opt,
                        int* halvings, double* delta0_used, Build build) {
  double delta0 = delta / 2;
  for (int h = 0;; ++h) {
    try {
      GluedPiece p = build(delta0);
      if (halvings) *halvings = h;
      if (delta0_used) *delta0_used = delta0;
      return p;
    } catch (const ForgeError& e) {
      if (!retryable(e.kind()) || h >= opt.max_delta0_halvings) throw;
      delta0 /= 2;
    }
  }
}

void check_ball(const BackgroundSpace& bg, double delta) {
  require(delta > 0, "delta must be positive");
  const double rmax = bg.max_radius();
  require(!std::isfinite(rmax) || 2 * delta < rmax,
          "2 delta must stay below the background injectivity radius");
}

}  // namespace

const GluedPiece& GluedManifold::piece(const std::string& name) const {
  for (const auto& p : pieces) {
    if (p.name == name) return p;
  }
  throw ForgeError(ErrorKind::InvalidInput, "no piece named '" + name + "'");
}

std::vector<double> GluedManifold::interfaces() const {
  std::vector<double> out;
  for (size_t k = 1; k < pieces.size(); ++k) out.push_back(pieces[k].offset);
  return out;
}

GluedManifold assemble(const std::string& kind, const BackgroundSpace& bg,
                       std::vector<GluedPiece> pieces) {
  require(!pieces.empty(), "nothing to assemble");
  GluedManifold m;
  m.kind = kind;
  m.n = bg.n;
  m.bg = bg;
  m.bg2 = bg;
  m.flat.n = bg.n;
  m.flat.bg = bg;
  m.flat.label = kind;
  double offset = 0.0;
  for (auto& p : pieces) {
    const auto& w = p.warp;
    const double a = w.s_begin(), len = w.length();
    p.offset = offset;
    p.first_span = m.flat.spans.size();
    p.span_count = w.spans.size();
    if (!p.mirrored) {
      for (const auto& sp : w.spans) {
        WarpSpan c = sp;
        c.s0 = offset + (sp.s0 - a);
        m.flat.spans.push_back(std::move(c));
      }
    } else {
      for (auto it = w.spans.rbegin(); it != w.spans.rend(); ++it) {
        WarpSpan c = mirrored_span(*it);
        c.s0 = offset + (len - (it->s0 - a + it->length()));
        m.flat.spans.push_back(std::move(c));
      }
    }
    offset += len;
    if (p.curve) {
      m.kappa = std::max(m.kappa, p.curve->kappa);
      m.floor_drop = std::max(m.floor_drop, p.curve->floor_drop);
      m.j = std::max(m.j, p.curve->j);
    }
  }
  m.flat.kappa = m.kappa;
  m.flat.floor_drop = m.floor_drop;
  m.flat.j = m.j;
  auto cap = [](double w) { return w == 0.0 ? Cap{CapKind::pole, 0.0} : Cap{CapKind::boundary, w}; };
  m.flat.start = cap(m.flat.spans.front().w.front());
  m.flat.end = cap(m.flat.spans.back().w.back());
  m.pieces = std::move(pieces);
  return m;
}

GluedPiece cap_piece(const BackgroundSpace& bg, double r_to, double kappa,
                     const StepPolicy& policy) {
  const double rmax = bg.max_radius();
  const double r_from = std::isfinite(rmax) ? rmax : r_to + 1.0;
  require(r_from > r_to && r_to >= 0, "cap needs r_to below the outer radius");
  CurvatureProfile p;
  if (r_to > 0) {
    p = vertical_profile(r_from, r_to, bg, kappa);
  } else {
    p = plain_profile(bg, r_from, Angle::from_theta(0.0),
                      {CurvatureSegment::constant(0.0, r_from, "cap")});
    p.kappa = kappa;
    p.terminal_pole = true;
    p.radii.back() = 0.0;
  }
  return piece_from(r_to > 0 ? "cap" : "sphere", integrate_curve(p, policy));
}

GluedManifold round_sphere(const BackgroundSpace& bg, const StepPolicy& policy) {
  require(bg.K0 > 0, "a round sphere needs K0 > 0");
  GluedManifold m = assemble("sphere", bg, {cap_piece(bg, 0.0, bg.scalar(), policy)});
  m.kappa = bg.scalar();
  return m;
}

GluedPiece build_well_piece(const BackgroundSpace& bg, double delta, double d, double kappa,
                            int j, double floor_drop, const BuildOptions& opt, int* halvings,
                            double* delta0_used) {
  check_ball(bg, delta);
  require(d > 0, "wells need d > 0 (d = 0 wells are unsupported)");
  require(j >= 1, "j must be at least 1");
  return with_retries(delta, opt, halvings, delta0_used, [&](double delta0) {
    ArcParams a;
    a.delta = delta;
    a.delta0 = delta0;
    a.d = d;
    a.kappa = kappa;
    a.j = j;
    a.floor_drop = floor_drop;
    auto p = build_well_arcs(a, bg);
    if (opt.smooth) p = smooth_curvature(p, opt.blend, opt.policy);
    auto c = integrate_curve(p, opt.policy);
    if (opt.smooth) {
      const auto chk = check_smoothed(p, c);
      if (!chk.pass) throw ForgeError(ErrorKind::AlphaTooLarge, "smoothed well fails: " + chk.failure);
    }
    return piece_from("well", std::move(c));
  });
}

GluedManifold attach_well(const BackgroundSpace& bg, double delta, double d, double kappa, int j,
                          const BuildOptions& opt) {
  int halvings = 0;
  double delta0 = 0.0;
  GluedPiece well = build_well_piece(bg, delta, d, kappa, j, 0.0, opt, &halvings, &delta0);
  GluedPiece cap = cap_piece(bg, 2 * delta, kappa, opt.policy);
  GluedManifold m = assemble("well", bg, {std::move(cap), std::move(well)});
  m.kappa = kappa;
  m.floor_drop = m.piece("well").curve->floor_drop;
  m.j = j;
  m.delta = delta;
  m.delta0 = delta0;
  m.d = d;
  m.delta0_halvings = halvings;
  return m;
}

GluedManifold attach_tunnel(const BackgroundSpace& bg, const BackgroundSpace& bg2, double delta,
                            double d, double kappa, int j, const BuildOptions& opt) {
  check_ball(bg, delta);
  check_ball(bg2, delta);
  require(bg.n == bg2.n, "tunnel backgrounds must share the dimension");
  require(d >= 0, "tunnel length must be nonnegative");
  auto half = [&](const BackgroundSpace& b, int* halvings, double* d0) {
    return with_retries(delta, opt, halvings, d0, [&](double delta0) {
      ArcParams a;
      a.delta = delta;
      a.delta0 = delta0;
      a.kappa = kappa;
      a.j = j;
      auto p = build_half_tunnel_arcs(a, b);
      if (opt.smooth) p = smooth_curvature(p, opt.blend, opt.policy);
      auto c = integrate_curve(p, opt.policy);
      if (opt.smooth) {
        const auto chk = check_smoothed(p, c);
        if (!chk.pass) throw ForgeError(ErrorKind::AlphaTooLarge, "smoothed half tunnel fails: " + chk.failure);
      }
      return piece_from("half-tunnel", std::move(c));
    });
  };
  int h1 = 0, h2 = 0;
  double d01 = 0.0, d02 = 0.0;
  GluedPiece a = half(bg, &h1, &d01);
  // The construction is deterministic, so equal backgrounds share one half.
  const bool same = bg.n == bg2.n && bg.K0 == bg2.K0;
  GluedPiece b = same ? a : half(bg2, &h2, &d02);
  const double c1 = a.curve->spans.back().pts.back().r;
  const double c2 = b.curve->spans.back().pts.back().r;
  if (std::fabs(c1 - c2) > 1e-10 * std::max(c1, c2)) {
    throw ForgeError(ErrorKind::RadiusMismatch, "half tunnels end at different radii");
  }
  std::vector<GluedPiece> pieces;
  pieces.push_back(cap_piece(bg, 2 * delta, kappa, opt.policy));
  pieces.push_back(std::move(a));
  if (d > 0) {
    pieces.push_back(piece_from("cylinder",
                                integrate_curve(plateau_profile(c1, d, bg, kappa), opt.policy)));
  }
  b.name = "half-tunnel'";
  b.mirrored = true;
  pieces.push_back(std::move(b));
  GluedPiece cap2 = cap_piece(bg2, 2 * delta, kappa, opt.policy);
  cap2.name = "cap'";
  cap2.mirrored = true;
  pieces.push_back(std::move(cap2));
  GluedManifold m = assemble("tunnel", bg, std::move(pieces));
  m.bg2 = bg2;
  m.kappa = kappa;
  m.j = j;
  m.delta = delta;
  m.delta0 = d01;
  m.d = d;
  m.neck_radius = c1;
  m.delta0_halvings = std::max(h1, h2);
  return m;
}

std::vector<InterfaceCheck> interface_checks(const GluedManifold& m) {
  std::vector<InterfaceCheck> out;
  for (size_t k = 1; k < m.pieces.size(); ++k) {
    const auto& L = m.flat.spans[m.pieces[k].first_span - 1];
    const auto& R = m.flat.spans[m.pieces[k].first_span];
    InterfaceCheck c;
    c.s = m.pieces[k].offset;
    c.left = m.pieces[k - 1].name;
    c.right = m.pieces[k].name;
    c.w_left = L.w.back();
    c.w_right = R.w.front();
    const auto dl = end_derivs(L, true);
    const auto dr = end_derivs(R, false);
    c.slope_left = dl.d1;
    c.slope_right = dr.d1;
    c.second_left = dl.d2;
    c.second_right = dr.d2;
    const double wmax = std::max(std::fabs(c.w_left), std::fabs(c.w_right));
    c.value_gap = wmax > 0 ? std::fabs(c.w_left - c.w_right) / wmax : 0.0;
    c.slope_gap = std::fabs(c.slope_left - c.slope_right);
    c.second_gap = std::fabs(c.second_left - c.second_right);
    const double h = std::max(L.h, R.h);
    const double l = std::min(L.length(), R.length());
    const double scale = wmax / (l * l) + std::max(std::fabs(c.second_left), std::fabs(c.second_right));
    c.second_tol = 10.0 * (h / l) * (h / l) * scale;
    c.pass = c.value_gap <= 1e-8 && c.slope_gap <= 1e-8 && c.second_gap <= c.second_tol;
    out.push_back(c);
  }
  return out;
}

CrossOracle cross_oracle(const GluedManifold& m, double tol) {
  CrossOracle out;
  out.tol = tol;
  for (const auto& p : m.pieces) {
    if (!p.curve) continue;
    const auto x = cross_oracle(*p.curve, p.warp, tol);
    out.compared += x.compared;
    out.max_diff = std::max(out.max_diff, x.max_diff);
    out.max_abs_R = std::max(out.max_abs_R, x.max_abs_R);
    out.max_local_rel = std::max(out.max_local_rel, x.max_local_rel);
    out.max_diff_alt = std::max(out.max_diff_alt, x.max_diff_alt);
  }
  out.agreeing = out.max_diff <= out.max_diff_alt ? "2(n-1)" : "(n-1)";
  out.pass = out.compared > 0 && out.max_diff <= out.bound();
  return out;
}

double min_scalar(const GluedManifold& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : m.pieces) {
    if (!p.curve) continue;
    for (const auto& v : scalar_curvature_gauss(*p.curve)) {
      for (double x : v) {
        if (std::isfinite(x)) lo = std::min(lo, x);
      }
    }
  }
  return lo;
}

double mirror_defect(const GluedManifold& m) {
  std::vector<double> w;
  for (size_t k = 0; k < m.flat.spans.size(); ++k) {
    const auto& sp = m.flat.spans[k];
    for (size_t i = k ? 1 : 0; i < sp.w.size(); ++i) w.push_back(sp.w[i]);
  }
  double worst = 0.0, wmax = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    worst = std::max(worst, std::fabs(w[i] - w[w.size() - 1 - i]));
    wmax = std::max(wmax, std::fabs(w[i]));
  }
  return wmax > 0 ? worst / wmax : 0.0;
}

}  // namespace forge
