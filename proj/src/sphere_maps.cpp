#include "forge/sphere_maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "forge/errors.hpp"

namespace forge {

using std::numbers::pi;

namespace {

std::string at(const char* what, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s at t = %.9g", what, t);
  return buf;
}

void require_closed(const GluedManifold& m) {
  require(m.flat.start.kind == CapKind::pole && m.flat.end.kind == CapKind::pole,
          "axial maps need two pole caps");
  require(m.bg.K0 == 1.0, "axial maps compare with the unit sphere");
}

double largest_power_of_two_below(double x) {
  double e = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(x))));
  if (e >= x) e *= 0.5;
  return e;
}

}  // namespace

double AxialMap::value(double t) const {
  if (!knots.empty()) {
    if (t <= knots.front().first) return knots.front().second;
    for (size_t k = 1; k < knots.size(); ++k) {
      const auto [t0, f0] = knots[k - 1];
      const auto [t1, f1] = knots[k];
      if (t <= t1) return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    }
    return knots.back().second;
  }
  const double u = t - t_corner;
  if (corner && std::fabs(u) < epsilon) return (*corner)(u);
  return u <= 0 ? pi - t : f_corner + a * u;
}

double AxialMap::slope(double t) const {
  if (!knots.empty()) {
    for (size_t k = 1; k < knots.size(); ++k) {
      const auto [t0, f0] = knots[k - 1];
      const auto [t1, f1] = knots[k];
      if (t <= t1 || k + 1 == knots.size()) return (f1 - f0) / (t1 - t0);
    }
    return 0.0;
  }
  const double u = t - t_corner;
  if (corner && std::fabs(u) < epsilon) return corner->derivative(u);
  return u < 0 ? -1.0 : (u > 0 ? a : -0.5 * (1.0 - a));
}

AxialMap build_axial_map(const GluedManifold& m, const MollifierSpec& spec) {
  require_closed(m);
  AxialMap map;
  map.D = m.length();
  if (m.kind == "sphere") {
    map.t_corner = map.D;
    map.rho_min = 0.0;
    map.s_rho_min = map.D;
    return map;
  }
  // Smallest background radius away from the poles; on a plateau the
  // minimum is attained on an interval, reported by its midpoint.
  map.rho_min = std::numeric_limits<double>::infinity();
  double s_first = 0.0, s_last = 0.0;
  for (const auto& sp : m.flat.spans) {
    for (size_t i = 0; i < sp.r.size(); ++i) {
      const double s = sp.s_at(i);
      if (s <= 0.0 || s >= map.D || sp.w[i] == 0.0) continue;
      if (sp.r[i] < map.rho_min) {
        map.rho_min = sp.r[i];
        s_first = s_last = s;
      } else if (sp.r[i] == map.rho_min) {
        s_last = s;
      }
    }
  }
  if (neck_areas(m.flat).empty() || !std::isfinite(map.rho_min)) {
    throw ForgeError(ErrorKind::NoNeck, "no interior minimum of the warp");
  }
  map.s_rho_min = 0.5 * (s_first + s_last);
  map.neck_offset = map.s_rho_min - 0.5 * map.D;
  // pi - rho_min/10 may round to pi; the right piece keeps rho_min/10 itself
  // so that f stays in [0, pi].
  map.f_corner = map.rho_min / 10;
  map.t_corner = pi - map.f_corner;
  map.a = -map.f_corner / (map.D - map.t_corner);
  map.b = -map.a * map.D;

  // The map equals the background radius on the round cap and the collar;
  // the corner must sit strictly past that stretch.
  double s_eq = 0.0;
  for (const auto& sp : m.flat.spans) {
    for (size_t i = 0; i < sp.r.size(); ++i) {
      const double s = sp.s_at(i);
      if (s > map.t_corner) break;
      if (std::fabs(sp.r[i] - (pi - s)) <= 1e-12) s_eq = s;
    }
  }
  map.gap = map.t_corner - s_eq;
  require(map.gap > 0, "corner lies in the equality region");
  map.epsilon = largest_power_of_two_below(std::min(spec.epsilon0 / 20, map.gap / 40));

  CornerFunction h;
  const double fl = pi - map.t_corner, fc = map.f_corner, a = map.a;
  h.left = [fl](double u) { return fl - u; };
  h.right = [fc, a](double u) { return fc + a * u; };
  h.dleft = [](double) { return -1.0; };
  h.dright = [a](double) { return a; };
  h.lipschitz = 1.0;
  MollifierSpec ms = spec;
  ms.epsilon = map.epsilon;
  map.corner = std::make_shared<const Mollified>(mollify_lipschitz(std::move(h), ms));
  return map;
}

AxialMap piecewise_map(const GluedManifold& m, std::vector<std::pair<double, double>> knots) {
  require_closed(m);
  require(knots.size() >= 2, "need two or more knots");
  for (size_t k = 1; k < knots.size(); ++k) require(knots[k].first > knots[k - 1].first, "knots must increase");
  AxialMap map;
  map.D = m.length();
  map.knots = std::move(knots);
  return map;
}

VerificationReport certify_lipschitz(const AxialMap& map, const GluedManifold& m, int samples) {
  require_closed(m);
  require(samples >= 2, "need samples");
  const double D = m.length();
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(samples) + 16);
  for (int i = 0; i <= samples; ++i) ts.push_back(D * i / samples);
  for (double s : m.interfaces()) ts.push_back(s);
  std::sort(ts.begin(), ts.end());

  double worst_slope = 0.0, t_slope = 0.0;
  double worst_sin = -std::numeric_limits<double>::infinity(), t_sin = 0.0;
  double worst_step = -std::numeric_limits<double>::infinity(), t_step = 0.0;
  double prev_f = 0.0, prev_t = -1.0, outside = -std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const double f = map.value(t);
    outside = std::max({outside, -f, f - pi});
    const double df = map.slope(t);
    if (df * df > worst_slope) {
      worst_slope = df * df;
      t_slope = t;
    }
    // w = sin(rho); use the background radius where known (exact on the caps).
    const double r = m.flat.r_at(t);
    const double w = std::isfinite(r) ? std::sin(r) : m.flat.w_at(t);
    const double excess = std::sin(f) * std::sin(f) - w * w;
    if (excess > worst_sin) {
      worst_sin = excess;
      t_sin = t;
    }
    if (t > prev_t && prev_t >= 0 && f - prev_f > worst_step) {
      worst_step = f - prev_f;
      t_step = t;
    }
    prev_f = f;
    prev_t = t;
  }
  VerificationReport rep;
  rep.subject = "axial map";
  const std::string grid = " on " + std::to_string(ts.size()) + " samples";
  rep.add(make_claim("map.slope_sq", worst_slope, "<=", 1.0 + 1e-12, at("max (f')^2", t_slope) + grid));
  rep.add(make_claim("map.sin_sq", worst_sin, "<=", 1e-12, at("max sin^2 f - sin^2 rho", t_sin) + grid));
  rep.add(make_claim("map.monotone", worst_step, "<", 0.0, at("largest step of f", t_step)));
  const double ends = std::max(std::fabs(map.value(0.0) - pi), std::fabs(map.value(D)));
  rep.add(make_claim("map.range", outside, "<=", 0.0, "f stays in [0, pi]"));
  rep.add(make_claim("map.endpoints", ends, "<=", 1e-12, "|f(0) - pi|, |f(D)|"));
  return rep;
}

double certify_width(const VerificationReport& cert, const GluedManifold& m) {
  if (m.n != 3) throw ForgeError(ErrorKind::InvalidInput, "the width bound is for n = 3");
  for (const char* tag : {"map.slope_sq", "map.sin_sq", "map.monotone", "map.range", "map.endpoints"}) {
    const Claim* c = cert.find(tag);
    if (!c || !c->pass) {
      throw ForgeError(ErrorKind::CertificationMissing, std::string("no passing ") + tag);
    }
  }
  return 4 * pi;
}

VerificationReport certify_vadb(const Member& m) {
  VerificationReport rep;
  rep.subject = "metric domination";
  double radial = 0.0, rise = -std::numeric_limits<double>::infinity(), spherical = 0.0;
  size_t samples = 0;
  std::vector<const GluedPiece*> seen;
  for (const auto& site : m.wells) {
    const GluedPiece* p = site.well.get();
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    const auto& bg = m.bg;
    for (const auto& cs : p->curve->spans) {
      for (size_t i = 1; i < cs.pts.size(); ++i) {
        const double dr = cs.pts[i].dr;
        radial = std::max(radial, (dr / cs.h) * (dr / cs.h));
        rise = std::max(rise, dr);
      }
    }
    double wmax = 0.0;
    for (const auto& sp : p->warp.spans) {
      for (double w : sp.w) wmax = std::max(wmax, w);
    }
    for (const auto& sp : p->warp.spans) {
      for (size_t i = 0; i < sp.w.size(); ++i) {
        spherical = std::max(spherical, (bg.sn(sp.r[i]) - sp.w[i]) / wmax);
        ++samples;
      }
    }
  }
  if (seen.empty()) rise = -1.0;  // no wells: the identity
  const std::string grid = std::to_string(samples) + " samples";
  rep.add(make_claim("vadb.radial", radial, "<=", 1.0 + 1e-12, "max (dr/ds)^2, " + grid));
  rep.add(make_claim("vadb.monotone", rise, "<=", 0.0, "largest step of r toward the tip"));
  rep.add(make_claim("vadb.spherical", spherical, "<=", 1e-12, "max (sn(r) - w) / max w"));
  const double gap = std::fabs(m.volume() - m.base_volume());
  rep.add(make_claim("vadb.volume", gap, "<=", m.removed_volume() + m.added_volume(),
                     "|vol - vol(base)| against removed + added"));
  return rep;
}

}  // namespace forge
