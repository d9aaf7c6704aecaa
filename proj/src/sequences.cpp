#include "forge/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "forge/errors.hpp"

namespace forge {

using std::numbers::pi;

const char* to_string(Family f) {
  switch (f) {
    case Family::two_sphere_tunnel: return "two-sphere-tunnel";
    case Family::many_wells: return "many-wells";
    case Family::well_cascade: return "well-cascade";
    case Family::sewn: return "sewn";
  }
  return "?";
}

Family family_from(const std::string& s) {
  for (Family f : {Family::two_sphere_tunnel, Family::many_wells, Family::well_cascade,
                   Family::sewn}) {
    if (s == to_string(f)) return f;
  }
  throw ForgeError(ErrorKind::InvalidInput, "unknown family '" + s + "'");
}

FamilyLaw tunnel_law(int j) { return {1.0 / j, 30.0, 1.0 / j}; }
FamilyLaw many_wells_law(int j) { return {0.5 / j, 0.5, 1.0 / j}; }
FamilyLaw cascade_law(int k, double kappa) {
  // Floor 2 kappa - kappa/(10k) would be met with equality at best; ask for a
  // little more so the bound is strict.
  return {std::ldexp(1.0, -(k + 2)), 10.0 - 8.0 / k, 2 * kappa / (12.0 * k)};
}

double space_form_volume(const BackgroundSpace& bg) {
  require(bg.K0 > 0, "closed space forms need K0 > 0");
  return unit_sphere_area(bg.n) / std::pow(bg.K0, 0.5 * bg.n);
}

namespace {

double circle_distance(const BackgroundSpace& bg, double a, double b) {
  const double period = 2 * pi / std::sqrt(bg.K0);
  const double x = std::fabs(a - b);
  return std::min(x, period - std::fmod(x, period));
}

WellSite make_site(const BackgroundSpace& bg, double position, const FamilyLaw& law,
                   double kappa, int j, const BuildOptions& opt) {
  WellSite s;
  s.position = position;
  s.delta = law.delta;
  s.d = law.d;
  s.floor = kappa - law.floor_drop;
  double delta0 = 0.0;
  auto piece = build_well_piece(bg, law.delta, law.d, kappa, j, law.floor_drop, opt,
                                &s.delta0_halvings, &delta0);
  s.length = piece.warp.length();
  s.volume = volume(piece.warp).value;
  GluedManifold tmp;
  tmp.pieces.push_back(piece);
  s.min_R = min_scalar(tmp);
  s.well = std::make_shared<const GluedPiece>(std::move(piece));
  return s;
}

Member many_wells(const SequenceSpec& spec, int j) {
  Member m;
  m.bg = BackgroundSpace{spec.n, spec.kappa / (spec.n * (spec.n - 1.0))};
  const auto law = many_wells_law(j);
  m.floor = spec.kappa - law.floor_drop;
  const double period = 2 * pi / std::sqrt(m.bg.K0);
  // Identical sites share one well.
  WellSite proto = make_site(m.bg, 0.0, law, spec.kappa, j, spec.opt);
  for (int i = 0; i < j; ++i) {
    WellSite s = proto;
    s.position = period * i / j;
    m.wells.push_back(std::move(s));
  }
  return m;
}

Member cascade(const SequenceSpec& spec, int i) {
  Member m;
  // Base of curvature 2 kappa.
  m.bg = BackgroundSpace{spec.n, 2 * spec.kappa / (spec.n * (spec.n - 1.0))};
  m.floor = spec.kappa;
  for (int k = 1; k <= i; ++k) {
    const auto law = cascade_law(k, spec.kappa);
    m.wells.push_back(make_site(m.bg, 4.0 * std::ldexp(1.0, -k), law, 2 * spec.kappa, k,
                                spec.opt));
  }
  return m;
}

}  // namespace

SewingSchedule sewing_schedule(const BackgroundSpace& bg, double curve_length, double kappa,
                               double r, double epsilon, int j, const BuildOptions& opt,
                               std::shared_ptr<const GluedManifold>* tunnel) {
  SewingSchedule s;
  s.length = curve_length;
  s.r = r;
  s.epsilon = epsilon;
  const double period = bg.K0 > 0 ? 2 * pi / std::sqrt(bg.K0) : 0.0;
  if (!(bg.K0 > 0) || !(curve_length > 0) || curve_length > period) {
    throw ForgeError(ErrorKind::ScheduleInfeasible, "curve must be an arc of a great circle");
  }
  const double a = std::min(curve_length, period / 2);
  if (!(r > 0 && r < a)) throw ForgeError(ErrorKind::ScheduleInfeasible, "need 0 < r < a");
  if (!(epsilon > 0)) throw ForgeError(ErrorKind::ScheduleInfeasible, "need epsilon > 0");
  s.sites = static_cast<int>(std::ceil(curve_length / r));
  if (s.sites < 2) s.sites = 2;
  s.points = s.sites * (s.sites - 1);
  const int tunnels = s.points / 2;

  // Clusters of size r/4, points 4.4 delta apart, and a Euclidean-ball
  // estimate of the tunnel volume (two balls of radius 2 delta) for the start.
  const double gap_factor = 4.4;
  double dmax = s.sites > 2 ? r / (4 * gap_factor * (s.sites - 2)) : r / 8;
  dmax = std::min(dmax, std::cbrt(epsilon / (tunnels * 2 * 4.0 / 3 * pi * 8)));
  double delta = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(dmax))));
  const double site_gap = curve_length / s.sites;

  for (int attempt = 0; attempt < 20; ++attempt, delta *= 0.5) {
    if (delta < 1e-9) break;
    const auto t = attach_tunnel(bg, bg, delta, 0.0, kappa, j, opt);
    double tv = 0.0, tl = 0.0;
    for (const auto& p : t.pieces) {
      if (p.name.rfind("cap", 0) == 0) continue;
      tv += volume(p.warp).value;
      tl += p.warp.length();
    }
    if (tunnels * tv > epsilon) continue;
    s.delta = delta;
    s.spacing = gap_factor * delta;
    s.tunnel_volume = tv;
    s.total_tunnel_volume = tunnels * tv;
    s.tunnel_length = tl;
    if (tunnel) *tunnel = std::make_shared<const GluedManifold>(std::move(t));
    break;
  }
  if (s.delta == 0.0) throw ForgeError(ErrorKind::ScheduleInfeasible, "no delta meets the volume budget");

  // Site a, slot q: q runs over the other sites in order.
  auto point = [&](int a, int q) { return a * (s.sites - 1) + q; };
  s.positions.resize(static_cast<size_t>(s.points));
  for (int a = 0; a < s.sites; ++a) {
    const double center = (a + 0.5) * site_gap;
    for (int q = 0; q < s.sites - 1; ++q) {
      s.positions[static_cast<size_t>(point(a, q))] =
          center + (q - 0.5 * (s.sites - 2)) * s.spacing;
    }
  }
  for (int a = 0; a < s.sites; ++a) {
    for (int b = a + 1; b < s.sites; ++b) s.tunnels.push_back({point(a, b - 1), point(b, a)});
  }
  s.min_point_gap = std::numeric_limits<double>::infinity();
  for (size_t x = 0; x < s.positions.size(); ++x) {
    for (size_t y = x + 1; y < s.positions.size(); ++y) {
      s.min_point_gap = std::min(s.min_point_gap, circle_distance(bg, s.positions[x], s.positions[y]));
    }
  }
  if (!(s.min_point_gap > 4 * s.delta)) {
    throw ForgeError(ErrorKind::ScheduleInfeasible, "2 delta balls overlap");
  }
  // Any two points of the region: to the nearest site (r/2 each), across the
  // cluster, around both boundary spheres and through one tunnel; points
  // inside a tunnel add at most one more tunnel length.
  const double around = pi * bg.sn(2 * s.delta);
  s.diameter_bound = r + (s.sites - 2) * s.spacing + 4 * s.delta + 2 * s.tunnel_length + 4 * around;
  return s;
}

double Member::base_volume() const {
  const double v = space_form_volume(bg);
  return family == Family::two_sphere_tunnel ? 2 * v : v;
}

double Member::removed_volume() const {
  if (glued) return 2 * bg.ball_volume(2 * glued->delta);
  double v = 0.0;
  for (const auto& w : wells) v += bg.ball_volume(2 * w.delta);
  if (sewing) v += sewing->points * bg.ball_volume(2 * sewing->delta);
  return v;
}

double Member::added_volume() const {
  if (glued) {
    double v = 0.0;
    for (const auto& p : glued->pieces) {
      if (p.name.rfind("cap", 0) != 0) v += forge::volume(p.warp).value;
    }
    return v;
  }
  double v = 0.0;
  for (const auto& w : wells) v += w.volume;
  if (sewing) v += sewing->total_tunnel_volume;
  return v;
}

double Member::volume() const {
  if (glued) return forge::volume(glued->flat).value;
  return base_volume() - removed_volume() + added_volume();
}

double Member::min_R() const {
  if (glued) return min_scalar(*glued);
  double lo = bg.scalar();
  for (const auto& w : wells) lo = std::min(lo, w.min_R);
  if (sewing_tunnel) lo = std::min(lo, min_scalar(*sewing_tunnel));
  return lo;
}

double Member::tip_distance(size_t a, size_t b) const {
  const auto& x = wells.at(a);
  const auto& y = wells.at(b);
  const double base = circle_distance(bg, x.position, y.position) - 2 * x.delta - 2 * y.delta;
  return x.length + y.length + std::max(0.0, base);
}

int Member::disjoint_collars() const {
  int count = 0;
  for (size_t a = 0; a < wells.size(); ++a) {
    bool ok = true;
    for (size_t b = 0; b < wells.size(); ++b) {
      if (a == b) continue;
      const double gap = circle_distance(bg, wells[a].position, wells[b].position);
      if (!(gap > 2 * wells[a].delta + 2 * wells[b].delta)) ok = false;
    }
    count += ok;
  }
  return count;
}

Member generate(const SequenceSpec& spec, int j) {
  require(spec.n >= 3, "dimension must be at least 3");
  require(spec.kappa > 0, "kappa must be positive");
  Member m;
  switch (spec.family) {
    case Family::two_sphere_tunnel: {
      require(j >= 10, "two-sphere tunnels need j >= 10");
      m.bg = BackgroundSpace{spec.n, spec.kappa / (spec.n * (spec.n - 1.0))};
      const auto law = tunnel_law(j);
      m.floor = spec.kappa - law.floor_drop;
      m.glued = std::make_shared<const GluedManifold>(
          attach_tunnel(m.bg, m.bg, law.delta, law.d, spec.kappa, j, spec.opt));
      break;
    }
    case Family::many_wells:
      require(j >= 1, "many-wells needs j >= 1");
      m = many_wells(spec, j);
      break;
    case Family::well_cascade:
      require(j >= 1, "cascade members start at 1");
      m = cascade(spec, j);
      break;
    case Family::sewn: {
      require(j >= 2, "sewn members need j >= 2");
      m.bg = BackgroundSpace{spec.n, spec.kappa / (spec.n * (spec.n - 1.0))};
      m.floor = spec.kappa - 1.0 / j;
      const double r = spec.sew_length / (2.0 * j);
      const double eps = 1.0 / (static_cast<double>(j) * j);
      m.sewing = std::make_shared<const SewingSchedule>(sewing_schedule(
          m.bg, spec.sew_length, spec.kappa, r, eps, j, spec.opt, &m.sewing_tunnel));
      break;
    }
  }
  m.family = spec.family;
  m.j = j;
  m.n = spec.n;
  m.kappa = spec.kappa;
  return m;
}

}  // namespace forge
