#include "forge/warped_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "forge/errors.hpp"
#include "forge/quadrature.hpp"

namespace forge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Locate the span holding s (last span whose start is <= s).
size_t span_index(const WarpedManifold& m, double s) {
  size_t lo = 0, hi = m.spans.size();
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    (m.spans[mid].s0 <= s ? lo : hi) = mid;
  }
  return lo;
}

double interp(const WarpSpan& sp, const std::vector<double>& y, double s) {
  if (y.empty()) return kNaN;
  const double x = std::clamp((s - sp.s0) / sp.h, 0.0, static_cast<double>(y.size() - 1));
  const size_t i = std::min(static_cast<size_t>(x), y.size() - 2);
  const double f = x - static_cast<double>(i);
  return y[i] + f * (y[i + 1] - y[i]);
}

Cap cap_for(double w) { return w == 0.0 ? Cap{CapKind::pole, 0.0} : Cap{CapKind::boundary, w}; }

struct Derivs {
  double d1, d2;
};

// v[j] = w[lo + j] - w[c], summed from the increments when available.
void offsets(const WarpSpan& sp, size_t lo, size_t hi, size_t c, double* v) {
  for (size_t j = lo; j <= hi; ++j) {
    double acc = 0.0;
    if (sp.dw.empty()) {
      acc = sp.w[j] - sp.w[c];
    } else if (j > c) {
      for (size_t q = c + 1; q <= j; ++q) acc += sp.dw[q];
    } else {
      for (size_t q = j + 1; q <= c; ++q) acc -= sp.dw[q];
    }
    v[j - lo] = acc;
  }
}

Derivs derivs(const WarpSpan& sp, size_t i) {
  const size_t N = sp.w.size() - 1;
  const double h = sp.h;
  require(N >= 5, "span too short for finite differences");
  double v[6];
  // One-sided ends use fourth-order stencils so they do not dominate the error.
  if (i == 0) {
    offsets(sp, 0, 5, 0, v);
    return {(48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h),
            (-154 * v[1] + 214 * v[2] - 156 * v[3] + 61 * v[4] - 10 * v[5]) / (12 * h * h)};
  }
  if (i == N) {
    offsets(sp, N - 5, N, N, v);
    return {-(48 * v[4] - 36 * v[3] + 16 * v[2] - 3 * v[1]) / (12 * h),
            (-154 * v[4] + 214 * v[3] - 156 * v[2] + 61 * v[1] - 10 * v[0]) / (12 * h * h)};
  }
  offsets(sp, i - 1, i + 1, i, v);
  return {(v[2] - v[0]) / (2 * h), (v[2] + v[0]) / (h * h)};
}

}  // namespace

double WarpedManifold::length() const {
  double acc = 0.0;
  for (const auto& sp : spans) acc += sp.length();
  return acc;
}

size_t WarpedManifold::sample_count() const {
  size_t n = 0;
  for (size_t i = 0; i < spans.size(); ++i) n += spans[i].w.size() - (i ? 1 : 0);
  return n;
}

double WarpedManifold::w_at(double s) const {
  const auto& sp = spans[span_index(*this, s)];
  return interp(sp, sp.w, s);
}

double WarpedManifold::r_at(double s) const {
  const auto& sp = spans[span_index(*this, s)];
  return interp(sp, sp.r, s);
}

WarpedManifold realize(const ProfileCurve& curve, const BackgroundSpace& bg) {
  require(!curve.spans.empty(), "empty curve");
  WarpedManifold m;
  m.n = bg.n;
  m.bg = bg;
  m.kappa = curve.kappa;
  m.floor_drop = curve.floor_drop;
  m.j = curve.j;
  m.label = to_string(curve.mode);
  const double rmax = bg.max_radius();
  for (const auto& cs : curve.spans) {
    WarpSpan sp;
    sp.role = cs.role;
    sp.s0 = cs.s0;
    sp.h = cs.h;
    sp.w.reserve(cs.pts.size());
    sp.r.reserve(cs.pts.size());
    sp.dw.reserve(cs.pts.size());
    for (size_t i = 0; i < cs.pts.size(); ++i) {
      const auto& q = cs.pts[i];
      double r = q.r;
      if (r < 0 || (std::isfinite(rmax) && r > rmax * (1 + 1e-12))) {
        throw ForgeError(ErrorKind::RadiusExceedsBall,
                         "radius " + std::to_string(r) + " outside the background ball");
      }
      if (std::isfinite(rmax) && r >= rmax) r = rmax;
      const bool pole = r == 0.0 || r == rmax;
      sp.w.push_back(pole ? 0.0 : bg.sn(r));
      sp.r.push_back(r);
      if (i == 0) {
        sp.dw.push_back(0.0);
      } else if (pole || sp.w[i - 1] == 0.0) {
        sp.dw.push_back(sp.w[i] - sp.w[i - 1]);
      } else {
        sp.dw.push_back(bg.sn_diff(cs.pts[i - 1].r, q.dr));
      }
    }
    m.spans.push_back(std::move(sp));
  }
  m.start = cap_for(m.spans.front().w.front());
  m.end = cap_for(m.spans.back().w.back());
  return m;
}

WarpedManifold realize(std::shared_ptr<const ProfileCurve> curve) {
  WarpedManifold m = realize(*curve, curve->bg);
  m.curve = std::move(curve);
  return m;
}

WarpedManifold warp_from_function(int n, const BackgroundSpace& bg,
                                  const std::function<double(double)>& w, double a, double b,
                                  int N, const std::string& role) {
  require(b > a && N >= 4 && N % 2 == 0, "warp grid needs b > a and an even N >= 4");
  WarpedManifold m;
  m.n = n;
  m.bg = bg;
  m.kappa = bg.scalar();
  m.label = role;
  WarpSpan sp;
  sp.role = role;
  sp.s0 = a;
  sp.h = (b - a) / N;
  double scale = 0.0;
  for (int i = 0; i <= N; ++i) {
    sp.w.push_back(w(i == N ? b : a + sp.h * i));
    scale = std::max(scale, std::fabs(sp.w.back()));
  }
  // Values at rounding level relative to the largest are poles.
  for (int i = 0; i <= N; ++i) {
    if (std::fabs(sp.w[i]) <= 1e-14 * scale) sp.w[i] = 0.0;
    sp.dw.push_back(i ? sp.w[i] - sp.w[i - 1] : 0.0);
  }
  m.spans.push_back(std::move(sp));
  m.start = cap_for(m.spans.front().w.front());
  m.end = cap_for(m.spans.back().w.back());
  return m;
}

SampledField scalar_curvature_gauss(const ProfileCurve& curve, double k_coef) {
  const double coef = k_coef > 0 ? k_coef : 2.0 * (curve.bg.n - 1);
  SampledField out;
  for (const auto& sp : curve.spans) {
    std::vector<double> v;
    v.reserve(sp.pts.size());
    for (const auto& q : sp.pts) {
      const double s = q.angle().sin();
      if (q.r <= 0 && s != 0.0) {
        v.push_back(kNaN);
      } else {
        v.push_back(scalar_from_curve(curve.bg, q.r, s, q.k, coef));
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

double scalar_curvature_warp_at(const WarpedManifold& m, size_t span, size_t i) {
  const auto& sp = m.spans.at(span);
  const double w = sp.w.at(i);
  if (w == 0.0) throw ForgeError(ErrorKind::PoleSingularity, "warp formula evaluated at w = 0");
  const auto d = derivs(sp, i);
  const double n = m.n;
  return -2.0 * (n - 1) * d.d2 / w + (n - 1) * (n - 2) * (1.0 - d.d1 * d.d1) / (w * w);
}

SampledField scalar_curvature_warp(const WarpedManifold& m) {
  SampledField out;
  for (size_t s = 0; s < m.spans.size(); ++s) {
    std::vector<double> v(m.spans[s].w.size());
    for (size_t i = 0; i < v.size(); ++i) {
      v[i] = m.spans[s].w[i] == 0.0 ? kNaN : scalar_curvature_warp_at(m, s, i);
    }
    out.push_back(std::move(v));
  }
  return out;
}

CrossOracle cross_oracle(const ProfileCurve& curve, const WarpedManifold& m, double tol) {
  require(curve.spans.size() == m.spans.size(), "curve and manifold spans differ");
  const double n = m.n;
  const auto Rg = scalar_curvature_gauss(curve);
  const auto Ra = scalar_curvature_gauss(curve, n - 1);
  CrossOracle out;
  out.tol = tol;
  for (size_t s = 0; s < m.spans.size(); ++s) {
    const auto& sp = m.spans[s];
    for (size_t i = 0; i < sp.w.size(); ++i) {
      const double w = sp.w[i];
      if (w == 0.0 || !std::isfinite(Rg[s][i])) continue;
      const auto d = derivs(sp, i);
      const double Rw = -2.0 * (n - 1) * d.d2 / w + (n - 1) * (n - 2) * (1.0 - d.d1 * d.d1) / (w * w);
      const double diff = std::fabs(Rw - Rg[s][i]);
      const double scale = 2.0 * (n - 1) * std::fabs(d.d2 / w) +
                           (n - 1) * (n - 2) * (1.0 + d.d1 * d.d1) / (w * w);
      ++out.compared;
      out.max_diff = std::max(out.max_diff, diff);
      out.max_diff_alt = std::max(out.max_diff_alt, std::fabs(Rw - Ra[s][i]));
      out.max_abs_R = std::max(out.max_abs_R, std::fabs(Rg[s][i]));
      out.max_local_rel = std::max(out.max_local_rel, diff / (1.0 + std::fabs(Rg[s][i]) + scale));
    }
  }
  out.agreeing = out.max_diff <= out.max_diff_alt ? "2(n-1)" : "(n-1)";
  out.pass = out.compared > 0 && out.max_diff <= out.bound();
  return out;
}

FieldRange field_range(const WarpedManifold& m, const SampledField& f) {
  FieldRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
  for (size_t s = 0; s < f.size(); ++s) {
    for (size_t i = 0; i < f[s].size(); ++i) {
      const double v = f[s][i];
      if (!std::isfinite(v)) continue;
      if (v < r.min) {
        r.min = v;
        r.s_min = m.spans[s].s_at(i);
      }
      r.max = std::max(r.max, v);
    }
  }
  return r;
}

VolumeEstimate volume(const WarpedManifold& m) {
  const double omega = unit_sphere_area(m.n - 1);
  VolumeEstimate out;
  for (const auto& sp : m.spans) {
    std::vector<double> y(sp.w.size());
    for (size_t i = 0; i < y.size(); ++i) y[i] = std::pow(sp.w[i], m.n - 1);
    const double fine = simpson(y, sp.h);
    out.value += omega * fine;
    const size_t N = y.size() - 1;
    if (N % 4 == 0) {
      std::vector<double> c;
      for (size_t i = 0; i <= N; i += 2) c.push_back(y[i]);
      out.error += omega * std::fabs(fine - simpson(c, 2 * sp.h)) / 15.0;
    } else {
      double trap = 0.5 * (y.front() + y.back());
      for (size_t i = 1; i < N; ++i) trap += y[i];
      out.error += omega * std::fabs(fine - trap * sp.h);
    }
  }
  return out;
}

DiameterBounds diameter_bounds(const WarpedManifold& m) {
  const double a = m.s_begin(), b = m.s_end();
  DiameterBounds out;
  // The level coordinate is a distance function, so the two ends are b - a apart.
  out.lower = b - a;
  out.upper = std::numeric_limits<double>::infinity();
  // Any two points join through the level s: down/up to s, then half way round.
  for (const auto& sp : m.spans) {
    for (size_t i = 0; i < sp.w.size(); ++i) {
      const double s = sp.s_at(i);
      const double len = 2.0 * std::max(s - a, b - s) + std::numbers::pi * sp.w[i];
      if (len < out.upper) {
        out.upper = len;
        out.pivot = s;
      }
    }
  }
  return out;
}

std::vector<Neck> neck_areas(const WarpedManifold& m) {
  std::vector<double> s, w;
  for (size_t k = 0; k < m.spans.size(); ++k) {
    const auto& sp = m.spans[k];
    for (size_t i = k ? 1 : 0; i < sp.w.size(); ++i) {
      s.push_back(sp.s_at(i));
      w.push_back(sp.w[i]);
    }
  }
  const double omega = unit_sphere_area(m.n - 1);
  std::vector<Neck> out;
  const size_t N = w.size();
  // Candidates: strict descent, a run of exactly equal values, strict ascent.
  // A candidate counts only if w climbs at least 1e-6 (relative) above it on
  // both sides before dropping below it again, which discards rounding wiggles.
  auto prominent = [&](size_t from, long step, double floor) {
    for (long q = static_cast<long>(from); q >= 0 && q < static_cast<long>(N); q += step) {
      if (w[q] < floor) return false;
      if (w[q] >= floor * (1 + 1e-6)) return true;
    }
    return false;
  };
  size_t i = 1;
  while (i + 1 < N) {
    if (!(w[i] < w[i - 1])) {
      ++i;
      continue;
    }
    size_t e = i;
    while (e + 1 < N && w[e + 1] == w[i]) ++e;
    if (e + 1 < N && w[e + 1] > w[i] && w[i] > 0 && prominent(i - 1, -1, w[i]) &&
        prominent(e + 1, 1, w[i])) {
      const double mid = 0.5 * (s[i] + s[e]);
      out.push_back({mid, w[i], omega * std::pow(w[i], m.n - 1)});
    }
    i = e + 1;
  }
  return out;
}

CollarCheck collar_check(const WarpedManifold& m, double delta) {
  CollarCheck out;
  for (const auto& sp : m.spans) {
    if (sp.role != "collar") continue;
    const double K0 = m.bg.K0;
    for (size_t i = 0; i < sp.w.size(); ++i) {
      const double r = 2.0 * delta - sp.h * static_cast<double>(i);
      out.value = std::max(out.value, std::fabs(sp.w[i] - m.bg.sn(r)));
      const auto d = derivs(sp, i);
      out.slope = std::max(out.slope, std::fabs(d.d1 + m.bg.cn(r)));
      out.second = std::max(out.second, std::fabs(d.d2 + K0 * m.bg.sn(r)));
      ++out.samples;
    }
  }
  return out;
}

double pole_closure_defect(const WarpedManifold& m, bool at_end) {
  const auto& sp = at_end ? m.spans.back() : m.spans.front();
  require((at_end ? sp.w.back() : sp.w.front()) == 0.0, "no pole at the requested end");
  const size_t N = sp.w.size() - 1;
  const size_t K = std::min<size_t>(16, N);
  double worst = 0.0;
  for (size_t q = 0; q < K; ++q) {
    const size_t i = at_end ? N - q : q + 1;  // increment across the step [i-1, i]
    const double step = sp.dw.empty() ? sp.w[i] - sp.w[i - 1] : sp.dw[i];
    worst = std::max(worst, std::fabs(1.0 - std::fabs(step) / sp.h));
  }
  return worst;
}

double metric_interpolation_defect(const BackgroundSpace& bg, double c) {
  // Induced metric on the distance sphere: sn(c)^2 g_round. Its rescaling by
  // 1/sn(c)^2 is g_round itself; return the coefficient mismatch.
  const double induced = bg.sn(c) * bg.sn(c);
  const double round_scale = std::pow(bg.sn(c), 2);
  return std::fabs(induced / round_scale - 1.0);
}

void write_samples_csv(std::ostream& os, const ProfileCurve& curve, const WarpedManifold& m) {
  require(curve.spans.size() == m.spans.size(), "curve and manifold spans differ");
  const auto Rg = scalar_curvature_gauss(curve);
  const auto Rw = scalar_curvature_warp(m);
  char buf[512];
  os << "s,t,r,theta,k,w,R_gauss,R_warp\n";
  for (size_t s = 0; s < curve.spans.size(); ++s) {
    const auto& cs = curve.spans[s];
    for (size_t i = s ? 1 : 0; i < cs.pts.size(); ++i) {
      const auto& q = cs.pts[i];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    cs.s0 + q.u, cs.t0 + q.dt, q.r, q.theta, q.k, m.spans[s].w[i], Rg[s][i],
                    Rw[s][i]);
      os << buf;
    }
  }
}

}  // namespace forge
