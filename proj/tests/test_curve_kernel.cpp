#include "doctest.h"

#include <cmath>

#include "forge/curve_kernel.hpp"
#include "forge/errors.hpp"

using namespace forge;

namespace {

const BackgroundSpace kS3{3, 1.0};

ArcParams params(int j, double d = 1.0) {
  ArcParams p;
  p.delta = 1.0 / j;
  p.d = d;
  p.kappa = 6.0;
  p.j = j;
  return p;
}

}  // namespace

TEST_CASE("zero curvature gives a vertical segment") {
  const double delta = 0.1;
  auto p = plain_profile(kS3, 2 * delta, Angle::from_theta(0.0),
                         {CurvatureSegment::constant(0.0, 1.5 * delta, "line")});
  const auto c = integrate_curve(p);
  for (const auto& q : c.spans[0].pts) {
    CHECK(std::fabs(q.dt) < 1e-300);
    CHECK(std::fabs(q.r - (2 * delta - q.u)) < 1e-15);
  }
}

TEST_CASE("unit curvature gives a circular arc") {
  const double r0 = 2.0;
  auto p = plain_profile(kS3, r0, Angle::from_theta(0.0),
                         {CurvatureSegment::constant(1.0, 1.2, "arc")});
  const auto c = integrate_curve(p);
  double worst = 0.0;
  for (const auto& q : c.spans[0].pts) {
    worst = std::max(worst, std::fabs(q.theta - q.u));
    worst = std::max(worst, std::fabs(q.dt - (1.0 - std::cos(q.u))));
    worst = std::max(worst, std::fabs(q.r - (r0 - std::sin(q.u))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("closed-form arc advance agrees with the integrator") {
  auto p = plain_profile(kS3, 1.0, Angle::from_theta(0.3),
                         {CurvatureSegment::constant(0.7, 0.9, "arc")});
  const auto c = integrate_curve(p);
  const auto e = advance_arc({0.0, 1.0, Angle::from_theta(0.3)}, 0.7, 0.9);
  CHECK(std::fabs(c.spans[0].pts.back().dt - e.t) < 1e-13);
  CHECK(std::fabs(c.spans[0].pts.back().r - e.r) < 1e-13);
}

TEST_CASE("fourth-order convergence under step halving") {
  auto p = plain_profile(kS3, 1.0, Angle::from_theta(0.1),
                         {CurvatureSegment::blend(0.2, 3.0, 0.4, "ramp"),
                          CurvatureSegment::constant(3.0, 0.2, "arc")});
  StepPolicy coarse;
  coarse.min_steps = 8;
  coarse.min_blend_steps = 8;
  coarse.max_turn = 1.0;
  coarse.base_step = 1.0;
  const auto c0 = integrate_curve(p, coarse);
  const auto c1 = integrate_curve(p, coarse.refined(1));
  const auto c2 = integrate_curve(p, coarse.refined(2));
  for (size_t s = 0; s < c0.spans.size(); ++s) {
    const auto& a = c0.spans[s].pts.back();
    const auto& b = c1.spans[s].pts.back();
    const auto& d = c2.spans[s].pts.back();
    const double e1 = std::hypot(a.dt - b.dt, a.r - b.r);
    const double e2 = std::hypot(b.dt - d.dt, b.r - d.r);
    REQUIRE(e2 > 0);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
  }
}

TEST_CASE("radius reaching the axis before the terminal segment is rejected") {
  auto p = plain_profile(kS3, 0.1, Angle::from_theta(0.0),
                         {CurvatureSegment::constant(0.0, 0.2, "line")});
  CHECK_THROWS_AS(integrate_curve(p), ForgeError);
  try {
    integrate_curve(p);
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveRadius);
  }
}

TEST_CASE("inductive arcs gain sin(theta)/16 per arc") {
  ArcParams a;
  a.delta = 0.2;
  a.delta0 = 0.1;
  a.d = 1.0;
  a.kappa = 6.0;
  a.j = 10;
  const auto p = build_well_arcs(a, kS3);
  const auto& rec = p.arcs;
  REQUIRE(rec.m > 10);
  for (int i = 1; i < rec.m; ++i) {
    const double gained = rec.theta[i].theta - rec.theta[i - 1].theta;
    CHECK(gained == doctest::Approx(rec.theta[i - 1].sin() / 16).epsilon(1e-12));
    CHECK(rec.ds[i] == doctest::Approx(rec.r[i - 1] / 2).epsilon(1e-15));
    CHECK(rec.k[i] == doctest::Approx(rec.theta[i - 1].sin() / (8 * rec.r[i - 1])).epsilon(1e-15));
  }
  CHECK(rec.theta[rec.m].theta == doctest::Approx(std::asin(12.0 / 13.0)).epsilon(1e-15));
}

TEST_CASE("well arcs: contraction, partial length and total length") {
  for (int j : {10, 20, 40}) {
    CAPTURE(j);
    const auto p = build_well_arcs(params(j), kS3);
    const auto& rec = p.arcs;
    for (int i = 1; i < rec.m; ++i) CHECK(rec.r[i] / rec.r[i - 1] <= 21.0 / 26.0);
    CHECK(rec.length_to_sm <= 28.0 / 5.0 * p.delta);
    for (double d : {0.5, 1.0, 3.0}) {
      const auto q = build_well_arcs(params(j, d), kS3);
      CHECK((q.total_length() - d) / q.delta < 4.0);
    }
  }
}

TEST_CASE("well curve: positivity, monotone angle and the curvature bound") {
  const auto p = build_well_arcs(params(20), kS3);
  CHECK(p.arcs.arc_margin > 0);
  const auto c = integrate_curve(p);
  CHECK(c.max_radius_gap < 1e-10);
  double prev_theta = -1.0;
  bool closing = false;
  for (size_t si = 0; si < c.spans.size(); ++si) {
    const auto& sp = c.spans[si];
    CHECK(unit_speed_defect(sp) < 1e-9);
    if (sp.role == "closing-arc") closing = true;
    for (size_t i = 0; i < sp.pts.size(); ++i) {
      const auto& q = sp.pts[i];
      const bool tip = si + 1 == c.spans.size() && i + 1 == sp.pts.size();
      if (tip) {
        CHECK(q.r == 0.0);
        continue;
      }
      CHECK(q.r > 0.0);
      if (!closing) {
        CHECK(q.theta >= prev_theta - 1e-15);
      } else {
        CHECK(q.theta <= prev_theta + 1e-15);
      }
      prev_theta = q.theta;
      if (static_cast<int>(si) >= c.first_margin_span && q.k > 0) {
        CHECK(q.angle().sin() / (4 * q.r) - q.k > 0);
      }
    }
  }
  CHECK(c.spans.back().pts.back().theta == 0.0);
}

TEST_CASE("run angle lies inside the admissible interval") {
  for (double d : {0.5, 1.0, 4.0}) {
    const auto p = build_well_arcs(params(10, d), kS3);
    const auto& rec = p.arcs;
    const double upper = std::min(rec.theta_bar.phi, std::asin(rec.r_m1 / (2 * std::max(d, 1.0))));
    CHECK(rec.stop.phi > 0);
    CHECK(rec.stop.phi < upper);
    CHECK(rec.k_close == doctest::Approx(-4 * rec.stop.sin() / rec.r_run_end).epsilon(1e-15));
    CHECK(rec.r_close_end > 0);
  }
}

TEST_CASE("half tunnel: curvature window, radius bound and plateau") {
  ArcParams a = params(10, 0.0);
  const auto p = build_half_tunnel_arcs(a, kS3);
  const auto& rec = p.arcs;
  const double rm = rec.r[rec.m];
  const double km1 = rec.k[rec.m + 1];
  const double sb = 12.0 / 13.0;
  CHECK(1 - sb < km1 * rm / 2);
  CHECK(km1 * rm / 2 < sb / 8);
  CHECK(rec.r_m1 > rm / 2);
  CHECK(rec.plateau_radius == doctest::Approx(rec.r_m1).epsilon(1e-12));
  const auto c = integrate_curve(p);
  const auto& plateau = c.spans.back();
  CHECK(plateau.role == "plateau");
  for (const auto& q : plateau.pts) {
    CHECK(q.phi == 0.0);
    CHECK(q.r == doctest::Approx(rec.plateau_radius).epsilon(1e-12));
  }
}

TEST_CASE("a floor above the background curvature admits no s0") {
  ArcParams a = params(10);
  a.kappa = 100.0;
  try {
    build_well_arcs(a, kS3);
    FAIL("expected NoAdmissibleS0");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::NoAdmissibleS0);
  }
}

TEST_CASE("s0 is admissible and maximal on the grid") {
  const auto p = build_well_arcs(params(10), kS3);
  const double s0 = p.arcs.s0;
  CHECK(s0 <= p.delta0 / 2);
  for (int i = 0; i <= 1024; ++i) {
    const double x = s0 * i / 1024;
    CHECK(scalar_from_curve(kS3, p.delta0 - std::sin(x), std::sin(x), 1.0) > p.kappa_floor());
  }
  CHECK(p.arcs.k[1] < 1.0);
}

TEST_CASE("scalar curvature of a sphere of revolution") {
  // theta = pi/2 at the distance sphere: the hypersurface is totally umbilic.
  const double r = 0.7;
  const double c = kS3.mean_curv(r);
  CHECK(scalar_from_curve(kS3, r, 1.0, 0.0) ==
        doctest::Approx(6.0 - 4.0 + 2.0 * c * c).epsilon(1e-14));
  CHECK(scalar_from_curve(kS3, r, 0.0, 5.0) == doctest::Approx(6.0));
  // The two conventions differ only in the k term.
  const double both = scalar_from_curve(kS3, r, 0.5, 2.0, 4.0) - scalar_from_curve(kS3, r, 0.5, 2.0, 2.0);
  CHECK(both == doctest::Approx(-2.0 * c * 2.0 * 0.5).epsilon(1e-14));
}
