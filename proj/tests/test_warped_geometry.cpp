#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/smoothing.hpp"
#include "forge/warped_geometry.hpp"

using namespace forge;
using std::numbers::pi;

namespace {

const BackgroundSpace kS3{3, 1.0};
const BackgroundSpace kR3{3, 0.0};

ArcParams params(int j, double d = 0.5) {
  ArcParams p;
  p.delta = 1.0 / j;
  p.d = d;
  p.kappa = 6.0;
  p.j = j;
  return p;
}

std::shared_ptr<const ProfileCurve> smoothed_well(int j, int refine = 0) {
  const auto q = smooth_curvature(build_well_arcs(params(j), kS3));
  return std::make_shared<const ProfileCurve>(integrate_curve(q, StepPolicy{}.refined(refine)));
}

}  // namespace

TEST_CASE("round sphere as a warped product") {
  const auto m = warp_from_function(3, kS3, [](double s) { return std::sin(s); }, 0.0, pi, 4096);
  CHECK(m.start.kind == CapKind::pole);
  CHECK(m.end.kind == CapKind::pole);
  const auto R = scalar_curvature_warp(m);
  CHECK(std::isnan(R[0].front()));
  double worst = 0.0;
  // The warp formula divides by w^2, so stay clear of the poles.
  for (size_t i = 0; i < R[0].size(); ++i) {
    const double s = m.spans[0].s_at(i);
    if (s > 0.1 && s < pi - 0.1) worst = std::max(worst, std::fabs(R[0][i] - 6.0));
  }
  CHECK(worst < 1e-4);
  CHECK(volume(m).value == doctest::Approx(2 * pi * pi).epsilon(1e-12));
  const auto d = diameter_bounds(m);
  CHECK(d.lower == doctest::Approx(pi));
  CHECK(d.upper == doctest::Approx(2 * pi).epsilon(1e-9));
  CHECK(neck_areas(m).empty());
  CHECK(pole_closure_defect(m, true) < 1e-4);
  CHECK(pole_closure_defect(m, false) < 1e-4);
  CHECK_THROWS_AS(scalar_curvature_warp_at(m, 0, 0), ForgeError);
}

TEST_CASE("cylinder: curvature 2/c^2 and volume 4 pi c^2 l") {
  const double c = 0.3, l = 2.0;
  const auto m = warp_from_function(3, kR3, [&](double) { return c; }, 0.0, l, 64);
  const auto R = scalar_curvature_warp(m);
  for (double v : R[0]) CHECK(v == doctest::Approx(2 / (c * c)).epsilon(1e-14));
  CHECK(volume(m).value == doctest::Approx(4 * pi * c * c * l).epsilon(1e-14));
  CHECK(neck_areas(m).empty());
}

TEST_CASE("necks are the local minima of the warp, plateaus included") {
  const auto m = warp_from_function(
      3, kR3, [](double s) { return 1.0 + 0.5 * std::cos(s); }, 0.0, 4 * pi, 4000);
  const auto necks = neck_areas(m);
  REQUIRE(necks.size() == 2);
  CHECK(necks[0].s == doctest::Approx(pi).epsilon(1e-3));
  CHECK(necks[1].s == doctest::Approx(3 * pi).epsilon(1e-3));
  CHECK(necks[0].area == doctest::Approx(4 * pi * 0.25).epsilon(1e-6));

  auto flat_bottom = [](double s) { return std::max(0.2, std::fabs(s - 1.0)) + 0.1; };
  const auto p = warp_from_function(3, kR3, flat_bottom, 0.0, 2.0, 400);
  const auto pn = neck_areas(p);
  REQUIRE(pn.size() == 1);
  CHECK(pn[0].s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pn[0].w == doctest::Approx(0.3));
}

TEST_CASE("volume converges at fourth order") {
  auto f = [](double s) { return std::sin(s) * (1 + 0.2 * std::sin(3 * s)); };
  double prev = 0.0, prev_err = 0.0;
  const double exact = volume(warp_from_function(3, kS3, f, 0.0, pi, 1 << 14)).value;
  for (int N : {32, 64, 128}) {
    const double v = volume(warp_from_function(3, kS3, f, 0.0, pi, N)).value;
    const double err = std::fabs(v - exact);
    if (prev > 0) CHECK(prev_err / err > 14.0);
    prev = v;
    prev_err = err;
  }
}

TEST_CASE("realized well: collar, tip and the two curvature formulas") {
  for (int j : {10, 20, 40}) {
    CAPTURE(j);
    const auto c = smoothed_well(j);
    const auto m = realize(c);
    CHECK(m.start.kind == CapKind::boundary);
    CHECK(m.start.radius == doctest::Approx(std::sin(2.0 / j)).epsilon(1e-15));
    CHECK(m.end.kind == CapKind::pole);
    const auto col = collar_check(m, 1.0 / j);
    CHECK(col.samples > 0);
    CHECK(col.value <= 1e-8);
    CHECK(col.slope <= 1e-6);
    CHECK(pole_closure_defect(m, true) < 1e-10);
    const auto x = cross_oracle(*c, m);
    CHECK(x.pass);
    CHECK(x.agreeing == "2(n-1)");
    CHECK(x.max_diff_alt > 1e3 * x.bound());
    const auto d = diameter_bounds(m);
    CHECK(d.lower >= 0.5);
    CHECK(d.upper < 1.25 * (1.0 / j + 0.5));
  }
}

TEST_CASE("curvature discrepancy halves twice per step halving") {
  std::vector<double> diffs;
  for (int refine = 0; refine < 3; ++refine) {
    const auto c = smoothed_well(20, refine);
    diffs.push_back(cross_oracle(*c, realize(c)).max_diff);
  }
  CHECK(diffs[0] / diffs[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(diffs[1] / diffs[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("radius beyond the antipode is rejected") {
  auto p = plain_profile(kS3, 3.0, Angle::from_theta(pi),
                         {CurvatureSegment::constant(0.0, 0.5, "out")});
  const auto c = integrate_curve(p);
  CHECK_THROWS_AS(realize(c, kS3), ForgeError);
}

TEST_CASE("samples csv has one row per point") {
  const auto c = smoothed_well(10);
  const auto m = realize(c);
  std::ostringstream os;
  write_samples_csv(os, *c, m);
  const std::string s = os.str();
  const size_t rows = static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
  CHECK(rows == m.sample_count() + 1);
  CHECK(s.rfind("s,t,r,theta,k,w,R_gauss,R_warp\n", 0) == 0);
}

TEST_CASE("metric interpolation on a space form is the identity") {
  for (double c : {0.1, 0.7, 1.4}) CHECK(metric_interpolation_defect(kS3, c) < 1e-15);
}
