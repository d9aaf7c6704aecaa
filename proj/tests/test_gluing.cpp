#include "doctest.h"

#include <cmath>
#include <numbers>

#include "forge/errors.hpp"
#include "forge/gluing.hpp"

using namespace forge;
using std::numbers::pi;

namespace {

const BackgroundSpace kS3{3, 1.0};

double piece_volume_sum(const GluedManifold& m) {
  double v = 0.0;
  for (const auto& p : m.pieces) v += volume(p.warp).value;
  return v;
}

}  // namespace

TEST_CASE("well attached to the round sphere") {
  const auto m = attach_well(kS3, 0.1, 0.5, 6.0, 10);
  REQUIRE(m.pieces.size() == 2);
  CHECK(m.flat.start.kind == CapKind::pole);
  CHECK(m.flat.end.kind == CapKind::pole);
  CHECK(m.delta0_halvings == 0);
  // Untouched outside B(2 delta): the cap is the round metric.
  const auto& cap = m.piece("cap");
  for (const auto& sp : cap.warp.spans) {
    for (size_t i = 0; i < sp.w.size(); ++i) {
      if (sp.r[i] < pi) CHECK(sp.w[i] == std::sin(sp.r[i]));
    }
  }
  CHECK(min_scalar(m) >= 6.0 - 0.1);
  for (const auto& c : interface_checks(m)) CHECK(c.pass);
  CHECK(cross_oracle(m).pass);
  const double v = volume(m.flat).value;
  CHECK(std::fabs(v - piece_volume_sum(m)) <= 1e-14 * v);
  // The well lies inside B(2 delta): its volume is that of a small ball.
  const double vw = volume(m.piece("well").warp).value;
  CHECK(vw < kS3.ball_volume(0.2) * 1.01);
  CHECK(diameter_bounds(m.piece("well").warp).lower >= 0.5);
}

TEST_CASE("wells need positive depth and a ball inside the injectivity radius") {
  CHECK_THROWS_AS(attach_well(kS3, 0.1, 0.0, 6.0, 10), ForgeError);
  CHECK_THROWS_AS(attach_well(kS3, 2.0, 0.5, 6.0, 10), ForgeError);
}

TEST_CASE("tunnel between two unit spheres") {
  const auto m = attach_tunnel(kS3, kS3, 0.1, 30.0, 6.0, 10);
  REQUIRE(m.pieces.size() == 5);
  CHECK(m.pieces[3].mirrored);
  const auto checks = interface_checks(m);
  REQUIRE(checks.size() == 4);
  for (const auto& c : checks) {
    CAPTURE(c.left);
    CHECK(c.pass);
    CHECK(c.value_gap <= 1e-8);
    CHECK(c.slope_gap <= 1e-8);
  }
  CHECK(mirror_defect(m) < 1e-12);
  CHECK(min_scalar(m) >= 6.0 - 0.1);
  CHECK(cross_oracle(m).pass);
  const auto necks = neck_areas(m.flat);
  REQUIRE(necks.size() == 1);
  CHECK(necks[0].s == doctest::Approx(m.length() / 2).epsilon(1e-9));
  CHECK(necks[0].w == doctest::Approx(std::sin(m.neck_radius)).epsilon(1e-14));
  // Cylinder volume is 4 pi sin^2(c) d, far below C(n) d delta^2.
  const double vc = volume(m.piece("cylinder").warp).value;
  CHECK(vc == doctest::Approx(4 * pi * std::pow(std::sin(m.neck_radius), 2) * 30.0).epsilon(1e-12));
  CHECK(vc <= 4 * pi * 30.0 * 0.01);
  const double v = volume(m.flat).value;
  CHECK(std::fabs(v - piece_volume_sum(m)) <= 1e-14 * v);
  CHECK(std::fabs(v - 2 * 2 * pi * pi) <= 2 * kS3.ball_volume(0.2));
}

TEST_CASE("zero-length tunnel has no cylinder") {
  const auto m = attach_tunnel(kS3, kS3, 0.1, 0.0, 6.0, 10);
  CHECK(m.pieces.size() == 4);
  for (const auto& c : interface_checks(m)) CHECK(c.pass);
}

TEST_CASE("half tunnels over different backgrounds disagree on the neck radius") {
  try {
    attach_tunnel(kS3, BackgroundSpace{3, 1.5}, 0.1, 1.0, 6.0, 10);
    FAIL("expected RadiusMismatch");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::RadiusMismatch);
  }
}

TEST_CASE("a scaled piece breaks interface continuity") {
  auto m = attach_tunnel(kS3, kS3, 0.1, 2.0, 6.0, 10);
  const auto& p = m.pieces[2];
  for (size_t k = p.first_span; k < p.first_span + p.span_count; ++k) {
    for (auto& x : m.flat.spans[k].w) x *= 1.2;
    for (auto& x : m.flat.spans[k].dw) x *= 1.2;
  }
  int failed = 0;
  for (const auto& c : interface_checks(m)) failed += !c.pass;
  CHECK(failed == 2);
}

TEST_CASE("round sphere piece") {
  const auto m = round_sphere(kS3);
  CHECK(m.pieces.size() == 1);
  CHECK(volume(m.flat).value == doctest::Approx(2 * pi * pi).epsilon(1e-12));
  CHECK(m.length() == doctest::Approx(pi).epsilon(1e-15));
  CHECK(min_scalar(m) == 6.0);
  CHECK(neck_areas(m.flat).empty());
}
