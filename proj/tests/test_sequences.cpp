#include "doctest.h"

#include <cmath>
#include <numbers>

#include "forge/errors.hpp"
#include "forge/sequences.hpp"

using namespace forge;
using std::numbers::pi;

namespace {

void check_telescoping(const Member& m) {
  CHECK(std::fabs(m.volume() - m.base_volume()) <= m.removed_volume() + m.added_volume());
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (Family f : {Family::two_sphere_tunnel, Family::many_wells, Family::well_cascade,
                   Family::sewn}) {
    CHECK(family_from(to_string(f)) == f);
  }
  CHECK_THROWS_AS(family_from("spheres"), ForgeError);
}

TEST_CASE("two-sphere tunnel member") {
  SequenceSpec s;
  const auto m = generate(s, 12);
  REQUIRE(m.glued);
  CHECK(m.glued->delta == doctest::Approx(1.0 / 12));
  CHECK(m.glued->d == 30.0);
  CHECK(m.min_R() >= m.floor);
  CHECK(m.floor == doctest::Approx(6.0 - 1.0 / 12));
  CHECK(m.base_volume() == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  check_telescoping(m);
  CHECK_THROWS_AS(generate(s, 9), ForgeError);
}

TEST_CASE("many wells: j sites, disjoint collars, one shared well") {
  SequenceSpec s;
  s.family = Family::many_wells;
  for (int j : {1, 3, 8}) {
    CAPTURE(j);
    const auto m = generate(s, j);
    REQUIRE(m.wells.size() == static_cast<size_t>(j));
    CHECK(m.disjoint_collars() == j);
    CHECK(m.wells.front().well == m.wells.back().well);
    CHECK(m.wells.front().delta < 1.0 / j);
    CHECK(m.wells.front().length >= 0.5);
    CHECK(m.min_R() >= m.floor);
    check_telescoping(m);
    for (size_t a = 0; a + 1 < m.wells.size(); ++a) CHECK(m.tip_distance(a, a + 1) > 1.0);
  }
}

TEST_CASE("cascade: deeper wells on shrinking balls") {
  SequenceSpec s;
  s.family = Family::well_cascade;
  s.kappa = 3.0;
  const auto m = generate(s, 3);
  REQUIRE(m.wells.size() == 3);
  CHECK(m.bg.scalar() == doctest::Approx(6.0));
  CHECK(m.disjoint_collars() == 3);
  double prev_d = 0.0;
  for (size_t k = 0; k < 3; ++k) {
    const auto& w = m.wells[k];
    const int j = static_cast<int>(k) + 1;
    CHECK(2 * w.delta < std::ldexp(1.0, -j));
    CHECK(w.d >= 2.0);
    CHECK(w.d <= 10.0);
    CHECK(w.d > prev_d);
    prev_d = w.d;
    CHECK(w.min_R > 6.0 * (1 - 1.0 / (10 * j)));
    CHECK(w.length >= w.d);
  }
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = a + 1; b < 3; ++b) CHECK(m.tip_distance(a, b) > 2.0);
  }
  CHECK(m.min_R() > s.kappa);
  check_telescoping(m);
}

TEST_CASE("sewing schedule on a great circle") {
  const BackgroundSpace S3{3, 1.0};
  std::shared_ptr<const GluedManifold> t;
  const auto s = sewing_schedule(S3, 2 * pi, 6.0, 0.8, 1e-2, 4, {}, &t);
  REQUIRE(t);
  CHECK(s.sites == 8);
  CHECK(s.points == 56);
  CHECK(s.points % 2 == 0);
  CHECK(s.tunnels.size() == 28);
  CHECK(s.delta > 0);
  CHECK(s.delta < s.r);
  CHECK(s.min_point_gap > 4 * s.delta);
  CHECK(s.total_tunnel_volume <= s.epsilon);
  CHECK(s.diameter_bound <= 2 * s.r);
  // Every point is the end of exactly one tunnel.
  std::vector<int> uses(static_cast<size_t>(s.points), 0);
  for (auto [a, b] : s.tunnels) {
    ++uses[static_cast<size_t>(a)];
    ++uses[static_cast<size_t>(b)];
  }
  for (int u : uses) CHECK(u == 1);
  CHECK(min_scalar(*t) >= 6.0 - 0.25);
}

TEST_CASE("sewing schedule rejects impossible requests") {
  const BackgroundSpace S3{3, 1.0};
  auto kind = [&](double len, double r, double eps) {
    try {
      sewing_schedule(S3, len, 6.0, r, eps, 4);
    } catch (const ForgeError& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  CHECK(kind(2 * pi, 0.0, 1e-2) == ErrorKind::ScheduleInfeasible);
  CHECK(kind(2 * pi, 4.0, 1e-2) == ErrorKind::ScheduleInfeasible);
  CHECK(kind(2 * pi, 0.5, 0.0) == ErrorKind::ScheduleInfeasible);
  CHECK(kind(7.0, 0.5, 1e-2) == ErrorKind::ScheduleInfeasible);
}

TEST_CASE("sewn member records the schedule and its tunnel") {
  SequenceSpec s;
  s.family = Family::sewn;
  const auto m = generate(s, 3);
  REQUIRE(m.sewing);
  REQUIRE(m.sewing_tunnel);
  CHECK(m.volume() <= m.base_volume() + m.sewing->epsilon);
  CHECK(m.min_R() >= m.floor);
  check_telescoping(m);
}
