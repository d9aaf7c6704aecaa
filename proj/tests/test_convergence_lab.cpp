#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "forge/convergence_lab.hpp"
#include "forge/errors.hpp"

using namespace forge;
using std::numbers::pi;

namespace {

FlatBoundInput sample_input() {
  FlatBoundInput in;
  in.D_U1 = 3.5;
  in.D_U2 = 3.2;
  in.epsilon = 0.01;
  in.lambda = 0.05;
  in.vol_U1 = 19.0;
  in.vol_U2 = 19.5;
  in.area_dU1 = 0.3;
  in.area_dU2 = 0.25;
  in.vol_rest1 = 0.02;
  in.vol_rest2 = 0.03;
  return in;
}

}  // namespace

TEST_CASE("flat bound of identical manifolds is zero") {
  FlatBoundInput in;
  in.D_U1 = in.D_U2 = pi;
  in.vol_U1 = in.vol_U2 = 2 * pi * pi;
  const auto b = flat_distance_upper_bound(in);
  CHECK(b.a == 0.0);
  CHECK(b.h == 0.0);
  CHECK(b.bound == 0.0);
}

TEST_CASE("flat bound formula by hand") {
  const auto in = sample_input();
  const auto b = flat_distance_upper_bound(in);
  const double a = 1.01 * std::acos(1 / 1.01) / pi * 3.5;
  const double h = std::sqrt(0.05 * (3.5 + 0.0125));
  const double hb = std::max(h, std::sqrt(0.0001 + 0.02) * 3.5);
  CHECK(b.a == doctest::Approx(a).epsilon(1e-14));
  CHECK(b.hbar == doctest::Approx(hb).epsilon(1e-14));
  CHECK(b.bound == doctest::Approx((2 * hb + a) * 39.05 + 0.05).epsilon(1e-14));
}

TEST_CASE("flat bound is monotone in every argument") {
  const auto base = flat_distance_upper_bound(sample_input()).bound;
  double FlatBoundInput::*fields[] = {&FlatBoundInput::D_U1,     &FlatBoundInput::D_U2,
                                      &FlatBoundInput::epsilon,  &FlatBoundInput::lambda,
                                      &FlatBoundInput::vol_U1,   &FlatBoundInput::vol_U2,
                                      &FlatBoundInput::area_dU1, &FlatBoundInput::area_dU2,
                                      &FlatBoundInput::vol_rest1, &FlatBoundInput::vol_rest2};
  for (auto f : fields) {
    auto in = sample_input();
    in.*f *= 1.1;
    CHECK(flat_distance_upper_bound(in).bound >= base);
  }
}

TEST_CASE("flat bound rejects bad input") {
  auto in = sample_input();
  in.lambda = -1;
  CHECK_THROWS_AS(flat_distance_upper_bound(in), ForgeError);
  in = sample_input();
  in.D_U1 = std::numeric_limits<double>::infinity();
  try {
    flat_distance_upper_bound(in);
    FAIL("expected InfeasibleA");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleA);
  }
}

TEST_CASE("flat bound decreases along the tunnel family") {
  double prev = std::numeric_limits<double>::infinity();
  for (int j : {10, 20, 40}) {
    const auto m = attach_tunnel({3, 1.0}, {3, 1.0}, 1.0 / j, 30.0, 6.0, j);
    const auto in = flat_input_for_tunnel(m);
    CHECK(in.epsilon == 0.0);
    const auto b = flat_distance_upper_bound(in);
    CHECK(b.bound < prev);
    prev = b.bound;
  }
}

TEST_CASE("packing counts") {
  const auto s = round_sphere({3, 1.0});
  CHECK(packing_count(s, pi) == 1);
  CHECK(packing_count(s, 3.0) == 2);
  // Exact search beats greedy on a path a - b - c.
  const std::vector<std::vector<double>> d{{0, 1, 3}, {1, 0, 1}, {3, 1, 0}};
  CHECK(max_packing(d, 2.0) == 2);
  CHECK(max_packing(d, 0.5) == 3);
  CHECK(max_packing(d, 5.0) == 1);

  SequenceSpec spec;
  spec.family = Family::many_wells;
  int prev = 0;
  for (int j : {2, 4, 8}) {
    const auto m = generate(spec, j);
    const int c = packing_count(m, 0.25);
    CHECK(c >= j);
    CHECK(c >= prev);
    prev = c;
    // Non-increasing in the scale.
    CHECK(packing_count(m, 0.5) <= c);
    CHECK(packing_count(m, 5.0) <= packing_count(m, 0.5));
  }
}

TEST_CASE("tube volumes") {
  // The tube of radius pi/2 about a great circle is all of S^3.
  CHECK(tube_volume(3, 1, 1.0, pi / 2) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
  CHECK(tube_volume(3, 0, 1.0, pi) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
  CHECK(tube_volume(3, 0, 0.0, 1.0) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  CHECK_THROWS_AS(tube_volume(3, 3, 1.0, 0.1), ForgeError);
  CHECK_THROWS_AS(tube_volume(3, 1, 0.0, 0.1), ForgeError);
  const std::vector<double> rs{1e-3, std::pow(10.0, -2.5), 1e-2,
                               std::pow(10.0, -1.5), 1e-1};
  for (auto [n, m] : {std::pair{3, 1}, {3, 2}, {4, 1}, {4, 2}, {5, 3}}) {
    std::vector<double> v;
    for (double r : rs) v.push_back(tube_volume(n, m, 1.0, r));
    const auto f = fit_power(rs, v);
    CHECK(std::fabs(f.exponent - (n - m)) <= 0.02 * (n - m));
  }
}

TEST_CASE("generalized scalar curvature ratio") {
  CHECK(generalized_scalar_ratio(3, 0, 1.0, 1e-3) == doctest::Approx(6.0).epsilon(1e-2));
  CHECK(generalized_scalar_ratio(4, 0, 0.5, 1e-3) == doctest::Approx(6.0).epsilon(1e-2));
  CHECK(std::fabs(generalized_scalar_ratio(3, 0, 0.0, 1e-2)) < 1e-8);
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {1e-1, 1e-2, 1e-3}) {
    const double q = generalized_scalar_ratio(3, 1, 1.0, r);
    CHECK(q < prev);
    prev = q;
  }
  CHECK(generalized_scalar_ratio(3, 1, 1.0, 1e-2) < -1e3);
}
