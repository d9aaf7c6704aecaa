#include "doctest.h"

#include <cmath>

#include "forge/errors.hpp"
#include "forge/smoothing.hpp"
#include "forge/transition.hpp"

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

CornerFunction abs_corner() {
  CornerFunction h;
  h.left = [](double t) { return t; };
  h.right = [](double t) { return -t; };
  h.dleft = [](double) { return 1.0; };
  h.dright = [](double) { return -1.0; };
  h.lipschitz = 1.0;
  return h;
}

// Curved corner: slopes 0.9 - t/2 on the left and -0.6 - t/2 on the right.
CornerFunction curved_corner() {
  CornerFunction h;
  h.left = [](double t) { return 0.9 * t - t * t / 4; };
  h.right = [](double t) { return -0.6 * t - t * t / 4; };
  h.dleft = [](double t) { return 0.9 - t / 2; };
  h.dright = [](double t) { return -0.6 - t / 2; };
  h.lipschitz = 1.0;
  return h;
}

}  // namespace

TEST_CASE("transition function") {
  CHECK(transition::g(0.0) == 0.0);
  CHECK(transition::g(1.0) == 1.0);
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double v = transition::g(i / 1000.0);
    // Away from the ends, where exp(-1/x) falls below the rounding of 0 and 1.
    if (i > 40 && i < 960) {
      CHECK(v > prev);
    } else {
      CHECK(v >= prev);
    }
    prev = v;
  }
  CHECK(transition::g(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(transition::H() == 0.5);
  // G1 is the antiderivative of g.
  for (double x : {0.1, 0.37, 0.5, 0.81, 1.0}) {
    const double h = 1e-5;
    CHECK((transition::G1(x + h) - transition::G1(x - h)) / (2 * h) ==
          doctest::Approx(transition::g(x)).epsilon(1e-8));
  }
  CHECK(transition::G1(1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("smoothed well passes every curve check") {
  for (int j : {10, 20, 40}) {
    CAPTURE(j);
    const auto p = build_well_arcs(params(j), kS3);
    const auto q = smooth_curvature(p);
    CHECK(q.smoothed);
    CHECK(q.alpha_rel > 0);
    const auto c = integrate_curve(q);
    const auto chk = check_smoothed(q, c);
    CHECK(chk.pass);
    CHECK(chk.min_R >= q.kappa_floor());
    CHECK(chk.arc_margin > 0);
    CHECK(chk.anchor_residual < 1e-12);
    // Closing blend drives the angle to exactly zero and leaves a positive radius.
    const auto& seg = q.segments;
    REQUIRE(seg.back().role == "pole-run");
    REQUIRE(seg[seg.size() - 2].ramp);
    const auto& before = c.spans[c.spans.size() - 2].pts.back();
    CHECK(before.theta == 0.0);
    CHECK(before.r > seg[seg.size() - 2].length);
    CHECK(c.spans.back().pts.back().r == 0.0);
  }
}

TEST_CASE("smoothed curvature is continuous across junctions") {
  const auto q = smooth_curvature(build_well_arcs(params(10), kS3));
  for (size_t i = 1; i < q.segments.size(); ++i) {
    CHECK(q.segments[i - 1].k_to == q.segments[i].k_from);
  }
  CHECK(q.segments.front().k_from == 0.0);
  CHECK(q.segments.back().k_to == 0.0);
}

TEST_CASE("smoothing keeps curvature values away from breakpoints") {
  const auto p = build_well_arcs(params(10), kS3);
  const auto q = smooth_curvature(p);
  int arcs = 0;
  for (const auto& s : q.segments) {
    if (s.role.rfind("arc-", 0) != 0) continue;
    const int i = std::stoi(s.role.substr(4));
    if (i <= p.arcs.m) CHECK(s.k_from == p.arcs.k[i]);
    ++arcs;
  }
  CHECK(arcs >= p.arcs.m);
  CHECK(arcs <= p.arcs.m + 8);
}

TEST_CASE("smoothed curve converges as the blend width halves") {
  // Compare at the end of the inductive arcs (theta = theta_bar on both).
  const auto p = build_well_arcs(params(10), kS3);
  const auto ref = integrate_curve(p);
  auto end_of_arcs = [](const ProfileCurve& c) {
    const CurveSpan* last = nullptr;
    for (const auto& sp : c.spans) {
      if (sp.role.rfind("arc-", 0) == 0) last = &sp;
    }
    return std::make_pair(last->t0 + last->pts.back().dt, last->s0 + last->length);
  };
  const auto [t_ref, s_ref] = end_of_arcs(ref);
  double prev = 1e300;
  for (double alpha : {0.125, 0.0625, 0.03125, 0.015625}) {
    BumpBlend b;
    b.alpha = alpha;
    b.max_halvings = 0;
    const auto c = integrate_curve(smooth_curvature(p, b));
    const auto [t, s] = end_of_arcs(c);
    const double dev = std::hypot(t - t_ref, s - s_ref);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("smoothed half tunnel ends on a plateau") {
  const auto p = build_half_tunnel_arcs(params(10, 0.0), kS3);
  const auto q = smooth_curvature(p);
  const auto c = integrate_curve(q);
  CHECK(check_smoothed(q, c).pass);
  const auto& plateau = c.spans.back();
  CHECK(plateau.role == "plateau");
  for (const auto& pt : plateau.pts) CHECK(pt.phi == 0.0);
}

TEST_CASE("plain smoothing inserts blends at every jump") {
  auto p = plain_profile(kS3, 1.0, Angle::from_theta(0.0),
                         {CurvatureSegment::constant(0.0, 0.2, "a"),
                          CurvatureSegment::constant(1.0, 0.3, "b"),
                          CurvatureSegment::constant(1.0, 0.1, "c"),
                          CurvatureSegment::constant(-0.5, 0.3, "d")});
  const auto q = smooth_curvature(p);
  CHECK(q.segments.size() == 6);
  CHECK(q.total_length() == doctest::Approx(p.total_length()).epsilon(1e-15));
}

TEST_CASE("an unsatisfiable floor exhausts the halvings") {
  auto p = build_well_arcs(params(10), kS3);
  p.floor_drop = 1e-9;  // floor above what the unit arc achieves
  BumpBlend b;
  b.max_halvings = 2;
  try {
    smooth_curvature(p, b);
    FAIL("expected AlphaTooLarge");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::AlphaTooLarge);
  }
}

TEST_CASE("mollifier bump") {
  CHECK(mollifier_sigma(0.0) == 0.01);
  CHECK(mollifier_sigma(0.2) == 0.01);
  CHECK(mollifier_sigma(0.5) == 0.0);
  for (int i = -600; i <= 600; ++i) {
    const double s = mollifier_sigma(i / 1000.0);
    CHECK(s >= 0.0);
    CHECK(s <= 0.01);
  }
  double total = 0.0;
  for (const auto& [s, w] : mollifier_nodes()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mollified corner keeps its Lipschitz bound") {
  for (double eps : {1.0 / 32, 1.0 / 64, 1.0 / 256}) {
    for (const auto& h : {abs_corner(), curved_corner()}) {
      const auto m = mollify_lipschitz(h, {eps, 0.5});
      double sup = -1e300, sup_h = -1e300, worst = 0.0;
      for (int i = 0; i <= (1 << 14); ++i) {
        const double t = -eps + 2 * eps * i / (1 << 14);
        const double d = m.derivative(t);
        worst = std::max(worst, std::fabs(d));
        sup = std::max(sup, d);
        if (t != 0) sup_h = std::max(sup_h, h.slope(t));
      }
      CHECK(worst <= h.lipschitz + 1e-12);
      CHECK(sup <= sup_h + 1e-12);
    }
  }
}

TEST_CASE("mollifier leaves smooth functions untouched outside the window") {
  CornerFunction lin;
  lin.left = lin.right = [](double t) { return 0.3 * t + 1; };
  lin.dleft = lin.dright = [](double) { return 0.3; };
  const double eps = 1.0 / 32;
  const auto m = mollify_lipschitz(lin, {eps, 0.5});
  CHECK(m(0.6 * eps) == lin.value(0.6 * eps));
  CHECK(m(-2 * eps) == lin.value(-2 * eps));
  for (int i = -50; i <= 50; ++i) {
    const double t = eps * i / 100;
    CHECK(std::fabs(m(t) - lin.value(t)) <= 4e-15);
  }
}

TEST_CASE("mollifier deviation rates") {
  // C0 deviation at the corner scales like eps^3.
  std::vector<double> dev0, dev1;
  for (int k = 5; k <= 9; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const auto m = mollify_lipschitz(abs_corner(), {eps, 0.5});
    dev0.push_back(std::fabs(m(0.0) - 0.0));
  }
  for (size_t i = 1; i < dev0.size(); ++i) CHECK(std::log2(dev0[i - 1] / dev0[i]) > 2.9);
  // C1 deviation away from the corner shrinks by well over 3.5x per halving.
  for (int k = 2; k <= 6; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const auto h = curved_corner();
    const auto m = mollify_lipschitz(h, {eps, 4.0});
    double worst = 0.0;
    for (int i = 0; i <= 4096; ++i) {
      const double t = eps / 50 + (eps / 2) * i / 4096;
      worst = std::max(worst, std::fabs(m.derivative(t) - h.slope(t)));
      worst = std::max(worst, std::fabs(m.derivative(-t) - h.slope(-t)));
    }
    dev1.push_back(worst);
  }
  for (size_t i = 1; i < dev1.size(); ++i) CHECK(dev1[i - 1] / dev1[i] >= 3.5);
}

TEST_CASE("mollifier scale must be small against the window") {
  try {
    mollify_lipschitz(abs_corner(), {0.06, 0.5});
    FAIL("expected ScaleTooLarge");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ErrorKind::ScaleTooLarge);
  }
}
