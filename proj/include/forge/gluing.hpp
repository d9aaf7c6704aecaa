#pragma once

// Closed rotationally symmetric manifolds assembled from pieces: the round
// cap of the background, a well or a pair of half tunnels with a cylinder
// in between. Every piece keeps its generating curve, so both curvature
// formulas stay available after gluing.

#include <memory>
#include <string>
#include <vector>

#include "forge/curve_kernel.hpp"
#include "forge/smoothing.hpp"
#include "forge/warped_geometry.hpp"

namespace forge {

struct GluedPiece {
  std::string name;  // cap, well, half-tunnel, cylinder, sphere; mirrored copies end in '
  std::shared_ptr<const ProfileCurve> curve;
  WarpedManifold warp;  // in the piece's own orientation
  bool mirrored = false;
  double offset = 0.0;  // glued coordinate of the piece's first (post-mirror) sample
  size_t first_span = 0, span_count = 0;  // location inside GluedManifold::flat
};

struct GluedManifold {
  std::string kind;  // well | tunnel | sphere
  int n = 3;
  BackgroundSpace bg;
  BackgroundSpace bg2;  // far side of a tunnel; equal to bg otherwise
  double kappa = 0.0;
  double floor_drop = 0.0;
  int j = 0;
  double delta = 0.0, delta0 = 0.0, d = 0.0;
  double neck_radius = 0.0;  // background radius c of the tunnel's cylinder
  int delta0_halvings = 0;
  std::vector<GluedPiece> pieces;
  WarpedManifold flat;  // every span in the glued coordinate, s from 0 to length()

  double length() const { return flat.length(); }
  double kappa_floor() const { return kappa - floor_drop; }
  const GluedPiece& piece(const std::string& name) const;
  std::vector<double> interfaces() const;
};

struct BuildOptions {
  StepPolicy policy;
  BumpBlend blend;
  int max_delta0_halvings = 8;
  bool smooth = true;
};

// Concatenate pieces (mirroring where flagged) into one manifold.
GluedManifold assemble(const std::string& kind, const BackgroundSpace& bg,
                       std::vector<GluedPiece> pieces);

// Round background from the pole at max_radius down to r_to (> 0), or to the
// center when r_to == 0.
GluedPiece cap_piece(const BackgroundSpace& bg, double r_to, double kappa,
                     const StepPolicy& policy = {});

GluedManifold round_sphere(const BackgroundSpace& bg, const StepPolicy& policy = {});

// The background with B(p, 2 delta) replaced by a well of depth about d.
GluedManifold attach_well(const BackgroundSpace& bg, double delta, double d, double kappa, int j,
                          const BuildOptions& opt = {});
// Well piece only (collar at r = 2 delta to the tip), with the same retry loop.
GluedPiece build_well_piece(const BackgroundSpace& bg, double delta, double d, double kappa,
                            int j, double floor_drop, const BuildOptions& opt, int* halvings,
                            double* delta0_used);

// Two backgrounds, each minus B(2 delta), joined by half tunnels and a cylinder of length d.
GluedManifold attach_tunnel(const BackgroundSpace& bg, const BackgroundSpace& bg2, double delta,
                            double d, double kappa, int j, const BuildOptions& opt = {});

struct InterfaceCheck {
  double s = 0.0;
  std::string left, right;
  double w_left = 0.0, w_right = 0.0;
  double slope_left = 0.0, slope_right = 0.0;
  double second_left = 0.0, second_right = 0.0;
  double value_gap = 0.0;   // |dw| / max|w|
  double slope_gap = 0.0;   // |dw'|
  double second_gap = 0.0;  // |dw''|
  double second_tol = 0.0;  // 10 (h/l)^2 (|w|/l^2 + |w''|)
  bool pass = false;
};
// C1 continuity to 1e-8 at each interface; C2 within 10 (h/l)^2 in units of the
// local scale, h the larger adjacent step and l the shorter adjacent span.
std::vector<InterfaceCheck> interface_checks(const GluedManifold& m);

// Curve-vs-warp curvature over every piece, pooled into one global comparison.
CrossOracle cross_oracle(const GluedManifold& m, double tol = 1e-6);

// Smallest curvature-formula value over the manifold (hypersurface formula).
double min_scalar(const GluedManifold& m);

// max |w(s) - w(D - s)| / max w over the samples (tunnels between equal backgrounds).
double mirror_defect(const GluedManifold& m);

}  // namespace forge
