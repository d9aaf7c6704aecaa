#pragma once

#include <functional>
#include <string>

#include "forge/curve_kernel.hpp"

namespace forge {

// Blend parameters. alpha is the blend width as a fraction of the shorter
// adjacent segment (the constructions span ~50 orders of magnitude in
// length, so a single absolute width cannot fit every breakpoint).
struct BumpBlend {
  double alpha = 0.125;
  double beta = 0.0;  // filled in: width of the angle-restoring blend, relative
  double H = 0.5;     // int_0^1 h, h(x) = g(1 - x)
  int max_halvings = 8;
};

CurvatureProfile smooth_curvature(const CurvatureProfile& profile, const BumpBlend& blend = {},
                                  const StepPolicy& policy = {});

// Result of the acceptance checks run on a smoothed profile.
struct SmoothingChecks {
  bool pass = false;
  double min_R = 0.0;
  double arc_margin = 0.0;  // min over k > 0 samples past s0 of sin/(4r) - k
  double anchor_residual = 0.0; // max angle kink at junctions
  std::string failure;
};
SmoothingChecks check_smoothed(const CurvatureProfile& q, const ProfileCurve& c);

// ---------------------------------------------------------------- mollifier

struct MollifierSpec {
  double epsilon = 1.0 / 64;
  double epsilon0 = 0.5;
};

// Height-1/100 plateau bump: 1/100 on |t| < 1/4, zero for |t| >= 1/2.
double mollifier_sigma(double t);
double mollifier_dsigma(double t);

// A Lipschitz function that is smooth on each side of a single corner at 0.
struct CornerFunction {
  std::function<double(double)> left, right;    // values for t < 0 and t > 0
  std::function<double(double)> dleft, dright;  // derivatives
  double lipschitz = 1.0;

  double value(double t) const { return t < 0 ? left(t) : (t > 0 ? right(t) : 0.5 * (left(0) + right(0))); }
  double slope(double t) const { return t < 0 ? dleft(t) : (t > 0 ? dright(t) : 0.5 * (dleft(0) + dright(0))); }
};

// h_eps(t) = int h(t - sigma_eps(t) s) phi(s) ds with sigma_eps(t) = eps^3 sigma(t/eps),
// evaluated by composite Simpson on 2^9 intervals of the kernel support.
class Mollified {
 public:
  Mollified(CornerFunction h, MollifierSpec spec);
  double operator()(double t) const;
  double derivative(double t) const;
  double original(double t) const { return h_.value(t); }
  double original_slope(double t) const { return h_.slope(t); }
  const MollifierSpec& spec() const { return spec_; }
  // Kernel half-width at t.
  double width(double t) const;

 private:
  CornerFunction h_;
  MollifierSpec spec_;
};

Mollified mollify_lipschitz(CornerFunction h, MollifierSpec spec);

// The kernel phi on the Simpson nodes, normalized so the discrete weights sum to 1.
const std::vector<std::pair<double, double>>& mollifier_nodes();

}  // namespace forge
