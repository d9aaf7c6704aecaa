#pragma once

// Convergence-side quantities: an upper bound on the intrinsic flat distance
// from a common region, packing counts, and the generalized scalar curvature
// ratio at a point where a subsphere has been pulled together.

#include <vector>

#include "forge/gluing.hpp"
#include "forge/sequences.hpp"

namespace forge {

struct FlatBoundInput {
  double D_U1 = 0.0, D_U2 = 0.0;  // largest diameter of a component, measured in M_i
  double epsilon = 0.0;           // metric distortion on U
  double lambda = 0.0;            // distance defect on U
  double vol_U1 = 0.0, vol_U2 = 0.0;
  double area_dU1 = 0.0, area_dU2 = 0.0;
  double vol_rest1 = 0.0, vol_rest2 = 0.0;  // vol(M_i \ U_i)
};

struct FlatBound {
  double a_lower = 0.0;  // strict lower bound for a
  double a = 0.0;        // 1.01 a_lower; 0 (the infimum) when a_lower = 0
  double h = 0.0, hbar = 0.0;
  double bound = 0.0;
};

// Throws InfeasibleA when no finite a exceeds the lower bound, InvalidInput on
// negative fields.
FlatBound flat_distance_upper_bound(const FlatBoundInput& in);

// U = both spheres minus the balls of radius 2 delta, identical metrics there
// (epsilon = 0). The defect lambda = pi sn(2 delta) is the detour around a
// removed ball, taken over pairs within one component.
FlatBoundInput flat_input_for_tunnel(const GluedManifold& m);

// Largest set of points with pairwise distance (lower bounds) > eps, i.e.
// centers of disjoint eps/2 balls. Exact up to 24 points, greedy beyond.
int max_packing(const std::vector<std::vector<double>>& dist, double eps);

// Candidates: the two poles.
int packing_count(const GluedManifold& m, double eps);
// Candidates: the well tips and a base point at distance pi/2 from the circle
// carrying the sites; distances are lower bounds through the base.
int packing_count(const Member& m, double eps);

// Volume of the r-tube about a totally geodesic S^m_sub in the space form
// (m_sub = 0: the geodesic ball about a point).
double tube_volume(int n, int m_sub, double K0, double r);

// 6(n+2)(|B^n_r| - V(r)) / (r^2 |B^n_r|) with |B^n_r| the Euclidean ball
// volume and V the tube volume; tends to n(n-1)K0 at a smooth point.
double generalized_scalar_ratio(int n, int m_sub, double K0, double r);

struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};
// Least squares fit of log y = log c + p log x.
PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace forge
