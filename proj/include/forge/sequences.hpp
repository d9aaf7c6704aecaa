#pragma once

// The example families: two spheres joined by a shrinking tunnel, a round
// sphere with j wells, a cascade of ever deeper wells, and sewing schedules
// that pull a curve to a point through many tiny tunnels.

#include <memory>
#include <string>
#include <vector>

#include "forge/gluing.hpp"

namespace forge {

enum class Family { two_sphere_tunnel, many_wells, well_cascade, sewn };
const char* to_string(Family f);
Family family_from(const std::string& s);  // throws InvalidInput

struct SequenceSpec {
  Family family = Family::two_sphere_tunnel;
  int n = 3;
  double kappa = 6.0;  // curvature bound of the base (cascade: R of the base is 2 kappa)
  std::vector<int> j_list;
  BuildOptions opt;
  // sewn: an arc of a great circle of this length is pulled together.
  double sew_length = 6.283185307179586;
};

// Ball parameter, depth and floor drop of a well (or tunnel) in a family.
struct FamilyLaw {
  double delta = 0.0;
  double d = 0.0;
  double floor_drop = 0.0;
};
FamilyLaw tunnel_law(int j);             // delta = 1/j (ball radius 2/j), d = 30
FamilyLaw many_wells_law(int j);         // delta = 1/(2j), d = 1/2
FamilyLaw cascade_law(int k, double kappa);  // delta = 2^-(k+2), d = 10 - 8/k

struct WellSite {
  double position = 0.0;  // arclength along the fixed great circle
  double delta = 0.0, d = 0.0;
  double floor = 0.0;     // declared bound for this well
  std::shared_ptr<const GluedPiece> well;
  double length = 0.0;    // collar (r = 2 delta) to tip
  double volume = 0.0;
  double min_R = 0.0;
  int delta0_halvings = 0;
};

// Sites on a great circle of S^n: one ball around each tunnel end.
struct SewingSchedule {
  double length = 0.0, r = 0.0, epsilon = 0.0;
  int sites = 0;               // n-bar
  int points = 0;              // n-bar (n-bar - 1)
  double delta = 0.0;
  double spacing = 0.0;        // between neighbouring points of one site
  std::vector<double> positions;
  std::vector<std::pair<int, int>> tunnels;  // indices into positions
  double tunnel_volume = 0.0;  // volume of one tunnel (two half tunnels)
  double total_tunnel_volume = 0.0;
  double tunnel_length = 0.0;  // boundary sphere to boundary sphere
  double diameter_bound = 0.0; // of the sewn region
  double min_point_gap = 0.0;  // smallest distance between two points
};

// Chooses delta so that the points fit in clusters of size r/4 around n-bar =
// ceil(length / r) sites and the tunnels add at most epsilon of volume. The
// tunnel is built to measure its volume; delta halves until the budget holds.
SewingSchedule sewing_schedule(const BackgroundSpace& bg, double curve_length, double kappa,
                               double r, double epsilon, int j, const BuildOptions& opt = {},
                               std::shared_ptr<const GluedManifold>* tunnel = nullptr);

struct Member {
  Family family = Family::two_sphere_tunnel;
  int j = 0;
  int n = 3;
  BackgroundSpace bg;
  double kappa = 0.0;
  double floor = 0.0;  // declared scalar curvature floor of the whole member
  std::shared_ptr<const GluedManifold> glued;  // two-sphere tunnel
  std::vector<WellSite> wells;                 // wells on the base sphere
  std::shared_ptr<const SewingSchedule> sewing;
  std::shared_ptr<const GluedManifold> sewing_tunnel;

  double base_volume() const;      // vol of the base space (two spheres for tunnels)
  double volume() const;
  double removed_volume() const;   // balls cut out of the base
  double added_volume() const;     // pieces glued in
  double min_R() const;
  // Distance lower bound between tips a and b through the base.
  double tip_distance(size_t a, size_t b) const;
  // Count of wells whose collars are pairwise disjoint in the base.
  int disjoint_collars() const;
};

Member generate(const SequenceSpec& spec, int j);

// Volume of the round n-sphere of curvature K0.
double space_form_volume(const BackgroundSpace& bg);

}  // namespace forge
