#pragma once

// The checks run on built manifolds and family members, as claim lists.
// Members are summarized into reports so that families never hold more than
// one member in memory.

#include <utility>
#include <vector>

#include "forge/artifacts.hpp"
#include "forge/report.hpp"
#include "forge/sequences.hpp"

namespace forge {

// Interfaces, caps and volume additivity: what the stored samples alone show.
VerificationReport sample_claims(const GluedManifold& m);

// Everything for a freshly built manifold (curvature floor, both curvature
// formulas, collar, diameter, volume; tunnels add the comparison map).
VerificationReport manifold_claims(const GluedManifold& m, bool with_map = true);

// Curvature discrepancy falls by ~4x per step halving over refine 0..refine_max.
VerificationReport order_claims(const Recipe& r, int refine_max);

// A member of a family, with the measures the family checks need.
VerificationReport member_claims(const Member& m);

// Cross-member checks; `members` are (j, member report) in increasing j.
VerificationReport family_claims(Family f, const std::vector<std::pair<int, VerificationReport>>& members);

// Tube-volume exponents and the generalized scalar ratio ladder.
VerificationReport scalar_ratio_claims();

}  // namespace forge
