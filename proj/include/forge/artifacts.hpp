#pragma once

// Persistence: recipes that rebuild a glued manifold, the versioned profile
// file, JSON reports and the samples CSV.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "forge/gluing.hpp"
#include "forge/report.hpp"

namespace forge {

inline constexpr const char* kProfileSchema = "forge.profile/1";
inline constexpr const char* kReportSchema = "forge.report/1";
inline constexpr const char* kManifestSchema = "forge.manifest/1";

// Everything needed to rebuild a glued manifold deterministically.
struct Recipe {
  std::string kind = "well";  // well | tunnel | sphere
  int n = 3;
  double K0 = 1.0, K0_far = 1.0;  // K0_far: far side of a tunnel
  double kappa = 6.0;
  int j = 10;
  double delta = 0.1;
  double d = 0.5;
  double base_step = 1.0 / 512;
  int refine = 0;

  BuildOptions options() const;
};

GluedManifold build(const Recipe& r);
Recipe recipe_of(const GluedManifold& m, const StepPolicy& policy = {});

// Text profile: schema line, recipe fields, then every piece and span with its
// w samples at 17 significant digits.
void write_profile(std::ostream& os, const GluedManifold& m, const Recipe& r);
// Parses a profile; the manifold carries the stored samples (dw from differences).
GluedManifold read_profile(std::istream& is, Recipe* recipe);

// Largest |w_a - w_b| / max |w| over matching samples; infinity if the layouts differ.
double sample_deviation(const GluedManifold& a, const GluedManifold& b);

// FNV-1a 64 of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

// Report document (ordered keys, no timestamps).
std::string report_json(const std::string& command, const std::string& config_json,
                        const VerificationReport& rep, const std::string& error_kind = {},
                        const std::string& error_message = {});

}  // namespace forge
