#pragma once

// Claim records: a measured value against a threshold. Certificates and the
// CLI's reports are lists of these.

#include <string>
#include <utility>
#include <vector>

namespace forge {

struct Claim {
  std::string tag;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", "<", ">=", ">", "=="
  bool pass = false;
  std::string note;      // where the worst case sits, grid size, ...
};

// Evaluates measured `relation` threshold; NaN never passes.
Claim make_claim(std::string tag, double measured, std::string relation, double threshold,
                 std::string note = {});

struct VerificationReport {
  std::string subject;
  std::vector<Claim> claims;
  std::vector<std::pair<std::string, double>> measures;  // reported, not asserted

  bool pass() const;
  void add(Claim c) { claims.push_back(std::move(c)); }
  void measure(std::string name, double v) { measures.emplace_back(std::move(name), v); }
  double measured(const std::string& name) const;  // NaN if absent
  // Appends another report's claims and measures, tags prefixed.
  void merge(const VerificationReport& other, const std::string& prefix = {});
  const Claim* find(const std::string& tag) const;
  // Tags of the failing claims, comma separated.
  std::string failures() const;
};

}  // namespace forge
