#include "forge/report.hpp"

#include <cmath>
#include <limits>

#include "forge/errors.hpp"

namespace forge {

Claim make_claim(std::string tag, double measured, std::string relation, double threshold,
                 std::string note) {
  Claim c;
  c.tag = std::move(tag);
  c.measured = measured;
  c.threshold = threshold;
  c.relation = std::move(relation);
  c.note = std::move(note);
  if (c.relation == "<=") c.pass = measured <= threshold;
  else if (c.relation == "<") c.pass = measured < threshold;
  else if (c.relation == ">=") c.pass = measured >= threshold;
  else if (c.relation == ">") c.pass = measured > threshold;
  else if (c.relation == "==") c.pass = measured == threshold;
  else throw ForgeError(ErrorKind::InvalidInput, "unknown relation " + c.relation);
  return c;
}

bool VerificationReport::pass() const {
  for (const auto& c : claims) {
    if (!c.pass) return false;
  }
  return true;
}

const Claim* VerificationReport::find(const std::string& tag) const {
  for (const auto& c : claims) {
    if (c.tag == tag) return &c;
  }
  return nullptr;
}

double VerificationReport::measured(const std::string& name) const {
  for (const auto& [k, v] : measures) {
    if (k == name) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (auto c : other.claims) {
    c.tag = prefix + c.tag;
    claims.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.measures) measures.emplace_back(prefix + k, v);
}

std::string VerificationReport::failures() const {
  std::string out;
  for (const auto& c : claims) {
    if (c.pass) continue;
    if (!out.empty()) out += ",";
    out += c.tag;
  }
  return out;
}

}  // namespace forge
