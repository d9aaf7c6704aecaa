#pragma once

#include <stdexcept>
#include <string>

namespace forge {

enum class ErrorKind {
  InvalidInput,
  NonPositiveRadius,
  StepTooCoarse,
  NoAdmissibleS0,
  StopAngleInfeasible,
  AlphaTooLarge,
  ScaleTooLarge,
  RadiusExceedsBall,
  PoleSingularity,
  RadiusMismatch,
  ScheduleInfeasible,
  NoNeck,
  CertificationMissing,
  InfeasibleA,
  ParseError,
};

const char* to_string(ErrorKind k);

class ForgeError : public std::runtime_error {
 public:
  ForgeError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ForgeError(ErrorKind::InvalidInput, what);
}

}  // namespace forge
