#include "forge/errors.hpp"

namespace forge {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::StepTooCoarse: return "StepTooCoarse";
    case ErrorKind::NoAdmissibleS0: return "NoAdmissibleS0";
    case ErrorKind::StopAngleInfeasible: return "StopAngleInfeasible";
    case ErrorKind::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorKind::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorKind::RadiusExceedsBall: return "RadiusExceedsBall";
    case ErrorKind::PoleSingularity: return "PoleSingularity";
    case ErrorKind::RadiusMismatch: return "RadiusMismatch";
    case ErrorKind::ScheduleInfeasible: return "ScheduleInfeasible";
    case ErrorKind::NoNeck: return "NoNeck";
    case ErrorKind::CertificationMissing: return "CertificationMissing";
    case ErrorKind::InfeasibleA: return "InfeasibleA";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace forge
