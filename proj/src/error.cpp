#include "nonbloch/error.hpp"

namespace nonbloch {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::EigNonConvergence: return "EigNonConvergence";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotOneSided: return "NotOneSided";
    case ErrorKind::ZeroForce: return "ZeroForce";
    case ErrorKind::AtExceptionalPoint: return "AtExceptionalPoint";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::EdgeContamination: return "EdgeContamination";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

bool is_configuration_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCurve:
    case ErrorKind::BadSize:
    case ErrorKind::NotOneSided:
    case ErrorKind::ZeroForce:
    case ErrorKind::BadInput:
      return true;
    default:
      return false;
  }
}

}  // namespace nonbloch
