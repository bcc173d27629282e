#pragma once

#include <stdexcept>
#include <string>

namespace edge34 {

enum class ErrorCode {
  Domain,
  Precondition,
  BlowUp,
  OutOfValidity,
  ContinuationFailure,
  NotConverged,
  PoleNearby,
  OnContour,
  UnsupportedPotential,
  QuadratureNotConverged
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Domain: return "Domain";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::OutOfValidity: return "OutOfValidity";
    case ErrorCode::ContinuationFailure: return "ContinuationFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::PoleNearby: return "PoleNearby";
    case ErrorCode::OnContour: return "OnContour";
    case ErrorCode::UnsupportedPotential: return "UnsupportedPotential";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what)
      : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
  Error(ErrorCode c, const std::string& what, double where)
      : Error(c, what + " (at " + std::to_string(where) + ")") {
    where_ = where;
  }
  ErrorCode code() const { return code_; }
  double where() const { return where_; }

 private:
  ErrorCode code_;
  double where_ = 0.0;
};

}  // namespace edge34
