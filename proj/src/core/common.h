#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pvpc {

enum class ErrorCode {
  EmptyCloud,
  InsufficientPoints,
  MalformedHeader,
  NonIntegerGeometry,
  PatchTooWide,
  QpOutOfRange,
  SchedulingViolation,
  BitstreamError,
  InconsistentAtlas,
  BadView,
  NormalsRequired,
  NoOverlap,
  InvalidArgument,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonIntegerGeometry: return "NonIntegerGeometry";
    case ErrorCode::PatchTooWide: return "PatchTooWide";
    case ErrorCode::QpOutOfRange: return "QpOutOfRange";
    case ErrorCode::SchedulingViolation: return "SchedulingViolation";
    case ErrorCode::BitstreamError: return "BitstreamError";
    case ErrorCode::InconsistentAtlas: return "InconsistentAtlas";
    case ErrorCode::BadView: return "BadView";
    case ErrorCode::NormalsRequired: return "NormalsRequired";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Round-half-up division of a non-negative numerator by a positive denominator.
inline int64_t divRoundHalfUp(int64_t num, int64_t den) { return (num + den / 2) / den; }

}  // namespace pvpc
