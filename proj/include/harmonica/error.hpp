#pragma once

#include <stdexcept>
#include <string>

namespace harmonica {

enum class Errc {
  PointOutsideDomain,
  BranchMismatch,
  EmptySampler,
  OpenPath,
  NonConvergent,
  TailNotDecaying,
  DegeneratePoint,
  DerivativeUnavailable,
  NonIntegerDegree,
  InvalidParameters,
  OrderOutOfRange,
  NotFTCEnd,
  PathEndpointMismatch,
  RootNotBracketed,
  LimitNormalDiverges,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::PointOutsideDomain: return "PointOutsideDomain";
    case Errc::BranchMismatch: return "BranchMismatch";
    case Errc::EmptySampler: return "EmptySampler";
    case Errc::OpenPath: return "OpenPath";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::TailNotDecaying: return "TailNotDecaying";
    case Errc::DegeneratePoint: return "DegeneratePoint";
    case Errc::DerivativeUnavailable: return "DerivativeUnavailable";
    case Errc::NonIntegerDegree: return "NonIntegerDegree";
    case Errc::InvalidParameters: return "InvalidParameters";
    case Errc::OrderOutOfRange: return "OrderOutOfRange";
    case Errc::NotFTCEnd: return "NotFTCEnd";
    case Errc::PathEndpointMismatch: return "PathEndpointMismatch";
    case Errc::RootNotBracketed: return "RootNotBracketed";
    case Errc::LimitNormalDiverges: return "LimitNormalDiverges";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace harmonica
