#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace helfrich {

enum class ErrorKind {
  NonPositiveProfile,
  BadGrid,
  OutOfDomain,
  RootNotBracketed,
  NoSolution,
  DegenerateCoefficients,
  PhaseUndefined,
  PoleAtMultipleOfPi,
  NotApplicable,
  PreconditionViolated,
  DidNotConverge,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::RootNotBracketed: return "RootNotBracketed";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorKind::PhaseUndefined: return "PhaseUndefined";
    case ErrorKind::PoleAtMultipleOfPi: return "PoleAtMultipleOfPi";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DidNotConverge: return "DidNotConverge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace helfrich
