#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subflow {

enum class ErrorKind {
  NonPositiveRealPart,
  QuadratureFailure,
  DomainError,
  GridTooCoarse,
  SpecInvalid,
  WindowTooNarrow,
  TruncationTooLarge,
  UnsupportedSpec,
  InversionUnstable,
  DegenerateLaw,
  NoCrossing,
  NegativeTime,
  DomainProxyViolation,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveRealPart: return "NonPositiveRealPart";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorKind::TruncationTooLarge: return "TruncationTooLarge";
    case ErrorKind::UnsupportedSpec: return "UnsupportedSpec";
    case ErrorKind::InversionUnstable: return "InversionUnstable";
    case ErrorKind::DegenerateLaw: return "DegenerateLaw";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::DomainProxyViolation: return "DomainProxyViolation";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// True for failures of a numerical procedure, as opposed to bad input.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::GridTooCoarse:
    case ErrorKind::WindowTooNarrow:
    case ErrorKind::TruncationTooLarge:
    case ErrorKind::InversionUnstable:
    case ErrorKind::DegenerateLaw:
    case ErrorKind::NoCrossing:
    case ErrorKind::DomainProxyViolation:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace subflow
