#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfged {

// Failure categories. The CLI maps each to its own exit status.
enum class ErrorKind {
  kParse,
  kConsistency,
  kCapacity,
  kStructure,
  kConnectivity,
  kLookup,
  kShape,
  kSize,
  kValue,
  kDivergence,
  kEligibility,
  kCoverage,
  kSpec,
  kIo,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kStructure: return "structure";
    case ErrorKind::kConnectivity: return "connectivity";
    case ErrorKind::kLookup: return "lookup";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kSize: return "size";
    case ErrorKind::kValue: return "value";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kEligibility: return "eligibility";
    case ErrorKind::kCoverage: return "coverage";
    case ErrorKind::kSpec: return "spec";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the category prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace cfged
