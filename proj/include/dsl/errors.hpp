#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dsl {

inline constexpr const char* kVersion = "0.1.0";

/// Rejected configuration; `field` names the offending entry.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_, const std::string& message)
      : std::runtime_error(message), field(std::move(field_)) {}
};

/// Failure of a numerical stage (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystemError : NumericalError {
  using NumericalError::NumericalError;
};

struct TruncationCapError : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateNullSpaceError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace dsl
