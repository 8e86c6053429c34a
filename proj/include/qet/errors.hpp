#pragma once

#include <stdexcept>
#include <string>

namespace qet {

/// Stable process exit codes used by the CLI; library errors carry the
/// matching code so the frontend maps exceptions without inspection.
enum class ErrorCode : int {
  ok = 0,
  validation = 2,   // malformed input, dimension/domain violations
  infeasible = 3,   // direction not reachable at finite energy
  numerical = 4,    // overflow guards, degenerate decompositions
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Bad dimensions, non-finite entries, out-of-range probabilities,
/// malformed configs.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::validation, what) {}
};

/// Requested shift cannot be achieved at finite energy (R^2 = 0).
class FeasibilityError : public Error {
 public:
  explicit FeasibilityError(const std::string& what)
      : Error(ErrorCode::infeasible, what) {}
};

/// Numeric failure: overflow guard tripped, indefinite matrix where a
/// PSD one is required, degenerate variance.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

}  // namespace qet
