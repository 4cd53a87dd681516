#pragma once

#include <stdexcept>
#include <string>

namespace frameforge {

/// Malformed sequence, rule or multiplier description.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on input that does not satisfy its mathematical
/// hypothesis. `hypothesis()` names the assumption that failed.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(const std::string& what, std::string hypothesis)
      : std::invalid_argument(what), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// A truncation would exceed the configured ambient-dimension cap.
class DimensionCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frameforge
