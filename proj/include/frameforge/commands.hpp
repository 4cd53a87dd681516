#pragma once

// Command implementations behind the frameforge executable. Each command
// returns its report instead of printing, so it can be tested in-process.

#include <optional>
#include <string>

#include "frameforge/config.hpp"
#include "frameforge/spec_json.hpp"

namespace frameforge {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kParse = 2;
inline constexpr int kDimensionCap = 3;
inline constexpr int kPrecondition = 4;
inline constexpr int kExpectation = 5;
}  // namespace exit_code

struct CommandResult {
  Json report;
  int exit_code = exit_code::kOk;
  std::optional<std::string> csv;
  std::optional<std::string> svg;
  /// Explicit spec of the largest truncation (analyze only).
  std::optional<Json> exported;
};

CommandResult cmd_analyze(const Json& spec, const RunConfig& config);

struct WeighOptions {
  enum class Mode { Bessel, Verdict, Dual, Reproducing, FiniteDomain };
  Mode mode = Mode::Verdict;
  double bound = 1.0;     ///< B for Bessel, A for Reproducing
  Index domain_dim = 1;   ///< K for FiniteDomain: W = span(e_1, ..., e_K)
  std::optional<Json> pair;  ///< second spec for Dual and Reproducing
};

CommandResult cmd_weigh(const Json& spec, const WeighOptions& options, const RunConfig& config);

enum class MultiplierAction { Apply, Invert, Unconditional, Shift, Interleave, Duality };

CommandResult cmd_multiplier(const Json& mspec, MultiplierAction action, const RunConfig& config);

/// Presets: e1-plus-en, n-e1-plus-en, finite-domain, interleave-identity.
CommandResult cmd_reproduce(const std::string& preset, const RunConfig& config);

/// The dimension cap, overridden by FRAMEFORGE_MAX_DIM when it is set.
Index effective_max_dim(const RunConfig& config);

std::string toolkit_version();

}  // namespace frameforge
