#pragma once

#include <cstdint>
#include <vector>

#include "frameforge/seqcore.hpp"

namespace frameforge {

/// Tunables shared by the library pipelines and the command line.
struct RunConfig {
  double tolerance = 1e-9;
  double svd_cutoff = 1e-10;
  double trend_slope_threshold = 0.25;
  double defect_residual_threshold = 0.5;
  std::uint64_t seed = 0;
  std::vector<Index> ns{4, 8, 16, 32, 64};
  int sign_trials = 64;
  int ascent_iters = 500;
  Index max_dim = 512;
  double condition_cap = 1e8;
  /// Exponent q in value ~ (log N)^q above which a series counts as growing.
  double log_growth_threshold = 0.5;
  int test_vectors = 3;

  /// Throws std::invalid_argument on non-positive tolerances or Ns that are
  /// not strictly increasing.
  void validate() const;
};

}  // namespace frameforge
