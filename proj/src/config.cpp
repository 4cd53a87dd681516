#include "frameforge/config.hpp"

#include <stdexcept>

namespace frameforge {

void RunConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(svd_cutoff > 0.0)) throw std::invalid_argument("svd_cutoff must be > 0");
  if (!(trend_slope_threshold > 0.0)) throw std::invalid_argument("trend_slope_threshold must be > 0");
  if (!(defect_residual_threshold > 0.0)) throw std::invalid_argument("defect_residual_threshold must be > 0");
  if (!(log_growth_threshold > 0.0)) throw std::invalid_argument("log_growth_threshold must be > 0");
  if (!(condition_cap > 1.0)) throw std::invalid_argument("condition_cap must be > 1");
  if (ns.empty()) throw std::invalid_argument("Ns must not be empty");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw std::invalid_argument("Ns entries must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1]) throw std::invalid_argument("Ns must be strictly increasing");
  }
  if (sign_trials < 1) throw std::invalid_argument("sign_trials must be >= 1");
  if (ascent_iters < 0) throw std::invalid_argument("ascent_iters must be >= 0");
  if (test_vectors < 1) throw std::invalid_argument("test_vectors must be >= 1");
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");
}

}  // namespace frameforge
