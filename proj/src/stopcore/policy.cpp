#include "stoprule/policy.hpp"

#include <cmath>
#include <string>

#include "stoprule/errors.hpp"

namespace stoprule {

bool validate_policy(std::span<const double> thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (std::isnan(thresholds[i])) return false;
    if (i > 0 && thresholds[i] < thresholds[i - 1]) return false;
  }
  return true;
}

void require_valid_policy(const ThresholdPolicy& policy, std::size_t n) {
  if (policy.size() != n) {
    throw InvalidPolicy("policy has " + std::to_string(policy.size()) + " thresholds, model has n = " +
                        std::to_string(n));
  }
  if (!validate_policy(policy)) throw InvalidPolicy("thresholds must be nondecreasing");
}

}  // namespace stoprule
