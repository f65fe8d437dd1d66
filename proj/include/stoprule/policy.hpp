#pragma once

#include <limits>
#include <span>
#include <vector>

namespace stoprule {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// "Stop at the first record at step j whose value is <= thresholds[j-1]".
// Entries may be -inf (never stop at that step) or +inf (accept any record).
class ThresholdPolicy {
 public:
  ThresholdPolicy() = default;
  explicit ThresholdPolicy(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {}

  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  std::size_t size() const noexcept { return thresholds_.size(); }
  // 1-based step index, matching the rest of the library.
  double at_step(std::size_t j) const { return thresholds_.at(j - 1); }

  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;

 private:
  std::vector<double> thresholds_;
};

// True iff the thresholds are nondecreasing. NaN entries make a policy invalid.
bool validate_policy(std::span<const double> thresholds);
inline bool validate_policy(const ThresholdPolicy& policy) { return validate_policy(policy.thresholds()); }

// Throws InvalidPolicy unless the policy has exactly n entries and is monotone.
void require_valid_policy(const ThresholdPolicy& policy, std::size_t n);

}  // namespace stoprule
