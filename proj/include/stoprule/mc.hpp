#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stoprule/dp.hpp"
#include "stoprule/model.hpp"
#include "stoprule/policy.hpp"

namespace stoprule::mc {

using dp::RecordSemantics;

// splitmix64 stream keyed by (seed, replication): every replication owns an
// independent stream, so results do not depend on how work is split.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Exponential with unit mean.
  double exponential();

 private:
  std::uint64_t state_;
};

struct SimConfig {
  ObservationModel model;
  std::optional<ThresholdPolicy> policy;  // empty: optimal thresholds from the exact solvers
  Index replications = 100000;
  std::uint64_t seed = 1;
  RecordSemantics semantics = RecordSemantics::Weak;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SimResult {
  double success_rate = 0.0;
  double tie_rate = 0.0;
  double mean_stop_fraction = 0.0;  // E[tau/n]
  double std_error = 0.0;           // sqrt(p(1-p)/reps) for success_rate
  double stop_fraction_std_error = 0.0;
  Index replications = 0;
  Index successes = 0;
  Index ties = 0;
};

// Optimal thresholds for simulation: dp::solve for lattice models and the
// pyramid, the full-information thresholds for iid uniform [0,1].
ThresholdPolicy optimal_policy(const ObservationModel& model);

// X_1..X_n of replication `rep`.
void sample_observations(const ObservationModel& model, std::uint64_t seed, Index rep, std::vector<double>& out);

// 1-based stopping index: first record at or below its threshold, else n.
Index stopping_index(std::span<const double> xs, const ThresholdPolicy& policy, RecordSemantics semantics);

SimResult simulate(const SimConfig& config);

struct ScalingReport {
  bool skipped = false;
  std::string note;
  double scale = 0.0;        // M_n is divided by this
  double statistic = 0.0;    // sup |empirical cdf - limit cdf|
  double threshold = 0.02;   // calibration choice, not a derived bound
  bool passed = false;
  // Triangular only: sup distances of the exact finite-n law to the limit and
  // to the empirical cdf; NaN otherwise.
  double exact_vs_limit = 0.0;
  double empirical_vs_exact = 0.0;
};

// Law of the scaled sample minimum against its Rayleigh/Weibull limit.
ScalingReport scaling_check(const ObservationModel& model, Index reps, std::uint64_t seed, unsigned threads = 0);

// Limit cdf of the scaled minimum for the given model.
double scaling_limit_cdf(const ObservationModel& model, double x);

struct BoundsReport {
  Index n = 0;
  Index K = 0;
  double v_bar = 0.0;  // continuous-case value
  double delta = 0.0;  // tie probability
  double exact = 0.0;  // dp value
  bool exact_holds = false;
  double simulated = 0.0;
  double std_error = 0.0;
  bool simulated_holds = false;
};

// v_bar <= v <= v_bar + delta for the rectangular model, exactly (1e-12
// slack) and for the simulated optimum (4 standard errors).
BoundsReport bounds_check(Index n, Index K, Index reps, std::uint64_t seed, unsigned threads = 0);

struct TieBreakReport {
  Index samples = 0;
  Index violations = 0;  // replications where argmin Y is not an argmin of X
  double ks_statistic = 0.0;
  double critical_value = 0.0;  // alpha = 1e-3
  bool passed = false;
};

// Randomised tie breaking on RectangularDiscrete samples: order check per
// replication and a KS uniformity test over all transformed values.
TieBreakReport tie_break_check(const ObservationModel& model, Index reps, std::uint64_t seed);

}  // namespace stoprule::mc
