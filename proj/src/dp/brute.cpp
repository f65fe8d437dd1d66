#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::dp {

namespace {

std::vector<StepLaw> enumerable_laws(const ObservationModel& model) {
  if (!model.is_discrete()) throw UnsupportedModel("brute force: needs a discrete model, got " + model.describe());
  const Index count = model.outcome_count();
  if (count > kBruteForceCap) {
    throw ResourceLimit("brute force: " + model.describe() + " has " + std::to_string(count) +
                        " outcome tuples, cap is " + std::to_string(kBruteForceCap));
  }
  std::vector<StepLaw> laws;
  for (Index j = 1; j <= model.n(); ++j) laws.push_back(model.step_law(j));
  return laws;
}

class HistoryOracle {
 public:
  HistoryOracle(std::vector<StepLaw> laws, const ThresholdPolicy* compare)
      : laws_(std::move(laws)), n_(static_cast<Index>(laws_.size())), compare_(compare) {}

  BruteForceReport run() {
    BruteForceReport report;
    report.value = best(0);
    report.record_nodes = record_nodes_;
    report.disagreements = disagreements_;
    return report;
  }

 private:
  // P(every observation after step j is >= x), by enumerating the completions.
  double survives(Index j, double x) const {
    double total = 0.0;
    enumerate(j, 1.0, [&](double weight, const std::vector<double>& tail) {
      if (std::all_of(tail.begin(), tail.end(), [x](double y) { return y >= x; })) total += weight;
    });
    return total;
  }

  template <class Leaf>
  void enumerate(Index j, double weight, Leaf&& leaf) const {
    std::vector<double> tail;
    walk(j, weight, tail, leaf);
  }

  template <class Leaf>
  void walk(Index j, double weight, std::vector<double>& tail, Leaf& leaf) const {
    if (j == n_) {
      leaf(weight, tail);
      return;
    }
    const StepLaw& law = laws_[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < law.values.size(); ++i) {
      tail.push_back(law.values[i]);
      walk(j + 1, weight * law.probs[i], tail, leaf);
      tail.pop_back();
    }
  }

  // Optimal success probability after observing history_ = X_1..X_j without
  // having stopped, the decision at step j included (j = 0: nothing seen).
  double best(Index j) {
    if (j > 0) {
      const double x = history_.back();
      const double past_min = j == 1 ? kInf : *std::min_element(history_.begin(), history_.end() - 1);
      const bool record = x <= past_min;
      if (j == n_) return record ? 1.0 : 0.0;  // forced stop
      if (record) {
        const double stop = survives(j, x);
        const double cont = continuation(j);
        ++record_nodes_;
        if (compare_ && std::fabs(stop - cont) > 1e-12) {
          const bool optimal_stop = stop > cont;
          const bool policy_stop = x <= compare_->at_step(static_cast<std::size_t>(j));
          if (optimal_stop != policy_stop) ++disagreements_;
        }
        return std::max(stop, cont);
      }
    }
    return continuation(j);
  }

  double continuation(Index j) {
    const StepLaw& law = laws_[static_cast<std::size_t>(j)];
    CompensatedSum acc;
    for (std::size_t i = 0; i < law.values.size(); ++i) {
      history_.push_back(law.values[i]);
      acc.add(law.probs[i] * best(j + 1));
      history_.pop_back();
    }
    return acc.value();
  }

  std::vector<StepLaw> laws_;
  Index n_;
  const ThresholdPolicy* compare_;
  std::vector<double> history_;
  Index record_nodes_ = 0;
  Index disagreements_ = 0;
};

}  // namespace

double brute_force_value(const ObservationModel& model, const ThresholdPolicy& policy, RecordSemantics semantics) {
  const auto laws = enumerable_laws(model);
  const Index n = model.n();
  require_valid_policy(policy, static_cast<std::size_t>(n));

  CompensatedSum success;
  std::vector<double> xs(static_cast<std::size_t>(n));
  // Odometer over all tuples.
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  while (true) {
    double weight = 1.0;
    for (Index j = 0; j < n; ++j) {
      const StepLaw& law = laws[static_cast<std::size_t>(j)];
      xs[static_cast<std::size_t>(j)] = law.values[digit[static_cast<std::size_t>(j)]];
      weight *= law.probs[digit[static_cast<std::size_t>(j)]];
    }
    double running = kInf;
    double stopped = xs.back();  // tau = n by default
    for (Index j = 0; j < n - 1; ++j) {
      const double x = xs[static_cast<std::size_t>(j)];
      const bool record = semantics == RecordSemantics::Weak ? x <= running : x < running;
      if (record && x <= policy.at_step(static_cast<std::size_t>(j + 1))) {
        stopped = x;
        break;
      }
      running = std::min(running, x);
    }
    if (stopped == *std::min_element(xs.begin(), xs.end())) success.add(weight);

    Index pos = n - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == laws[static_cast<std::size_t>(pos)].values.size()) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return success.value();
}

BruteForceReport brute_force_optimal(const ObservationModel& model, const ThresholdPolicy* compare) {
  auto laws = enumerable_laws(model);
  if (compare) require_valid_policy(*compare, static_cast<std::size_t>(model.n()));
  return HistoryOracle(std::move(laws), compare).run();
}

}  // namespace stoprule::dp
