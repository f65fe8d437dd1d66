#include <algorithm>
#include <cmath>

#include "stoprule/errors.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/mc.hpp"
#include "parallel.hpp"

namespace stoprule::mc {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Tally {
  Index successes = 0;
  Index ties = 0;
  Index stop_sum = 0;
  Index stop_sq_sum = 0;
};

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

std::uint64_t CounterRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::exponential() { return -std::log1p(-uniform()); }

ThresholdPolicy optimal_policy(const ObservationModel& model) {
  if (model.kind() == ModelKind::IidUniform01) return ThresholdPolicy(fullinfo::gm_optimal_thresholds(model.n()).b);
  if (model.is_lattice() || model.kind() == ModelKind::BernoulliPyramid) {
    return dp::solve(model, {.max_n = model.n(), .keep_tables = false}).policy;
  }
  throw UnsupportedModel("no exact optimal policy for " + model.describe());
}

void sample_observations(const ObservationModel& model, std::uint64_t seed, Index rep, std::vector<double>& out) {
  const Index n = model.n();
  const auto dn = static_cast<double>(n);
  out.resize(static_cast<std::size_t>(n));
  CounterRng rng(seed, static_cast<std::uint64_t>(rep));
  for (Index j = 1; j <= n; ++j) {
    const double u = rng.uniform();
    const auto dj = static_cast<double>(j);
    double x = 0.0;
    switch (model.kind()) {
      case ModelKind::IidUniform01: x = u; break;
      case ModelKind::TriangularDiscrete: x = dj + std::floor(u * static_cast<double>(n - j + 1)); break;
      case ModelKind::RectangularDiscrete: x = 1.0 + std::floor(u * static_cast<double>(model.support_size())); break;
      case ModelKind::BernoulliPyramid: x = j == 1 ? 1.0 : (u < model.p() ? 1.0 / dj : dj); break;
      case ModelKind::TrendUniformShifted: x = dj + std::floor(u * dn); break;
      case ModelKind::TrendUniformScaled: x = dj + model.rho() * dn * u; break;
      case ModelKind::TrendPowerUniform: x = dj + dn * std::pow(u, 1.0 / model.theta()); break;
    }
    out[static_cast<std::size_t>(j - 1)] = x;
  }
}

Index stopping_index(std::span<const double> xs, const ThresholdPolicy& policy, RecordSemantics semantics) {
  const auto n = static_cast<Index>(xs.size());
  double running = kInf;
  for (Index j = 1; j < n; ++j) {
    const double x = xs[static_cast<std::size_t>(j - 1)];
    const bool record = semantics == RecordSemantics::Weak ? x <= running : x < running;
    if (record && x <= policy.at_step(static_cast<std::size_t>(j))) return j;
    running = std::min(running, x);
  }
  return n;
}

SimResult simulate(const SimConfig& config) {
  if (config.replications < 1) throw DomainError("simulate needs at least one replication");
  const ObservationModel& model = config.model;
  const ThresholdPolicy policy = config.policy ? *config.policy : optimal_policy(model);
  require_valid_policy(policy, static_cast<std::size_t>(model.n()));

  const unsigned t = detail::worker_count(config.threads, config.replications);
  std::vector<Tally> tallies(t);
  detail::parallel_chunks(config.replications, t, [&](Index begin, Index end, unsigned slot) {
    Tally tally;
    std::vector<double> xs;
    for (Index rep = begin; rep < end; ++rep) {
      sample_observations(model, config.seed, rep, xs);
      const Index tau = stopping_index(xs, policy, config.semantics);
      const double low = *std::min_element(xs.begin(), xs.end());
      if (xs[static_cast<std::size_t>(tau - 1)] == low) ++tally.successes;
      if (std::count(xs.begin(), xs.end(), low) > 1) ++tally.ties;
      tally.stop_sum += tau;
      tally.stop_sq_sum += tau * tau;
    }
    tallies[slot] = tally;
  });

  Tally total;
  for (const auto& x : tallies) {
    total.successes += x.successes;
    total.ties += x.ties;
    total.stop_sum += x.stop_sum;
    total.stop_sq_sum += x.stop_sq_sum;
  }
  const auto reps = static_cast<double>(config.replications);
  const auto n = static_cast<double>(model.n());
  SimResult r;
  r.replications = config.replications;
  r.successes = total.successes;
  r.ties = total.ties;
  r.success_rate = static_cast<double>(total.successes) / reps;
  r.tie_rate = static_cast<double>(total.ties) / reps;
  r.std_error = std::sqrt(r.success_rate * (1.0 - r.success_rate) / reps);
  const double mean_tau = static_cast<double>(total.stop_sum) / reps;
  r.mean_stop_fraction = mean_tau / n;
  const double var_tau = std::max(0.0, static_cast<double>(total.stop_sq_sum) / reps - mean_tau * mean_tau);
  r.stop_fraction_std_error = std::sqrt(var_tau / reps) / n;
  return r;
}

}  // namespace stoprule::mc
