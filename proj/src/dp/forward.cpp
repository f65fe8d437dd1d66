#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::dp {

namespace {

void require_discrete(const ObservationModel& model, const char* what) {
  if (!model.is_discrete()) {
    throw UnsupportedModel(std::string(what) + ": needs a discrete model, got " + model.describe());
  }
}

// Product of many factors in [0,1] kept as mantissa * 2^exponent with the
// zero factors counted apart, so single factors can be divided back out.
struct ScaledProduct {
  double mantissa = 1.0;
  long exponent = 0;
  long zeros = 0;

  void multiply(double f) {
    if (f == 1.0) return;
    if (f == 0.0) {
      ++zeros;
      return;
    }
    int e = 0;
    mantissa = std::frexp(mantissa * f, &e);
    exponent += e;
  }
  void divide(double f) {
    if (f == 1.0) return;
    if (f == 0.0) {
      --zeros;
      return;
    }
    int e = 0;
    mantissa = std::frexp(mantissa / f, &e);
    exponent += e;
  }
  double value() const {
    if (zeros > 0) return 0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent));
  }
};

}  // namespace

Decomposition policy_value(const ObservationModel& model, const ThresholdPolicy& policy, RecordSemantics semantics) {
  require_discrete(model, "policy_value");
  const Index n = model.n();
  require_valid_policy(policy, static_cast<std::size_t>(n));

  std::vector<StepLaw> laws;
  laws.reserve(static_cast<std::size_t>(n));
  std::vector<double> grid;
  for (Index j = 1; j <= n; ++j) {
    laws.push_back(model.step_law(j));
    grid.insert(grid.end(), laws.back().values.begin(), laws.back().values.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t g = grid.size();
  const std::size_t sentinel = g;  // M_0, above every value

  // Per step: probabilities placed on the grid and P(X_j >= grid[u]).
  auto place = [&](const StepLaw& law, std::vector<double>& pm, std::vector<double>& ge) {
    std::fill(pm.begin(), pm.end(), 0.0);
    for (std::size_t i = 0; i < law.values.size(); ++i) {
      const auto u = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), law.values[i]) - grid.begin());
      pm[u] += law.probs[i];
    }
    double acc = 0.0;
    std::size_t first = g;
    for (std::size_t u = g; u-- > 0;) {
      acc += pm[u];
      ge[u] = std::min(acc, 1.0);
      if (pm[u] > 0.0) first = u;
    }
    for (std::size_t u = 0; u <= first && u < g; ++u) ge[u] = 1.0;  // no rounding below the support
  };

  std::vector<double> pm(g), ge(g);
  // survive[u] starts as prod_{k=1}^n P(X_k >= grid[u]); factors are divided out as steps pass
  std::vector<ScaledProduct> survive(g);
  for (Index j = 1; j <= n; ++j) {
    place(laws[static_cast<std::size_t>(j - 1)], pm, ge);
    for (std::size_t u = 0; u < g; ++u) survive[u].multiply(ge[u]);
  }

  std::vector<double> mass(g + 1, 0.0), next(g + 1, 0.0), stop_gain(g), prefix(g + 1);
  mass[sentinel] = 1.0;
  CompensatedSum jump, drift;

  for (Index j = 1; j <= n; ++j) {
    place(laws[static_cast<std::size_t>(j - 1)], pm, ge);
    for (std::size_t u = 0; u < g; ++u) survive[u].divide(ge[u]);  // now prod_{k>j}
    const double thr = j == n ? kInf : policy.at_step(static_cast<std::size_t>(j));

    // stop_gain[u] = P(X_j = grid[u]) * s(j, grid[u]); prefix[u] = sum below u
    prefix[0] = 0.0;
    for (std::size_t u = 0; u < g; ++u) {
      stop_gain[u] = pm[u] > 0.0 ? pm[u] * survive[u].value() : 0.0;
      prefix[u + 1] = prefix[u] + stop_gain[u];
    }
    // first grid index above the threshold
    const auto above = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), thr) - grid.begin());

    std::fill(next.begin(), next.end(), 0.0);
    // Running minimum above the threshold (or still M_0): records below the
    // threshold stop and count as jumps; others move the minimum.
    double outside = mass[sentinel];
    for (std::size_t m = above; m < g; ++m) outside += mass[m];
    jump.add(outside * prefix[above]);
    double higher = mass[sentinel];  // sum of mass over m > grid[u]
    for (std::size_t u = g; u-- > above;) {
      next[u] += pm[u] * higher + mass[u] * ge[u];
      higher += mass[u];
    }
    // Running minimum already inside the region: the next record stops.
    const bool weak = semantics == RecordSemantics::Weak || j == n;
    for (std::size_t m = 0; m < above && m < g; ++m) {
      if (mass[m] == 0.0) continue;
      const double gain = weak ? prefix[m + 1] : prefix[m];
      drift.add(mass[m] * gain);
      const double stay = weak ? ge[m] - pm[m] : ge[m];
      next[m] += mass[m] * std::max(stay, 0.0);
    }
    std::swap(mass, next);
  }
  return Decomposition::from_parts(jump.value(), drift.value());
}

}  // namespace stoprule::dp
