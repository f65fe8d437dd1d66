#include <algorithm>
#include <cmath>
#include <limits>

#include "stoprule/errors.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/mc.hpp"
#include "parallel.hpp"

namespace stoprule::mc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double scaling_scale(const ObservationModel& model) {
  const auto n = static_cast<double>(model.n());
  switch (model.kind()) {
    case ModelKind::TriangularDiscrete:
    case ModelKind::TrendUniformShifted:
      return std::sqrt(n);
    case ModelKind::TrendUniformScaled:
      return std::sqrt(model.rho() * n);
    case ModelKind::TrendPowerUniform:
      return std::pow(n, model.theta() / (model.theta() + 1.0));
    default:
      throw UnsupportedModel("scaling_check needs a trend model, got " + model.describe());
  }
}

// Sample minimum of one replication. Every trend model has X_j >= j, so the
// scan stops once j passes the running minimum.
double sample_minimum(const ObservationModel& model, std::uint64_t seed, Index rep) {
  const Index n = model.n();
  const auto dn = static_cast<double>(n);
  CounterRng rng(seed, static_cast<std::uint64_t>(rep));
  double low = kInf;
  for (Index j = 1; j <= n; ++j) {
    const auto dj = static_cast<double>(j);
    if (dj > low) break;
    const double u = rng.uniform();
    double x = 0.0;
    switch (model.kind()) {
      case ModelKind::TriangularDiscrete: x = dj + std::floor(u * static_cast<double>(n - j + 1)); break;
      case ModelKind::TrendUniformShifted: x = dj + std::floor(u * dn); break;
      case ModelKind::TrendUniformScaled: x = dj + model.rho() * dn * u; break;
      case ModelKind::TrendPowerUniform: x = dj + dn * std::pow(u, 1.0 / model.theta()); break;
      default: break;
    }
    low = std::min(low, x);
  }
  return low;
}

// sup_x |F_N(x) - G(x)| for continuous G over sorted samples.
template <class Cdf>
double ks_distance(const std::vector<double>& sorted, Cdf&& cdf) {
  const auto total = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t k = i;
    while (k < sorted.size() && sorted[k] == sorted[i]) ++k;
    const double g = cdf(sorted[i]);
    sup = std::max({sup, std::fabs(g - static_cast<double>(i) / total), std::fabs(g - static_cast<double>(k) / total)});
    i = k;
  }
  return sup;
}

}  // namespace

double scaling_limit_cdf(const ObservationModel& model, double x) {
  if (x <= 0.0) return 0.0;
  if (model.kind() == ModelKind::TrendPowerUniform) {
    const double a = model.theta() + 1.0;
    return -std::expm1(-std::pow(x, a) / a);
  }
  scaling_scale(model);  // rejects unsupported kinds
  return -std::expm1(-0.5 * x * x);
}

ScalingReport scaling_check(const ObservationModel& model, Index reps, std::uint64_t seed, unsigned threads) {
  ScalingReport report;
  report.scale = scaling_scale(model);
  if (model.n() == 1) {
    report.skipped = true;
    report.note = "n = 1 has no asymptotic regime; check skipped";
    report.statistic = report.exact_vs_limit = report.empirical_vs_exact = kNaN;
    return report;
  }
  if (reps < 1) throw DomainError("scaling_check needs at least one replication");
  report.note = "threshold 0.02 is a calibration choice";

  std::vector<double> minima(static_cast<std::size_t>(reps));
  const unsigned t = detail::worker_count(threads, reps);
  detail::parallel_chunks(reps, t, [&](Index begin, Index end, unsigned) {
    for (Index r = begin; r < end; ++r) minima[static_cast<std::size_t>(r)] = sample_minimum(model, seed, r);
  });
  std::sort(minima.begin(), minima.end());

  const double s = report.scale;
  std::vector<double> scaled(minima.size());
  std::transform(minima.begin(), minima.end(), scaled.begin(), [s](double m) { return m / s; });
  report.statistic = ks_distance(scaled, [&](double x) { return scaling_limit_cdf(model, x); });
  report.passed = report.statistic < report.threshold;

  report.exact_vs_limit = report.empirical_vs_exact = kNaN;
  if (model.kind() == ModelKind::TriangularDiscrete) {
    // P(M_n > m) = prod_{j=1}^m (n-m)/(n-j+1)
    const Index n = model.n();
    const auto total = static_cast<double>(minima.size());
    double cum_log = 0.0;  // sum_{j=1}^m log(n-j+1)
    double vs_limit = 0.0, vs_empirical = 0.0;
    std::size_t below = 0;
    for (Index m = 0; m <= n; ++m) {
      if (m > 0) cum_log += std::log(static_cast<double>(n - m + 1));
      const double exact =
          m >= n ? 1.0 : -std::expm1(static_cast<double>(m) * std::log(static_cast<double>(n - m)) - cum_log);
      const double lo = scaling_limit_cdf(model, static_cast<double>(m) / s);
      const double hi = scaling_limit_cdf(model, static_cast<double>(m + 1) / s);
      vs_limit = std::max({vs_limit, std::fabs(exact - lo), std::fabs(exact - hi)});
      while (below < minima.size() && minima[below] <= static_cast<double>(m)) ++below;
      vs_empirical = std::max(vs_empirical, std::fabs(static_cast<double>(below) / total - exact));
      if (exact == 1.0 && below == minima.size() && hi > 1.0 - 1e-17) break;
    }
    report.exact_vs_limit = vs_limit;
    report.empirical_vs_exact = vs_empirical;
  }
  return report;
}

BoundsReport bounds_check(Index n, Index K, Index reps, std::uint64_t seed, unsigned threads) {
  const auto model = ObservationModel::rectangular(n, K);
  BoundsReport r;
  r.n = n;
  r.K = model.support_size();
  r.v_bar = fullinfo::sakaguchi_value(n);
  r.delta = fullinfo::tie_probability(model);
  auto sol = dp::solve(model, {.max_n = n, .keep_tables = false});
  r.exact = sol.decomposition.total;
  constexpr double slack = 1e-12;
  r.exact_holds = r.v_bar - slack <= r.exact && r.exact <= r.v_bar + r.delta + slack;
  if (reps > 0) {
    auto sim = simulate({model, sol.policy, reps, seed, RecordSemantics::Weak, threads});
    r.simulated = sim.success_rate;
    r.std_error = sim.std_error;
    const double band = 4.0 * sim.std_error;
    r.simulated_holds = r.v_bar - band <= r.simulated && r.simulated <= r.v_bar + r.delta + band;
  } else {
    r.simulated = r.std_error = kNaN;
    r.simulated_holds = true;
  }
  return r;
}

TieBreakReport tie_break_check(const ObservationModel& model, Index reps, std::uint64_t seed) {
  if (model.kind() != ModelKind::RectangularDiscrete) {
    throw UnsupportedModel("tie_break_check needs a rectangular model, got " + model.describe());
  }
  if (reps < 1) throw DomainError("tie_break_check needs at least one replication");
  const auto cdf = fullinfo::uniform_int_cdf(model.support_size());
  const auto n = static_cast<std::size_t>(model.n());
  TieBreakReport report;
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(reps) * n);
  std::vector<double> xs, us(n);
  for (Index rep = 0; rep < reps; ++rep) {
    sample_observations(model, seed, rep, xs);
    CounterRng rng(~seed, static_cast<std::uint64_t>(rep));
    for (auto& u : us) u = rng.uniform();
    const auto ys = fullinfo::tie_break_transform(xs, us, cdf);
    const auto pick = static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
    if (xs[pick] != *std::min_element(xs.begin(), xs.end())) ++report.violations;
    all.insert(all.end(), ys.begin(), ys.end());
  }
  std::sort(all.begin(), all.end());
  report.samples = static_cast<Index>(all.size());
  report.ks_statistic = ks_distance(all, [](double y) { return std::clamp(y, 0.0, 1.0); });
  constexpr double alpha = 1e-3;
  report.critical_value = std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(all.size()));
  report.passed = report.violations == 0 && report.ks_statistic < report.critical_value;
  return report;
}

}  // namespace stoprule::mc
