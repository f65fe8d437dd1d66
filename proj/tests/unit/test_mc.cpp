#include <doctest.h>

#include <cmath>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/mc.hpp"

using namespace stoprule;

namespace {

bool same(const mc::SimResult& a, const mc::SimResult& b) {
  return a.successes == b.successes && a.ties == b.ties && a.success_rate == b.success_rate &&
         a.mean_stop_fraction == b.mean_stop_fraction && a.stop_fraction_std_error == b.stop_fraction_std_error;
}

}  // namespace

TEST_CASE("generator is keyed by seed and stream") {
  mc::CounterRng a(5, 9), b(5, 9), c(5, 10), d(6, 9);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  mc::CounterRng u(1, 1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    REQUIRE((v >= 0.0 && v < 1.0));
    sum += v;
  }
  CHECK(std::fabs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("results do not depend on the thread count") {
  mc::SimConfig cfg{ObservationModel::rectangular(30, 10), std::nullopt, 20011, 42};
  cfg.threads = 1;
  const auto one = mc::simulate(cfg);
  for (unsigned t : {2u, 3u, 8u}) {
    cfg.threads = t;
    CHECK(same(one, mc::simulate(cfg)));
  }
  cfg.threads = 1;
  CHECK(same(one, mc::simulate(cfg)));
  cfg.seed = 43;
  CHECK_FALSE(same(one, mc::simulate(cfg)));
}

TEST_CASE("samples respect the model supports") {
  std::vector<double> xs;
  for (Index r = 0; r < 200; ++r) {
    mc::sample_observations(ObservationModel::triangular(9), 3, r, xs);
    for (std::size_t j = 0; j < xs.size(); ++j) CHECK((xs[j] >= static_cast<double>(j + 1) && xs[j] <= 9.0));
    mc::sample_observations(ObservationModel::bernoulli_pyramid(6, 0.4), 3, r, xs);
    CHECK(xs[0] == 1.0);
    for (std::size_t j = 1; j < xs.size(); ++j) {
      const double jj = static_cast<double>(j + 1);
      CHECK((xs[j] == jj || xs[j] == 1.0 / jj));
    }
  }
}

TEST_CASE("stopping index") {
  const std::vector<double> xs = {5, 3, 3, 1};
  ThresholdPolicy policy({2, 3, 3, kInf});
  CHECK(mc::stopping_index(xs, policy, dp::RecordSemantics::Weak) == 2);
  ThresholdPolicy late({0, 0, 3, kInf});
  CHECK(mc::stopping_index(xs, late, dp::RecordSemantics::Weak) == 3);
  CHECK(mc::stopping_index(xs, late, dp::RecordSemantics::Strict) == 4);
}

TEST_CASE("simulation matches exact values") {
  auto check = [](const ObservationModel& model, double exact) {
    auto r = mc::simulate({model, std::nullopt, 200000, 17});
    CAPTURE(model.describe());
    CHECK(std::fabs(r.success_rate - exact) < 4.0 * r.std_error);
  };
  check(ObservationModel::triangular(25), dp::solve(ObservationModel::triangular(25)).decomposition.total);
  check(ObservationModel::rectangular(12, 5), dp::solve(ObservationModel::rectangular(12, 5)).decomposition.total);
  check(ObservationModel::bernoulli_pyramid(10, 0.1), std::pow(0.9, 9));
  check(ObservationModel::iid_uniform01(8), fullinfo::sakaguchi_value(8));
}

TEST_CASE("mean stop fraction equals the full-information value") {
  auto r = mc::simulate({ObservationModel::iid_uniform01(10), std::nullopt, 200000, 23});
  CHECK(std::fabs(r.mean_stop_fraction - fullinfo::sakaguchi_value(10)) < 4.0 * r.stop_fraction_std_error);
}

TEST_CASE("strict records on tied samples") {
  auto model = ObservationModel::rectangular(15, 4);
  auto policy = dp::solve(model).policy;
  const Index reps = 100000;
  auto weak = mc::simulate({model, policy, reps, 31, dp::RecordSemantics::Weak});
  auto strict = mc::simulate({model, policy, reps, 31, dp::RecordSemantics::Strict});
  // same samples: the paired difference has small variance
  CHECK(strict.success_rate <= weak.success_rate + 4.0 * weak.std_error);
  const double exact = dp::policy_value(model, policy, dp::RecordSemantics::Strict).total;
  CHECK(std::fabs(strict.success_rate - exact) < 4.0 * strict.std_error);
}

TEST_CASE("scaling checks") {
  auto s = mc::scaling_check(ObservationModel::triangular(2000), 20000, 5);
  CHECK(s.passed);
  CHECK(s.exact_vs_limit < 0.02);
  CHECK(s.empirical_vs_exact < 0.02);
  CHECK(mc::scaling_check(ObservationModel::trend_power(2000, 1.0), 20000, 5).passed);
  CHECK(mc::scaling_check(ObservationModel::trend_scaled(2000, 0.5), 20000, 5).passed);
  auto tiny = mc::scaling_check(ObservationModel::triangular(1), 10, 5);
  CHECK(tiny.skipped);
  CHECK_FALSE(tiny.note.empty());
  CHECK_THROWS_AS(mc::scaling_check(ObservationModel::rectangular(10), 10, 5), UnsupportedModel);
  // theta = 1 limit is the Weibull with shape 2 and scale sqrt 2
  const double x = 1.3;
  CHECK(mc::scaling_limit_cdf(ObservationModel::trend_power(10, 1.0), x) ==
        doctest::Approx(1.0 - std::exp(-std::pow(x / std::sqrt(2.0), 2.0))));
}

TEST_CASE("sandwich bound") {
  auto b = mc::bounds_check(10, 10, 50000, 3);
  CHECK(b.exact_holds);
  CHECK(b.simulated_holds);
  auto wide = mc::bounds_check(10, 1000000, 0, 3);
  CHECK(wide.exact_holds);
  CHECK(std::fabs(wide.exact - fullinfo::sakaguchi_value(10)) < 1e-3);
  CHECK(dp::solve(ObservationModel::rectangular(1000), {.keep_tables = false}).decomposition.total > 0.580164);
}

TEST_CASE("tie-break uniformity") {
  auto t = mc::tie_break_check(ObservationModel::rectangular(10, 4), 10000, 8);
  CHECK(t.samples == 100000);
  CHECK(t.violations == 0);
  CHECK(t.passed);
  CHECK_THROWS_AS(mc::tie_break_check(ObservationModel::triangular(5), 10, 1), UnsupportedModel);
}

TEST_CASE("seed battery") {
  // a handful of seeds; all should land inside 4 standard errors
  auto model = ObservationModel::triangular(20);
  const double exact = dp::solve(model).decomposition.total;
  for (std::uint64_t seed : {1u, 2u, 3u, 1000u, 123456789u}) {
    auto r = mc::simulate({model, std::nullopt, 50000, seed});
    CAPTURE(seed);
    CHECK(std::fabs(r.success_rate - exact) < 4.0 * r.std_error);
  }
}

TEST_CASE("simulation errors") {
  CHECK_THROWS_AS(mc::simulate({ObservationModel::triangular(5), std::nullopt, 0, 1}), DomainError);
  CHECK_THROWS_AS(mc::simulate({ObservationModel::triangular(5), ThresholdPolicy({1, 2}), 10, 1}), InvalidPolicy);
  CHECK_THROWS_AS(mc::simulate({ObservationModel::trend_shifted(5), std::nullopt, 10, 1}), UnsupportedModel);
}
