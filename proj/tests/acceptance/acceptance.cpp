// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance          run all criteria
//   acceptance 5 7      run the listed criteria
// Exit status is 1 if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "stoprule/dp.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/mc.hpp"
#include "stoprule/poisson.hpp"

using namespace stoprule;
namespace ps = stoprule::poisson;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool near(double x, double target, double tol) { return std::fabs(x - target) < tol; }

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<void(Outcome&)> body;
};

// 1e-5 against the printed six digits
void constants(Outcome& o) {
  constexpr double tol = 1e-5;
  const double br = ps::beta_star(ps::Geometry::Rect).root;
  const double bt = ps::beta_star(ps::Geometry::Tri).root;
  const double sam = ps::samuels_value();
  const double tri = ps::success_prob_boundary(ps::Geometry::Tri, bt);
  const double rect = ps::rect_limit(1.0).value.total;
  o.require(near(br, 0.804352, tol), fmt("beta_rect=%.8f", br));
  o.require(near(bt, 0.760660, tol), fmt("beta_tri=%.8f", bt));
  o.require(near(sam, 0.580164, tol), fmt("samuels=%.8f", sam));
  o.require(near(tri, 0.703128, tol), fmt("tri_limit=%.8f", tri));
  o.require(near(rect, 0.761260, tol), fmt("rect_limit(1)=%.8f", rect));
  if (o.ok) {
    o.note(fmt("beta_rect=%.8f beta_tri=%.8f", br, bt) + fmt(" samuels=%.8f tri=%.8f", sam, tri) +
           fmt(" rect_limit(1)=%.8f", rect));
  }
}

void root_ladder(Outcome& o) {
  const auto ladder = ps::rect_roots(20, 1.0);
  const std::vector<std::pair<int, double>> printed = {{2, std::sqrt(3.0)}, {3, 1.381554},  {4, 1.258476},
                                                       {5, 1.195517},       {10, 1.088218}, {15, 1.056969},
                                                       {20, 1.042069}};
  double worst = 0.0;
  for (auto [k, z] : printed) {
    const double got = ladder.z[static_cast<std::size_t>(k - 1)];
    worst = std::max(worst, std::fabs(got - z));
    o.require(near(got, z, 1e-5), fmt("z_%.0f=%.8f", k, got));
  }
  o.note(fmt("max |z_k - printed| = %.2e", worst));
}

void general_boundary(Outcome& o) {
  const auto best = ps::best_t2();
  o.require(near(best.value, 0.730694, 1e-4), fmt("value=%.8f", best.value));
  o.require(near(best.t2, 0.450694, 1e-4), fmt("t2=%.8f", best.t2));
  o.note(fmt("max %.8f at t2=%.8f", best.value, best.t2));
}

void theta_family(Outcome& o) {
  const double th = ps::theta_limit(0.5);
  const double opt = ps::opt_value();
  const double bnd = ps::success_prob_boundary(ps::Geometry::Tri, ps::beta_star(ps::Geometry::Tri).root);
  const double one = ps::theta_limit(1.0);
  const double sam = ps::samuels_value();
  const double spread = std::max({std::fabs(th - opt), std::fabs(th - bnd), std::fabs(opt - bnd)});
  o.require(spread < 1e-8, fmt("theta(1/2) vs erf form vs boundary: spread %.2e", spread));
  o.require(near(one, sam, 1e-6), fmt("theta(1)-samuels=%.2e", one - sam));
  if (o.ok) o.note(fmt("spread %.2e, |theta(1)-samuels| = %.2e", spread, std::fabs(one - sam)));
}

void dp_convergence(Outcome& o) {
  auto sweep = [&](const char* label, bool tri, Index hi, double lo_bound, double hi_bound) {
    double prev = 2.0;
    bool monotone = true;
    Index broke = 0;
    for (Index n = 100; n <= hi; n += 100) {
      const auto model = tri ? ObservationModel::triangular(n) : ObservationModel::rectangular(n);
      const double v = dp::solve(model, {.max_n = n, .keep_tables = false}).decomposition.total;
      if (!(v < prev) && monotone) {
        monotone = false;
        broke = n;
      }
      prev = v;
    }
    o.require(monotone, std::string(label) + " not decreasing at n=" + std::to_string(broke));
    const bool inside = prev > lo_bound && prev < hi_bound;
    const std::string bracket = fmt(" v_%.0f=%.8f", static_cast<double>(hi), prev) +
                                fmt(inside ? " in (%.6f, %.6f)" : " outside (%.6f, %.6f)", lo_bound, hi_bound);
    o.require(inside, std::string(label) + bracket);
    if (inside) o.note(std::string(label) + bracket);
  };
  sweep("triangular", true, 9000, 0.703128, 0.705128);
  sweep("rectangular", false, 2000, 0.761260, 0.764260);
}

void oracle_equivalence(Outcome& o) {
  std::vector<ObservationModel> models;
  for (Index n = 1; n <= 8; ++n) models.push_back(ObservationModel::triangular(n));
  for (Index n = 1; n <= 6; ++n) models.push_back(ObservationModel::rectangular(n));
  for (Index n = 2; n <= 12; ++n) {
    for (double p : {1.0 / static_cast<double>(n), 0.3, 0.7}) models.push_back(ObservationModel::bernoulli_pyramid(n, p));
  }
  double worst = 0.0;
  Index disagreements = 0;
  for (const auto& m : models) {
    const auto sol = dp::solve(m);
    const double policy_brute = dp::brute_force_value(m, sol.policy);
    const auto history = dp::brute_force_optimal(m, &sol.policy);
    const double err = std::max(std::fabs(policy_brute - sol.decomposition.total),
                                std::fabs(history.value - sol.decomposition.total));
    worst = std::max(worst, err);
    disagreements += history.disagreements;
    o.require(err <= 1e-12, m.describe() + fmt(" error %.2e", err));
    o.require(history.disagreements == 0, m.describe() + " history oracle disagrees with (j, M_j) decisions");
  }
  o.note(std::to_string(models.size()) + " models" + fmt(", max error %.2e", worst) +
         ", decision disagreements " + std::to_string(disagreements));
}

void closed_forms(Outcome& o) {
  double worst = 0.0;
  for (Index n = 1; n <= 500; ++n) {
    const auto t = fullinfo::gm_optimal_thresholds(n);
    const double err = std::fabs(fullinfo::gm_success(t.b).total - fullinfo::sakaguchi_value(n));
    worst = std::max(worst, err);
    o.require(err <= 1e-10, "gm_success vs sakaguchi at n=" + std::to_string(n) + fmt(": %.2e", err));
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0), zeros(static_cast<std::size_t>(n), 0.0);
    const double one = fullinfo::gm_success(ones).total;
    const double zero = fullinfo::gm_success(zeros).total;
    o.require(near(one, 1.0 / static_cast<double>(n), 1e-12), "all b=1 at n=" + std::to_string(n));
    o.require(std::fabs(zero) <= 1e-12, "all b=0 at n=" + std::to_string(n));
  }
  o.note(fmt("max |gm_success - sakaguchi| = %.2e over n <= 500", worst));
}

void sandwich(Outcome& o) {
  constexpr double slack = 1e-12;
  double min_v = 1.0, min_gap_low = 1.0, min_gap_high = 1.0;
  for (Index n = 2; n <= 400; ++n) {
    const auto model = ObservationModel::rectangular(n);
    const double v = dp::solve(model, {.keep_tables = false}).decomposition.total;
    const double vbar = fullinfo::sakaguchi_value(n);
    const double delta = fullinfo::tie_probability(model);
    o.require(vbar - slack <= v && v <= vbar + delta + slack, "bound at n=" + std::to_string(n));
    o.require(v > 0.580164, "v_n > 0.580164 at n=" + std::to_string(n));
    min_v = std::min(min_v, v);
    min_gap_low = std::min(min_gap_low, v - vbar);
    min_gap_high = std::min(min_gap_high, vbar + delta - v);
  }
  o.note(fmt("min v_n - vbar_n = %.3e, min vbar_n + delta_n - v_n = %.3e", min_gap_low, min_gap_high) +
         fmt(", min v_n = %.6f", min_v));
}

void worst_case(Outcome& o) {
  double worst = 0.0;
  for (Index n = 2; n <= 100; ++n) {
    const double p = 1.0 / static_cast<double>(n);
    const double v = dp::solve(ObservationModel::bernoulli_pyramid(n, p)).decomposition.total;
    const double exact = std::pow(1.0 - p, static_cast<double>(n - 1));
    const double rel = std::fabs(v - exact) / exact;
    worst = std::max(worst, rel);
    o.require(rel <= 1e-14, "n=" + std::to_string(n) + fmt(" rel error %.2e", rel));
  }
  o.note(fmt("max relative error %.2e", worst));
}

void monte_carlo(Outcome& o) {
  constexpr Index reps = 1000000;
  auto one = [&](const ObservationModel& m, double exact, std::uint64_t seed) {
    const auto r = mc::simulate({m, std::nullopt, reps, seed});
    const double z = (r.success_rate - exact) / r.std_error;
    o.require(std::fabs(z) < 4.0, m.describe() + fmt(" z=%.2f", z));
    o.note(m.describe() + fmt(" sim %.5f exact %.5f", r.success_rate, exact) + fmt(" (z=%.2f)", z));
    return r;
  };
  one(ObservationModel::triangular(50), dp::solve(ObservationModel::triangular(50)).decomposition.total, 101);
  one(ObservationModel::rectangular(50), dp::solve(ObservationModel::rectangular(50)).decomposition.total, 102);
  const double vbar = fullinfo::sakaguchi_value(20);
  const auto r = one(ObservationModel::iid_uniform01(20), vbar, 103);
  const double z = (r.mean_stop_fraction - vbar) / r.stop_fraction_std_error;
  o.require(std::fabs(z) < 4.0, fmt("E[tau/n]=%.5f z=%.2f", r.mean_stop_fraction, z));
  o.note(fmt("E[tau/n] %.5f (z=%.2f)", r.mean_stop_fraction, z));
}

void lambda_sweep(Outcome& o) {
  const auto unclamped = ps::compute_unclamped_roots(ps::rect_limit_terms(0.003));
  double prev = -1.0;
  Index drops = 0;
  for (int i = 1; i <= 100; ++i) {
    const double v = ps::rect_limit(0.01 * i, 0, unclamped).value.total;
    if (v < prev) ++drops;
    prev = v;
  }
  const double small = ps::rect_limit(0.003, 0, unclamped).value.total;
  o.require(drops == 0, std::to_string(drops) + " decreases on the lambda grid");
  o.require(near(prev, 0.761260, 1e-5), fmt("value(1)=%.8f", prev));
  o.require(near(small, 0.580164, 5e-3), fmt("value(0.003)=%.8f", small));
  o.note(fmt("value(0.01..1) nondecreasing, value(1)=%.8f, value(0.003)=%.6f", prev, small));
}

void scaling(Outcome& o) {
  for (const auto& m : {ObservationModel::triangular(10000), ObservationModel::trend_power(10000, 1.0)}) {
    const auto r = mc::scaling_check(m, 100000, 7);
    o.require(r.statistic < 0.02, m.describe() + fmt(" sup-distance %.4f", r.statistic));
    o.note(m.describe() + fmt(" sup-distance %.4f", r.statistic));
  }
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "constants", 1.0, constants},
      {2, "root ladder", 0.1, root_ladder},
      {3, "general boundary", 1.0, general_boundary},
      {4, "theta-family consistency", 1.0, theta_family},
      {5, "DP convergence", 120.0, dp_convergence},
      {6, "oracle equivalence", 30.0, oracle_equivalence},
      {7, "closed-form cross checks", 10.0, closed_forms},
      {8, "sandwich bound", 30.0, sandwich},
      {9, "worst case", 1.0, worst_case},
      {10, "Monte Carlo agreement", 120.0, monte_carlo},
      {11, "lambda-sweep shape", 60.0, lambda_sweep},
      {12, "statistical scaling checks", 120.0, scaling},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  bool all_ok = true;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.time_limit_s, fmt("runtime %.2f s over the %.1f s budget", secs, c.time_limit_s));
    all_ok = all_ok && o.ok;
    std::printf("%s  criterion %2d  %-27s %7.2f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
