#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stoprule/decomposition.hpp"
#include "stoprule/model.hpp"

// Full-information game: X_1..X_n iid uniform on [0,1], thresholds on the
// probability scale with b_n = 1.
namespace stoprule::fullinfo {

struct GmThresholds {
  Index n = 0;
  std::vector<double> b;
};

// b_j solves sum_{i=1}^{n-j} ((1-x)^{-i} - 1)/i = 1 for j < n; b_n = 1.
GmThresholds gm_optimal_thresholds(Index n);

// Left side of the threshold equation minus 1, with m = n - j terms.
double gm_threshold_residual(Index m, double x);

// Success probability of the threshold rule b (n = b.size()), summed step by
// step: jump holds the terms (q_j^{j-1} - q_j^n)/(n-j+1), drift the rest,
// where q = 1 - b. Throws InvalidPolicy unless 0 <= b_1 <= ... <= b_n <= 1.
Decomposition gm_success(std::span<const double> b);

// The same probability from the two-sum closed form.
double gm_success_closed_form(std::span<const double> b);

// (1/n)(1 + sum_{j<n} sum_{k=j}^{n-1} (1-b_j)^k / k) at the optimal thresholds.
double sakaguchi_value(Index n);

// P(the minimum of X_1..X_n is attained more than once). Zero for the
// continuous model; UnsupportedModel for non-iid models.
double tie_probability(const ObservationModel& model);

struct Cdf {
  std::function<double(double)> at;    // F(x)
  std::function<double(double)> left;  // F(x-)
};

Cdf uniform01_cdf();
// Uniform on {1, ..., K}.
Cdf uniform_int_cdf(Index K);

// Y_j = F(X_j) - (F(X_j) - F(X_j-)) U_j. Ties in X are broken at random while
// the order of distinct values is kept.
std::vector<double> tie_break_transform(std::span<const double> values, std::span<const double> uniforms,
                                        const Cdf& cdf);

}  // namespace stoprule::fullinfo
