#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "stoprule/errors.hpp"
#include "stoprule/poisson.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::poisson {

namespace {

// Rounding in the k-term residual grows roughly linearly with k; 1e-12 is
// reachable up to a few thousand terms.
double ladder_ftol(Index k) { return std::max(1e-12, 5e-16 * static_cast<double>(k)); }

// sum_{j=1}^k (z^j - w^j)/j
double power_gap_sum(Index k, double z, double w) {
  double zj = 1.0, wj = 1.0;
  CompensatedSum s;
  for (Index j = 1; j <= k; ++j) {
    zj *= z;
    wj *= w;
    s.add((zj - wj) / static_cast<double>(j));
  }
  return s.value();
}

double truncation_bound(double lambda, Index k_max) {
  // term k bounds both series: jump <= h_k + sqrt 3, drift <= e^lambda
  double h = 0.0;
  for (Index k = 1; k <= k_max; ++k) h += 1.0 / static_cast<double>(k);
  const double cap = std::sqrt(3.0) + std::exp(lambda);
  CompensatedSum tail;
  for (Index k = k_max + 1;; ++k) {
    h += 1.0 / static_cast<double>(k);
    const double term = std::exp(-lambda * static_cast<double>(k)) * (h + cap);
    tail.add(term);
    if (term < 1e-30 || term < 1e-20 * tail.value()) break;
  }
  return tail.value();
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be > 0");
}

}  // namespace

double ladder_residual(Index k, double z) {
  // (z^j - 1) = z (z^{j-1} - 1) + (z - 1)
  const double z1 = z - 1.0;
  double e = z1;
  CompensatedSum s;
  for (Index j = 2; j <= k; ++j) {
    e = z * e + z1;
    s.add(e / static_cast<double>(j));
  }
  s.add(-1.0);
  return s.value();
}

std::vector<double> compute_unclamped_roots(Index k_max) {
  std::vector<double> roots;
  if (k_max < 2) return roots;
  roots.reserve(static_cast<std::size_t>(k_max - 1));
  double upper = std::exp(1.0);
  for (Index k = 2; k <= k_max; ++k) {
    RootOptions opt;
    opt.ftol = ladder_ftol(k);
    const auto rep = find_root([k](double z) { return ladder_residual(k, z); }, 1.0, upper, opt);
    roots.push_back(rep.root);
    upper = rep.root;
  }
  return roots;
}

BoundaryLadder rect_roots(Index k_max, double lambda) {
  require_lambda(lambda);
  return rect_roots(k_max, lambda, compute_unclamped_roots(k_max));
}

BoundaryLadder rect_roots(Index k_max, double lambda, std::span<const double> unclamped) {
  require_lambda(lambda);
  if (k_max < 1) throw DomainError("rect_roots needs k_max >= 1");
  std::vector<double> owned;
  if (static_cast<Index>(unclamped.size()) < k_max - 1) {
    owned = compute_unclamped_roots(k_max);
    unclamped = owned;
  }
  BoundaryLadder ladder;
  ladder.lambda = lambda;
  const double top = std::exp(lambda);
  ladder.z.push_back(top);
  ladder.t.push_back(0.0);
  ladder.clamped.push_back(false);
  for (Index k = 2; k <= k_max; ++k) {
    const double r = unclamped[static_cast<std::size_t>(k - 2)];
    if (r < top) {
      ladder.z.push_back(r);
      ladder.t.push_back(std::clamp(1.0 - std::log(r) / lambda, 0.0, 1.0));
      ladder.clamped.push_back(false);
    } else {
      ladder.z.push_back(top);
      ladder.t.push_back(0.0);
      ladder.clamped.push_back(true);
    }
  }
  return ladder;
}

Index rect_limit_terms(double lambda) {
  require_lambda(lambda);
  const double lead = std::expm1(lambda);
  auto small = [&](Index k) { return std::exp(-lambda * static_cast<double>(k)) * lead < 1e-13; };
  auto k = static_cast<Index>(std::max(1.0, std::floor(std::log(lead / 1e-13) / lambda) - 1.0));
  while (small(k - 1) && k > 1) --k;
  while (!small(k)) ++k;
  return k;
}

LimitResult rect_limit(double lambda, Index k_max) { return rect_limit(lambda, k_max, {}); }

LimitResult rect_limit(double lambda, Index k_max, std::span<const double> unclamped) {
  require_lambda(lambda);
  const Index needed = rect_limit_terms(lambda);
  if (k_max == 0) k_max = needed;
  if (k_max < needed) {
    throw PrecisionError("rect_limit: k_max = " + std::to_string(k_max) + " too small for lambda = " +
                             std::to_string(lambda) + ", need " + std::to_string(needed),
                         needed);
  }
  const auto ladder = rect_roots(k_max + 1, lambda, unclamped);
  const auto& z = ladder.z;
  auto zk = [&](Index k) { return z[static_cast<std::size_t>(k - 1)]; };
  const double top = std::exp(lambda);

  CompensatedSum jump, drift;
  if (lambda == 1.0) {
    jump.add(std::exp(-1.0) * (zk(1) - zk(2)));
    for (Index k = 2; k <= k_max; ++k) {
      const double w = zk(k + 1);
      jump.add(std::exp(-static_cast<double>(k)) *
               (zk(k) - w + std::expm1(static_cast<double>(k + 1) * std::log(w)) / static_cast<double>(k + 1)));
    }
  } else {
    for (Index k = 1; k <= k_max; ++k) {
      jump.add(std::exp(-lambda * static_cast<double>(k)) * power_gap_sum(k, zk(k), zk(k + 1)));
    }
  }
  for (Index k = 2; k <= k_max; ++k) drift.add(std::exp(-lambda * static_cast<double>(k)) * (top - zk(k)));

  LimitResult out;
  out.value = Decomposition::from_parts(jump.value(), drift.value());
  out.truncation_error = truncation_bound(lambda, k_max);
  out.terms = k_max;
  return out;
}

double rect_limit_jump_double_sum(Index k_max) {
  const auto ladder = rect_roots(k_max + 1, 1.0);
  CompensatedSum jump;
  for (Index k = 1; k <= k_max; ++k) {
    jump.add(std::exp(-static_cast<double>(k)) *
             power_gap_sum(k, ladder.z[static_cast<std::size_t>(k - 1)], ladder.z[static_cast<std::size_t>(k)]));
  }
  return jump.value();
}

double rect_limit_total_closed_form(Index k_max) {
  const auto ladder = rect_roots(k_max + 1, 1.0);
  const double e = std::exp(1.0);
  CompensatedSum total;
  total.add(2.0 - e);
  total.add(1.0 / (e - 1.0));
  total.add((1.0 - 2.0 * std::sqrt(3.0)) / (2.0 * e));
  total.add(e * std::log(e - 1.0));
  for (Index k = 2; k <= k_max; ++k) {
    const double w = ladder.z[static_cast<std::size_t>(k)];
    total.add(-std::exp(-static_cast<double>(k)) *
              (w - std::pow(w, static_cast<double>(k + 1)) / static_cast<double>(k + 1)));
  }
  return total.value();
}

Decomposition rect_general_boundary(std::span<const double> t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0 && t[i] <= 1.0)) throw InvalidPolicy("rect_general_boundary: cutoffs must lie in [0,1]");
    if (i > 0 && t[i] < t[i - 1]) throw InvalidPolicy("rect_general_boundary: cutoffs must be nondecreasing");
  }
  const auto m = static_cast<Index>(t.size());
  auto zk = [&](Index k) { return k <= m ? std::exp(1.0 - t[static_cast<std::size_t>(k - 1)]) : 1.0; };
  CompensatedSum jump, drift;
  for (Index k = 1; k <= m; ++k) {
    const double w = std::exp(-static_cast<double>(k));
    jump.add(w * power_gap_sum(k, zk(k), zk(k + 1)));
    // k = 1 contributes only when t_1 > 0
    drift.add(w * std::expm1(t[static_cast<std::size_t>(k - 1)]) * power_gap_sum(k, zk(k), 1.0));
  }
  return Decomposition::from_parts(jump.value(), drift.value());
}

BestCutoff best_t2() {
  auto negative = [](double t2) {
    const double t[] = {0.0, t2};
    return -rect_general_boundary(t).total;
  };
  const auto [t2, value] = boost::math::tools::brent_find_minima(negative, 0.0, 1.0, 52);
  return {t2, -value};
}

}  // namespace stoprule::poisson
