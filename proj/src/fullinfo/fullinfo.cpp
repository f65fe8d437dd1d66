#include "stoprule/fullinfo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stoprule/errors.hpp"
#include "stoprule/root.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::fullinfo {

namespace {

void require_gm_thresholds(std::span<const double> b) {
  if (b.empty()) throw InvalidPolicy("gm_success: empty threshold sequence");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] >= 0.0 && b[i] <= 1.0)) throw InvalidPolicy("gm_success: thresholds must lie in [0,1]");
    if (i > 0 && b[i] < b[i - 1]) throw InvalidPolicy("gm_success: thresholds must be nondecreasing");
  }
}

// q^k for k = 0..n
std::vector<double> powers(double q, Index n) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  for (Index k = 1; k <= n; ++k) p[k] = p[k - 1] * q;
  return p;
}

}  // namespace

double gm_threshold_residual(Index m, double x) {
  // d_i = (1-x)^{-i} - 1 via d_i = y d_{i-1} + (y - 1), y = 1/(1-x)
  const double y = 1.0 / (1.0 - x);
  const double y1 = x / (1.0 - x);
  double d = 0.0;
  CompensatedSum sum;
  for (Index i = 1; i <= m; ++i) {
    d = y * d + y1;
    sum.add(d / static_cast<double>(i));
  }
  sum.add(-1.0);
  return sum.value();
}

GmThresholds gm_optimal_thresholds(Index n) {
  if (n < 1) throw DomainError("gm_optimal_thresholds needs n >= 1");
  GmThresholds out{n, std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  double upper = 1.0 - 1e-15;
  for (Index j = n - 1; j >= 1; --j) {
    const Index m = n - j;
    auto rep = find_root([m](double x) { return gm_threshold_residual(m, x); }, 0.0, upper);
    out.b[static_cast<std::size_t>(j - 1)] = rep.root;
    upper = rep.root;
  }
  return out;
}

Decomposition gm_success(std::span<const double> b) {
  require_gm_thresholds(b);
  const auto n = static_cast<Index>(b.size());
  const double dn = static_cast<double>(n);
  CompensatedSum jump, drift;
  std::vector<double> qj = powers(1.0 - b[0], n), qnext;
  for (Index j = 1; j <= n; ++j) {
    jump.add((qj[j - 1] - qj[n]) / static_cast<double>(n - j + 1));
    if (j < n) {
      qnext = powers(1.0 - b[static_cast<std::size_t>(j)], n);
      CompensatedSum inner;
      const double tail = (qj[n] - qnext[n]) / dn;
      for (Index k = j; k <= n - 1; ++k) {
        const double nk = static_cast<double>(n - k);
        inner.add((qj[k] - qnext[k]) / (static_cast<double>(k) * nk) - tail / nk);
      }
      drift.add(static_cast<double>(j) * inner.value());
      std::swap(qj, qnext);
    }
  }
  return Decomposition::from_parts(jump.value(), drift.value());
}

double gm_success_closed_form(std::span<const double> b) {
  require_gm_thresholds(b);
  const auto n = static_cast<Index>(b.size());
  const double dn = static_cast<double>(n);
  CompensatedSum first, second;
  std::vector<std::vector<double>> q;
  q.reserve(b.size());
  for (double bi : b) q.push_back(powers(1.0 - bi, n));
  first.add(1.0);
  for (Index i = 1; i <= n; ++i) first.add(-q[i - 1][n]);
  for (Index j = 1; j <= n - 1; ++j) {
    const double nj = static_cast<double>(n - j);
    for (Index i = 1; i <= j; ++i) {
      second.add(q[i - 1][j] / (static_cast<double>(j) * nj) - q[i - 1][n] / (dn * nj));
    }
  }
  return first.value() / dn + second.value();
}

double sakaguchi_value(Index n) {
  if (n < 1) throw DomainError("sakaguchi_value needs n >= 1");
  const auto th = gm_optimal_thresholds(n);
  CompensatedSum sum;
  sum.add(1.0);
  for (Index j = 1; j <= n - 1; ++j) {
    const double q = 1.0 - th.b[static_cast<std::size_t>(j - 1)];
    double qk = std::pow(q, static_cast<double>(j));
    for (Index k = j; k <= n - 1; ++k) {
      sum.add(qk / static_cast<double>(k));
      qk *= q;
    }
  }
  return sum.value() / static_cast<double>(n);
}

double tie_probability(const ObservationModel& model) {
  switch (model.kind()) {
    case ModelKind::IidUniform01: return 0.0;
    case ModelKind::RectangularDiscrete: {
      const Index K = model.support_size();
      const auto n = static_cast<double>(model.n());
      const double dk = static_cast<double>(K);
      // 1 - n sum_x P(X = x) (1 - F(x))^{n-1}
      CompensatedSum unique;
      for (Index x = 1; x <= K; ++x) unique.add(std::pow(static_cast<double>(K - x) / dk, n - 1.0) / dk);
      return std::clamp(1.0 - n * unique.value(), 0.0, 1.0);
    }
    default:
      throw UnsupportedModel("tie_probability needs an iid model, got " + model.describe());
  }
}

Cdf uniform01_cdf() {
  auto f = [](double x) { return std::clamp(x, 0.0, 1.0); };
  return {f, f};
}

Cdf uniform_int_cdf(Index K) {
  if (K < 1) throw DomainError("uniform_int_cdf needs K >= 1");
  const double dk = static_cast<double>(K);
  auto count = [dk](double c) { return std::clamp(c, 0.0, dk) / dk; };
  return {[count](double x) { return count(std::floor(x)); }, [count](double x) { return count(std::ceil(x) - 1.0); }};
}

std::vector<double> tie_break_transform(std::span<const double> values, std::span<const double> uniforms,
                                        const Cdf& cdf) {
  if (values.size() != uniforms.size()) throw DomainError("tie_break_transform: length mismatch");
  std::vector<double> y(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = uniforms[i];
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("tie_break_transform: uniforms must lie in [0,1]");
    const double hi = cdf.at(values[i]);
    y[i] = hi - (hi - cdf.left(values[i])) * u;
  }
  return y;
}

}  // namespace stoprule::fullinfo
