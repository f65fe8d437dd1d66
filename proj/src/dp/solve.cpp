#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::dp {

namespace {

// Above this n the triangular products and the rectangular powers are formed
// in log space; their factors shrink like e^{-cn}.
constexpr Index kLogSpaceCutoff = 2000;

void require_lattice(const ObservationModel& model, const char* what) {
  if (!model.is_lattice()) {
    throw UnsupportedModel(std::string(what) + ": needs a triangular or rectangular model, got " + model.describe());
  }
}

class Lattice {
 public:
  explicit Lattice(const ObservationModel& model)
      : n_(model.n()),
        tri_(model.kind() == ModelKind::TriangularDiscrete),
        top_(tri_ ? model.n() : model.support_size()),
        log_space_(model.n() > kLogSpaceCutoff) {
    if (tri_ && log_space_) {
      log_.resize(static_cast<std::size_t>(n_) + 1, 0.0);
      cum_log_.resize(static_cast<std::size_t>(n_) + 1, 0.0);
      for (Index k = 1; k <= n_; ++k) {
        log_[k] = std::log(static_cast<double>(k));
        // sum_{i=1}^k log(n - i + 1)
        cum_log_[k] = cum_log_[k - 1] + std::log(static_cast<double>(n_ - k + 1));
      }
    }
  }

  Index n() const { return n_; }
  Index top() const { return top_; }
  bool triangular() const { return tri_; }
  Index lowest(Index j) const { return tri_ ? j : 1; }
  double pmf(Index j) const { return tri_ ? 1.0 / static_cast<double>(n_ - j + 1) : 1.0 / static_cast<double>(top_); }
  bool valid(Index j, Index x) const { return j >= 1 && j <= n_ && x >= lowest(j) && x <= top_; }

  // Closed form s(j,x), used by the standalone accessor.
  double stop(Index j, Index x) const {
    if (tri_) {
      if (log_space_) {
        double acc = 0.0;
        for (Index i = 0; i < x - j; ++i) acc += log_[n_ - x + 1] - log_[n_ - j - i];
        return std::exp(acc);
      }
      double p = 1.0;
      for (Index i = 0; i < x - j; ++i) p *= static_cast<double>(n_ - x + 1) / static_cast<double>(n_ - j - i);
      return p;
    }
    return rect_power(top_ - x + 1, n_ - j);
  }

  // P(M_m > y), with M_0 above every value.
  double tail(Index m, Index y) const {
    if (m == 0) return 1.0;
    if (y >= top_) return 0.0;
    if (!tri_) return rect_power(top_ - y, m);
    const Index k = std::min(m, y);  // factors i > y equal 1
    if (k <= 0) return 1.0;
    if (log_space_) return std::exp(static_cast<double>(k) * log_[n_ - y] - cum_log_[k]);
    double p = 1.0;
    for (Index i = 1; i <= k; ++i) p *= static_cast<double>(n_ - y) / static_cast<double>(n_ - i + 1);
    return p;
  }

  // One backward step of s for the triangular staircase: s(j,x) from s(j+1,x).
  double tri_step(double s_next, Index j, Index x) const {
    if (log_space_) return s_next + log_[n_ - x + 1] - log_[n_ - j];
    return s_next * static_cast<double>(n_ - x + 1) / static_cast<double>(n_ - j);
  }
  bool log_space() const { return log_space_; }

  double rect_power(Index numer, Index exponent) const {
    const double ratio = static_cast<double>(numer) / static_cast<double>(top_);
    if (log_space_) return std::exp(static_cast<double>(exponent) * std::log(ratio));
    return std::pow(ratio, static_cast<double>(exponent));
  }

 private:
  Index n_;
  bool tri_;
  Index top_;
  bool log_space_;
  std::vector<double> log_;
  std::vector<double> cum_log_;
};

struct SweepResult {
  std::vector<double> thresholds;  // integer thresholds, +inf at n
  Decomposition decomposition;
};

// Backward pass over columns j = n, n-1, ..., down_to. Columns are indexed by
// x in 0..top with dead entries held at zero. `column` sees each finished
// column (j, s, v).
template <class Visit>
SweepResult backward(const Lattice& lat, Index down_to, Visit&& column) {
  const Index n = lat.n();
  const Index top = lat.top();
  const auto width = static_cast<std::size_t>(top) + 1;
  std::vector<double> s_next(width, 0.0), v_next(width, 0.0), s_cur(width, 0.0), v_cur(width, 0.0);
  // Triangular log-space runs keep log s alongside.
  std::vector<double> ls_next, ls_cur;
  const bool tri_log = lat.triangular() && lat.log_space();
  if (tri_log) {
    ls_next.assign(width, 0.0);
    ls_cur.assign(width, 0.0);
  }

  SweepResult out;
  out.thresholds.assign(static_cast<std::size_t>(n), 0.0);
  CompensatedSum jump, drift;
  Index b_next = top;  // b_{j+1} on the lattice; b_n acts as top

  for (Index j = n; j >= down_to; --j) {
    const Index lo = lat.lowest(j);
    std::fill(s_cur.begin(), s_cur.end(), 0.0);
    std::fill(v_cur.begin(), v_cur.end(), 0.0);
    if (j == n) {
      for (Index x = lo; x <= top; ++x) s_cur[x] = 1.0;
      if (tri_log) std::fill(ls_cur.begin(), ls_cur.end(), 0.0);
    } else {
      if (lat.triangular()) {
        s_cur[j] = 1.0;
        if (tri_log) ls_cur[j] = 0.0;
        for (Index x = j + 1; x <= top; ++x) {
          if (tri_log) {
            ls_cur[x] = lat.tri_step(ls_next[x], j, x);
            s_cur[x] = std::exp(ls_cur[x]);
          } else {
            s_cur[x] = lat.tri_step(s_next[x], j, x);
          }
        }
      } else {
        for (Index x = 1; x <= top; ++x) s_cur[x] = lat.stop(j, x);
      }
      // v(j,x) = pmf * (sum_{y<=x} max(s,v)(j+1,y) + #{y > x} v(j+1,x))
      const double w = lat.pmf(j + 1);
      const Index lo_next = lat.lowest(j + 1);
      CompensatedSum prefix;
      for (Index x = lo; x <= top; ++x) {
        if (x >= lo_next) prefix.add(std::max(s_next[x], v_next[x]));
        v_cur[x] = w * (prefix.value() + static_cast<double>(top - x) * v_next[x]);
      }
    }

    // b_j = largest x with s >= v
    Index b = lo;
    for (Index x = lo; x <= top; ++x) {
      if (s_cur[x] >= v_cur[x]) b = x;
    }
    if (j == n) b = top;
    out.thresholds[static_cast<std::size_t>(j - 1)] = j == n ? kInf : static_cast<double>(b);

    // jump at step j: P(M_{j-1} > b_j) * sum_{x <= b_j} pmf_j(x) s(j,x)
    const double enter = lat.tail(j - 1, b);
    if (enter > 0.0) {
      CompensatedSum acc;
      for (Index x = lo; x <= b; ++x) acc.add(s_cur[x]);
      jump.add(enter * lat.pmf(j) * acc.value());
    }
    // drift at step j+1: the boundary moves from b_j to b_{j+1} and overtakes
    // M_j = y, which then collects v(j,y)
    if (j < n) {
      for (Index y = b + 1; y <= b_next; ++y) {
        const double mass = lat.tail(j, y - 1) - lat.tail(j, y);
        drift.add(mass * v_cur[y]);
      }
    }
    b_next = b;

    column(j, s_cur, v_cur);
    std::swap(s_cur, s_next);
    std::swap(v_cur, v_next);
    if (tri_log) std::swap(ls_cur, ls_next);
  }
  out.decomposition = Decomposition::from_parts(jump.value(), drift.value());
  return out;
}

DpSolution solve_pyramid(const ObservationModel& model) {
  const Index n = model.n();
  const double p = model.p();
  // first step where stopping at a record beats waiting: 1-p >= (n-j)p
  Index jstar = n;
  for (Index j = 1; j <= n; ++j) {
    if (1.0 - p >= static_cast<double>(n - j) * p) {
      jstar = j;
      break;
    }
  }
  std::vector<double> b(static_cast<std::size_t>(n));
  for (Index j = 1; j <= n; ++j) b[static_cast<std::size_t>(j - 1)] = j < jstar ? -kInf : kInf;
  Decomposition d;
  if (jstar == 1) {
    // X_1 = 1 is a record against the empty past: a jump
    d = Decomposition::from_parts(std::pow(1.0 - p, static_cast<double>(n - 1)), 0.0);
  } else {
    const auto m = static_cast<double>(n - jstar);
    d = Decomposition::from_parts(0.0, (m + 1.0) * p * std::pow(1.0 - p, m));
  }
  return {model, std::nullopt, ThresholdPolicy(std::move(b)), d};
}

void require_cap(const ObservationModel& model, Index cap) {
  if (model.n() > cap) {
    throw ResourceLimit("n = " + std::to_string(model.n()) + " exceeds the solver cap " + std::to_string(cap));
  }
}

}  // namespace

double stop_value(const ObservationModel& model, Index j, Index x) {
  require_lattice(model, "stop_value");
  const Lattice lat(model);
  if (!lat.valid(j, x)) {
    throw StateOutOfRange("state (j=" + std::to_string(j) + ", x=" + std::to_string(x) + ") is not on the lattice");
  }
  return lat.stop(j, x);
}

double cont_value(const ObservationModel& model, Index j, Index x) {
  require_lattice(model, "cont_value");
  const Lattice lat(model);
  if (!lat.valid(j, x)) {
    throw StateOutOfRange("state (j=" + std::to_string(j) + ", x=" + std::to_string(x) + ") is not on the lattice");
  }
  double value = 0.0;
  backward(lat, j, [&](Index col, const std::vector<double>&, const std::vector<double>& v) {
    if (col == j) value = v[static_cast<std::size_t>(x)];
  });
  return value;
}

DpSolution solve(const ObservationModel& model, const DpOptions& options) {
  require_cap(model, options.max_n);
  if (model.kind() == ModelKind::BernoulliPyramid) return solve_pyramid(model);
  require_lattice(model, "solve");

  const Lattice lat(model);
  std::optional<ValueTables> tables;
  if (options.keep_tables) tables.emplace(model.n(), lat.top(), lat.triangular());
  auto sweep = backward(lat, 1, [&](Index j, const std::vector<double>& s, const std::vector<double>& v) {
    if (!tables) return;
    auto sc = tables->stop_column(j);
    auto vc = tables->cont_column(j);
    const Index lo = lat.lowest(j);
    for (std::size_t i = 0; i < sc.size(); ++i) {
      sc[i] = s[static_cast<std::size_t>(lo) + i];
      vc[i] = v[static_cast<std::size_t>(lo) + i];
    }
  });
  return {model, std::move(tables), ThresholdPolicy(std::move(sweep.thresholds)), sweep.decomposition};
}

}  // namespace stoprule::dp
