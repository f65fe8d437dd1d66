#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stoprule {

using Index = std::int64_t;

enum class ModelKind {
  IidUniform01,         // X_j iid uniform on [0,1]
  TriangularDiscrete,   // X_j uniform on {j,...,n}
  RectangularDiscrete,  // X_j uniform on {1,...,K}
  BernoulliPyramid,     // X_1 = 1, X_j in {1/j, j} with P(X_j = 1/j) = p
  TrendUniformShifted,  // X_j uniform on {j,...,j+n-1}
  TrendUniformScaled,   // X_j = j + rho*n*U_j
  TrendPowerUniform,    // X_j = j + n*U_j^(1/theta)
};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// One step's distribution for a discrete model: support points in increasing
// order with their probabilities.
struct StepLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

// Immutable description of the sequence X_1..X_n consumed by every solver
// and sampler. Construct through the named factories; they validate ranges.
class ObservationModel {
 public:
  static ObservationModel iid_uniform01(Index n);
  static ObservationModel triangular(Index n);
  // K defaults to n, the square rectangular model.
  static ObservationModel rectangular(Index n, Index support_size = 0);
  static ObservationModel bernoulli_pyramid(Index n, double p);
  static ObservationModel trend_shifted(Index n);
  static ObservationModel trend_scaled(Index n, double rho);
  static ObservationModel trend_power(Index n, double theta);

  ModelKind kind() const noexcept { return kind_; }
  Index n() const noexcept { return n_; }
  Index support_size() const noexcept { return support_size_; }
  double p() const noexcept { return p_; }
  double rho() const noexcept { return rho_; }
  double theta() const noexcept { return theta_; }

  bool is_discrete() const noexcept;
  bool is_iid() const noexcept;
  // Triangular and rectangular models live on an integer lattice of running
  // minimum states and are handled by the backward-induction tables.
  bool is_lattice() const noexcept;

  // Distribution of X_j, 1 <= j <= n. Discrete models only.
  StepLaw step_law(Index j) const;

  // Product of support sizes, saturating at INT64_MAX.
  Index outcome_count() const;

  std::string describe() const;

  friend bool operator==(const ObservationModel&, const ObservationModel&) = default;

 private:
  ObservationModel(ModelKind kind, Index n) : kind_(kind), n_(n) {}

  ModelKind kind_;
  Index n_;
  Index support_size_ = 0;
  double p_ = 0.0;
  double rho_ = 0.0;
  double theta_ = 0.0;
};

}  // namespace stoprule
