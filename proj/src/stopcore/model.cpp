#include "stoprule/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "stoprule/errors.hpp"

namespace stoprule {

namespace {

void require_n(Index n) {
  if (n < 1) throw DomainError("model needs n >= 1, got " + std::to_string(n));
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::IidUniform01: return "iid_uniform01";
    case ModelKind::TriangularDiscrete: return "triangular";
    case ModelKind::RectangularDiscrete: return "rectangular";
    case ModelKind::BernoulliPyramid: return "bernoulli_pyramid";
    case ModelKind::TrendUniformShifted: return "trend_shifted";
    case ModelKind::TrendUniformScaled: return "trend_scaled";
    case ModelKind::TrendPowerUniform: return "trend_power";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "iid_uniform01" || name == "iid" || name == "uniform") return ModelKind::IidUniform01;
  if (name == "triangular" || name == "tri") return ModelKind::TriangularDiscrete;
  if (name == "rectangular" || name == "rect") return ModelKind::RectangularDiscrete;
  if (name == "bernoulli_pyramid" || name == "pyramid") return ModelKind::BernoulliPyramid;
  if (name == "trend_shifted" || name == "shifted") return ModelKind::TrendUniformShifted;
  if (name == "trend_scaled" || name == "scaled") return ModelKind::TrendUniformScaled;
  if (name == "trend_power" || name == "power") return ModelKind::TrendPowerUniform;
  throw DomainError("unknown model kind '" + std::string(name) + "'");
}

ObservationModel ObservationModel::iid_uniform01(Index n) {
  require_n(n);
  return {ModelKind::IidUniform01, n};
}

ObservationModel ObservationModel::triangular(Index n) {
  require_n(n);
  return {ModelKind::TriangularDiscrete, n};
}

ObservationModel ObservationModel::rectangular(Index n, Index support_size) {
  require_n(n);
  if (support_size == 0) support_size = n;
  if (support_size < 1) throw DomainError("rectangular model needs K >= 1");
  ObservationModel m{ModelKind::RectangularDiscrete, n};
  m.support_size_ = support_size;
  return m;
}

ObservationModel ObservationModel::bernoulli_pyramid(Index n, double p) {
  require_n(n);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("Bernoulli pyramid needs p in (0,1)");
  ObservationModel m{ModelKind::BernoulliPyramid, n};
  m.p_ = p;
  return m;
}

ObservationModel ObservationModel::trend_shifted(Index n) {
  require_n(n);
  return {ModelKind::TrendUniformShifted, n};
}

ObservationModel ObservationModel::trend_scaled(Index n, double rho) {
  require_n(n);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("trend_scaled needs rho > 0");
  ObservationModel m{ModelKind::TrendUniformScaled, n};
  m.rho_ = rho;
  return m;
}

ObservationModel ObservationModel::trend_power(Index n, double theta) {
  require_n(n);
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("trend_power needs theta > 0");
  ObservationModel m{ModelKind::TrendPowerUniform, n};
  m.theta_ = theta;
  return m;
}

bool ObservationModel::is_discrete() const noexcept {
  switch (kind_) {
    case ModelKind::TriangularDiscrete:
    case ModelKind::RectangularDiscrete:
    case ModelKind::BernoulliPyramid:
    case ModelKind::TrendUniformShifted:
      return true;
    default:
      return false;
  }
}

bool ObservationModel::is_iid() const noexcept {
  return kind_ == ModelKind::IidUniform01 || kind_ == ModelKind::RectangularDiscrete;
}

bool ObservationModel::is_lattice() const noexcept {
  return kind_ == ModelKind::TriangularDiscrete || kind_ == ModelKind::RectangularDiscrete;
}

StepLaw ObservationModel::step_law(Index j) const {
  if (j < 1 || j > n_) throw StateOutOfRange("step " + std::to_string(j) + " outside 1.." + std::to_string(n_));
  StepLaw law;
  auto uniform_range = [&law](Index lo, Index hi) {
    const double w = 1.0 / static_cast<double>(hi - lo + 1);
    law.values.reserve(hi - lo + 1);
    for (Index x = lo; x <= hi; ++x) {
      law.values.push_back(static_cast<double>(x));
      law.probs.push_back(w);
    }
  };
  switch (kind_) {
    case ModelKind::TriangularDiscrete:
      uniform_range(j, n_);
      break;
    case ModelKind::RectangularDiscrete:
      uniform_range(1, support_size_);
      break;
    case ModelKind::TrendUniformShifted:
      uniform_range(j, j + n_ - 1);
      break;
    case ModelKind::BernoulliPyramid:
      if (j == 1) {
        law.values = {1.0};
        law.probs = {1.0};
      } else {
        law.values = {1.0 / static_cast<double>(j), static_cast<double>(j)};
        law.probs = {p_, 1.0 - p_};
      }
      break;
    default:
      throw UnsupportedModel("step_law: model '" + std::string(to_string(kind_)) + "' is continuous");
  }
  return law;
}

Index ObservationModel::outcome_count() const {
  if (!is_discrete()) return std::numeric_limits<Index>::max();
  constexpr Index cap = std::numeric_limits<Index>::max();
  Index total = 1;
  for (Index j = 1; j <= n_; ++j) {
    Index size = 0;
    switch (kind_) {
      case ModelKind::TriangularDiscrete: size = n_ - j + 1; break;
      case ModelKind::RectangularDiscrete: size = support_size_; break;
      case ModelKind::TrendUniformShifted: size = n_; break;
      case ModelKind::BernoulliPyramid: size = j == 1 ? 1 : 2; break;
      default: break;
    }
    if (total > cap / size) return cap;
    total *= size;
  }
  return total;
}

std::string ObservationModel::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(n=" << n_;
  switch (kind_) {
    case ModelKind::RectangularDiscrete: out << ", K=" << support_size_; break;
    case ModelKind::BernoulliPyramid: out << ", p=" << p_; break;
    case ModelKind::TrendUniformScaled: out << ", rho=" << rho_; break;
    case ModelKind::TrendPowerUniform: out << ", theta=" << theta_; break;
    default: break;
  }
  out << ")";
  return out.str();
}

}  // namespace stoprule
