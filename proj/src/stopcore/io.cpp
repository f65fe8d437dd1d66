#include "stoprule/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "stoprule/errors.hpp"

namespace stoprule::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return {buf, res.ptr};
}

json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  const std::string text = format_number(x);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

double parse_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw DomainError("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

json to_json(const ObservationModel& model) {
  json params = json::object();
  switch (model.kind()) {
    case ModelKind::RectangularDiscrete: params["K"] = model.support_size(); break;
    case ModelKind::BernoulliPyramid: params["p"] = number(model.p()); break;
    case ModelKind::TrendUniformScaled: params["rho"] = number(model.rho()); break;
    case ModelKind::TrendPowerUniform: params["theta"] = number(model.theta()); break;
    default: break;
  }
  return {{"kind", std::string(to_string(model.kind()))}, {"n", model.n()}, {"params", params}};
}

ObservationModel model_from_json(const json& j) {
  try {
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    const Index n = j.at("n").get<Index>();
    const json params = j.value("params", json::object());
    switch (kind) {
      case ModelKind::IidUniform01: return ObservationModel::iid_uniform01(n);
      case ModelKind::TriangularDiscrete: return ObservationModel::triangular(n);
      case ModelKind::RectangularDiscrete: return ObservationModel::rectangular(n, params.value("K", Index{0}));
      case ModelKind::BernoulliPyramid: return ObservationModel::bernoulli_pyramid(n, params.at("p").get<double>());
      case ModelKind::TrendUniformShifted: return ObservationModel::trend_shifted(n);
      case ModelKind::TrendUniformScaled: return ObservationModel::trend_scaled(n, params.at("rho").get<double>());
      case ModelKind::TrendPowerUniform: return ObservationModel::trend_power(n, params.at("theta").get<double>());
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed model JSON: ") + e.what());
  }
  throw DomainError("malformed model JSON");
}

json to_json(const ThresholdPolicy& policy) {
  json arr = json::array();
  for (double b : policy.thresholds()) arr.push_back(number(b));
  return {{"thresholds", arr}};
}

ThresholdPolicy policy_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("thresholds")) throw DomainError("policy JSON needs a \"thresholds\" array");
    arr = &j.at("thresholds");
  }
  if (!arr->is_array()) throw DomainError("policy thresholds must be an array");
  std::vector<double> b;
  for (const auto& item : *arr) b.push_back(parse_number(item));
  return ThresholdPolicy(std::move(b));
}

json to_json(const Decomposition& d) {
  return {{"jump", number(d.jump)}, {"drift", number(d.drift)}, {"total", number(d.total)}};
}

json to_json(const dp::DpSolution& solution) {
  json out = {{"model", to_json(solution.model)}};
  out["thresholds"] = to_json(solution.policy).at("thresholds");
  out["jump"] = number(solution.decomposition.jump);
  out["drift"] = number(solution.decomposition.drift);
  out["total"] = number(solution.decomposition.total);
  return out;
}

void write_tables_csv(std::ostream& out, const dp::DpSolution& solution) {
  if (!solution.tables) throw UnsupportedModel("no value tables for " + solution.model.describe());
  const ValueTables& t = *solution.tables;
  out << "j,x,s,v\n";
  for (Index j = 1; j <= t.steps(); ++j) {
    for (Index x = t.lowest(j); x <= t.highest(); ++x) {
      out << j << ',' << x << ',' << format_number(t.stop_value(j, x)) << ',' << format_number(t.cont_value(j, x))
          << '\n';
    }
  }
}

}  // namespace stoprule::io
