#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "stoprule/dp.hpp"
#include "stoprule/model.hpp"
#include "stoprule/policy.hpp"

namespace stoprule::io {

using nlohmann::json;

// 12 significant digits, shortest form, "inf"/"-inf"/"nan" for non-finite.
std::string format_number(double x);

// The value rounded to 12 significant digits as a JSON number, or the string
// "inf"/"-inf" for infinities.
json number(double x);

// Accepts numbers and the strings "inf", "+inf", "-inf".
double parse_number(const json& j);

json to_json(const ObservationModel& model);
ObservationModel model_from_json(const json& j);

json to_json(const ThresholdPolicy& policy);
ThresholdPolicy policy_from_json(const json& j);

json to_json(const Decomposition& d);
json to_json(const dp::DpSolution& solution);

// Columns j, x, s, v; throws UnsupportedModel when the solution has no tables.
void write_tables_csv(std::ostream& out, const dp::DpSolution& solution);

}  // namespace stoprule::io
