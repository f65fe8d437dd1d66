#include "stoprule/tables.hpp"

#include <string>

#include "stoprule/errors.hpp"

namespace stoprule {

ValueTables::ValueTables(Index steps, Index highest, bool staircase)
    : steps_(steps), highest_(highest), staircase_(staircase), offsets_(static_cast<std::size_t>(steps) + 2, 0) {
  std::size_t total = 0;
  for (Index j = 1; j <= steps; ++j) {
    offsets_[static_cast<std::size_t>(j)] = total;
    if (highest >= lowest(j)) total += column_size(j);
  }
  offsets_[static_cast<std::size_t>(steps) + 1] = total;
  stop_.assign(total, 0.0);
  cont_.assign(total, 0.0);
}

void ValueTables::check(Index j, Index x) const {
  if (!contains(j, x)) {
    throw StateOutOfRange("state (j=" + std::to_string(j) + ", x=" + std::to_string(x) + ") is not on the lattice");
  }
}

double ValueTables::stop_value(Index j, Index x) const {
  check(j, x);
  return stop_[offset(j) + static_cast<std::size_t>(x - lowest(j))];
}

double ValueTables::cont_value(Index j, Index x) const {
  check(j, x);
  return cont_[offset(j) + static_cast<std::size_t>(x - lowest(j))];
}

std::span<const double> ValueTables::stop_column(Index j) const {
  check(j, lowest(j));
  return {stop_.data() + offset(j), column_size(j)};
}

std::span<const double> ValueTables::cont_column(Index j) const {
  check(j, lowest(j));
  return {cont_.data() + offset(j), column_size(j)};
}

std::span<double> ValueTables::stop_column(Index j) {
  check(j, lowest(j));
  return {stop_.data() + offset(j), column_size(j)};
}

std::span<double> ValueTables::cont_column(Index j) {
  check(j, lowest(j));
  return {cont_.data() + offset(j), column_size(j)};
}

}  // namespace stoprule
