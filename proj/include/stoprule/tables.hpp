#pragma once

#include <span>
#include <vector>

#include "stoprule/model.hpp"

namespace stoprule {

// Dense s(j,x) / v(j,x) tables over the lattice states of the running
// minimum. Step j covers x in [lowest(j), highest()]: j..n for the triangular
// model, 1..K for the rectangular one.
class ValueTables {
 public:
  ValueTables() = default;
  ValueTables(Index steps, Index highest, bool staircase);

  Index steps() const noexcept { return steps_; }
  Index highest() const noexcept { return highest_; }
  Index lowest(Index j) const noexcept { return staircase_ ? j : 1; }
  bool contains(Index j, Index x) const noexcept {
    return j >= 1 && j <= steps_ && x >= lowest(j) && x <= highest_;
  }
  std::size_t state_count() const noexcept { return stop_.size(); }

  // Throw StateOutOfRange for states outside the lattice.
  double stop_value(Index j, Index x) const;
  double cont_value(Index j, Index x) const;

  // Column views indexed by x - lowest(j).
  std::span<const double> stop_column(Index j) const;
  std::span<const double> cont_column(Index j) const;
  std::span<double> stop_column(Index j);
  std::span<double> cont_column(Index j);

 private:
  std::size_t offset(Index j) const noexcept { return offsets_[static_cast<std::size_t>(j)]; }
  std::size_t column_size(Index j) const noexcept { return static_cast<std::size_t>(highest_ - lowest(j) + 1); }
  void check(Index j, Index x) const;

  Index steps_ = 0;
  Index highest_ = 0;
  bool staircase_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<double> stop_;
  std::vector<double> cont_;
};

}  // namespace stoprule
