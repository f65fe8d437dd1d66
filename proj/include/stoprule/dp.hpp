#pragma once

#include <optional>

#include "stoprule/decomposition.hpp"
#include "stoprule/model.hpp"
#include "stoprule/policy.hpp"
#include "stoprule/tables.hpp"

namespace stoprule::dp {

enum class RecordSemantics { Weak, Strict };

struct DpOptions {
  Index max_n = 10000;
  // Dense s/v tables cost O(n^2) memory; sweeps turn this off and keep only
  // two rolling columns.
  bool keep_tables = true;
};

struct DpSolution {
  ObservationModel model;
  std::optional<ValueTables> tables;  // absent for the Bernoulli pyramid or keep_tables = false
  ThresholdPolicy policy;
  Decomposition decomposition;
};

// s(j,x): probability that a record x at step j is never undercut.
// Triangular and rectangular models only.
double stop_value(const ObservationModel& model, Index j, Index x);

// Optimal success probability after passing over the record x at step j;
// 0 at j = n and on dead triangular states.
double cont_value(const ObservationModel& model, Index j, Index x);

// Backward induction for triangular/rectangular models, closed form for the
// Bernoulli pyramid. Throws ResourceLimit above options.max_n.
DpSolution solve(const ObservationModel& model, const DpOptions& options = {});

// Exact value of an arbitrary monotone threshold policy by forward evolution
// of the running-minimum law. Works for every discrete model; a stop at step
// j counts as jump when M_{j-1} > b_j and as drift otherwise. At step n every
// record is accepted. Under strict semantics ties with the running minimum
// are not records, except for the forced stop at step n.
Decomposition policy_value(const ObservationModel& model, const ThresholdPolicy& policy,
                           RecordSemantics semantics = RecordSemantics::Weak);

inline constexpr Index kBruteForceCap = 1000000;

struct BruteForceReport {
  double value = 0.0;
  Index record_nodes = 0;   // histories ending in a record before step n
  Index disagreements = 0;  // where the history-optimal decision contradicts the compared policy
};

// Exact value of a policy by enumerating every outcome tuple.
double brute_force_value(const ObservationModel& model, const ThresholdPolicy& policy,
                         RecordSemantics semantics = RecordSemantics::Weak);

// Optimal value by backward recursion over full observation histories. With
// a policy to compare, counts records where the strictly better decision
// (gap above 1e-12) differs from "stop iff x <= b_j".
BruteForceReport brute_force_optimal(const ObservationModel& model, const ThresholdPolicy* compare = nullptr);

}  // namespace stoprule::dp
