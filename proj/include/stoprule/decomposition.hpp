#pragma once

namespace stoprule {

// Success probability split by how the running minimum first enters the
// stopping region: at a record (jump) or by the boundary overtaking it (drift).
struct Decomposition {
  double jump = 0.0;
  double drift = 0.0;
  double total = 0.0;

  static Decomposition from_parts(double jump, double drift) { return {jump, drift, jump + drift}; }
};

}  // namespace stoprule
