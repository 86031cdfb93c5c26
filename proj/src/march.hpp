#pragma once

// Shared bookkeeping for per-node x1 marches.

#include <string>
#include <vector>

#include "semigeo/grid.hpp"
#include "semigeo/report.hpp"

namespace semigeo::detail {

/// Per-node outcome of marching one direction.
struct DirectionStop {
  Index reached = 0;  // last completed x1 sample
  ReconStatus cause = ReconStatus::Complete;
  std::string component;
  std::string message;
};

/// Reduce per-node stops to the binding reach for one direction (min over
/// nodes toward +, max toward -). Adds status and one diagnostic for the
/// lowest-numbered binding node to the report.
Index reduce_direction(const std::vector<DirectionStop>& stops, int dir, const TubeGrid& grid,
                       ReconstructionReport& report);

}  // namespace semigeo::detail
