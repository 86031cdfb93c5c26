#include "march.hpp"

#include <algorithm>
#include <limits>

namespace semigeo::detail {

Index reduce_direction(const std::vector<DirectionStop>& stops, int dir, const TubeGrid& grid,
                       ReconstructionReport& report) {
  Index reach = dir > 0 ? std::numeric_limits<Index>::max() : std::numeric_limits<Index>::min();
  for (const auto& s : stops) reach = dir > 0 ? std::min(reach, s.reached) : std::max(reach, s.reached);
  const Index end = dir > 0 ? grid.x1_count() - 1 : 0;
  if (reach == end) return reach;
  Index binding = -1;
  Index stopped = 0;
  ReconStatus cause = ReconStatus::Complete;
  for (std::size_t t = 0; t < stops.size(); ++t) {
    if (stops[t].cause == ReconStatus::Complete) continue;
    ++stopped;
    if (stops[t].reached == reach) {
      cause = worse(cause, stops[t].cause);
      if (binding < 0) binding = static_cast<Index>(t);
    }
  }
  report.status = worse(report.status, cause);
  const auto& b = stops[static_cast<std::size_t>(binding)];
  Diagnostic d;
  d.cause = b.cause;
  d.node = grid.surface_point(binding);
  d.x1 = grid.x1()[static_cast<std::size_t>(reach)];
  d.component = b.component;
  d.message = b.message + " (" + std::to_string(stopped) + " of " +
              std::to_string(stops.size()) + " nodes stopped, direction " +
              (dir > 0 ? "+" : "-") + ")";
  report.diagnostics.push_back(std::move(d));
  return reach;
}

}  // namespace semigeo::detail
