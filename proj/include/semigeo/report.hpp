#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "semigeo/grid.hpp"

namespace semigeo {

enum class ReconStatus { Complete, StoppedBlowup, StoppedDegenerate, StoppedError };

std::string_view to_string(ReconStatus status);

/// Where and why an integration direction stopped.
struct Diagnostic {
  ReconStatus cause = ReconStatus::StoppedError;
  Point node;         // hypersurface point (0, x2, ..., xn) of the node
  double x1 = 0.0;    // last x1 sample reached
  std::string component;
  std::string message;
};

struct ReconstructionReport {
  ReconStatus status = ReconStatus::Complete;
  double delta_hat_plus = 0.0;
  double delta_hat_minus = 0.0;
  double max_component = 0.0;
  std::vector<Diagnostic> diagnostics;

  bool complete() const { return status == ReconStatus::Complete; }
};

/// The more severe of two statuses (Error > Degenerate > Blowup > Complete).
ReconStatus worse(ReconStatus a, ReconStatus b);

/// key: value lines (status, delta_hat_plus, delta_hat_minus, max_component,
/// then one diagnostic line per stop).
void write_report(std::ostream& out, const ReconstructionReport& report);

}  // namespace semigeo
