#include "semigeo/report.hpp"

#include <algorithm>
#include <ostream>

#include "semigeo/tensor_io.hpp"

namespace semigeo {

std::string_view to_string(ReconStatus status) {
  switch (status) {
    case ReconStatus::Complete: return "Complete";
    case ReconStatus::StoppedBlowup: return "StoppedBlowup";
    case ReconStatus::StoppedDegenerate: return "StoppedDegenerate";
    case ReconStatus::StoppedError: return "StoppedError";
  }
  return "?";
}

ReconStatus worse(ReconStatus a, ReconStatus b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

void write_report(std::ostream& out, const ReconstructionReport& report) {
  out << "status: " << to_string(report.status) << '\n'
      << "delta_hat_plus: " << format_real(report.delta_hat_plus) << '\n'
      << "delta_hat_minus: " << format_real(report.delta_hat_minus) << '\n'
      << "max_component: " << format_real(report.max_component) << '\n';
  for (const auto& d : report.diagnostics) {
    out << "diagnostic: " << to_string(d.cause) << " at x1=" << format_real(d.x1) << " node=(";
    for (Index i = 0; i < d.node.size(); ++i) {
      if (i) out << ',';
      out << format_real(d.node[i]);
    }
    out << ")";
    if (!d.component.empty()) out << " component=" << d.component;
    if (!d.message.empty()) out << " " << d.message;
    out << '\n';
  }
}

}  // namespace semigeo
