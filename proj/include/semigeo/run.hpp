#pragma once

#include <filesystem>
#include <iosfwd>

#include "semigeo/config.hpp"

namespace semigeo {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumericalStop = 3,
  kExitAboveTolerance = 4,
};

/// Runs one configured job, writing dumps and report.txt into `out_dir`.
/// Messages go to `err`. Returns an ExitCode value.
///
/// Roundtrip modes add to the report:
///   max_error                    against gexact / Gammaexact, when given
///   curvature_residual           forward oracle on the result vs the input
///   curvature_residual_estimate  Richardson estimate of its discretisation part
/// and fail with kExitAboveTolerance when max_error exceeds the roundtrip
/// tolerance or curvature_residual exceeds max(tolerance, 10 x estimate).
int run(const RunConfig& config, const std::filesystem::path& out_dir, int threads,
        std::ostream& err);

}  // namespace semigeo
