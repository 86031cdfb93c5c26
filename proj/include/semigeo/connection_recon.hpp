#pragma once

// Reconstruction of a symmetric connection in a pre-semigeodesic chart
// (Γ^h_11 = 0) from its values on x1 = 0 and the prescribed curvature
// components A^h_ik = R^h_i1k.
//
// Stage 1 integrates the closed Riccati system for Γ^h_1k node by node:
//
//   ∂1 Γ^h_1k = −Γ^m_1k Γ^h_1m + A^h_1k
//
// Stage 2 then integrates, for 2 ≤ i ≤ k,
//
//   ∂1 Γ^h_ik = −Γ^m_ik Γ^h_m1 + Γ^m_i1 Γ^h_mk + ∂k Γ^h_i1 + A^h_ik
//
// which is R^h_i1k solved for ∂1 Γ^h_ik. The transverse derivative is a
// central difference of stage-1 values at the same x1.

#include <Eigen/Core>

#include "semigeo/curvature.hpp"
#include "semigeo/field.hpp"
#include "semigeo/grid.hpp"
#include "semigeo/report.hpp"
#include "semigeo/tensor.hpp"

namespace semigeo {

/// Γ̃^h_ij on the hypersurface, keyed (h, i, j). Either lower-index order
/// may be given; both orders must agree when both are present.
struct HypersurfaceConnectionData {
  FieldSet gamma;

  double value(int h, int i, int j, const Point& x) const;
  /// Throws InvalidInit on asymmetric data or nonzero Γ̃^h_11.
  void validate(const TubeGrid& grid) const;
};

/// A^h_ik keyed (h, i, k) with k ≥ 2.
struct ConnectionCurvatureSpec {
  FieldSet A;

  void validate(int n) const;
};

struct ReconOptions {
  double blowup_threshold = 1e6;
  double degeneracy_tol = 1e-10;
  /// Drop the Γ^m_i1 Γ^h_mk term from stage 2. Regression checks only.
  bool literal_stage2 = false;
  int threads = 1;
};

struct Stage1Result {
  /// Γ^h_1k on the reached x1 range; every other component is zero.
  TensorTube gamma;
  /// Values at x1-interval midpoints: row = interval * T + t,
  /// column = (h - 1) * (n - 1) + (k - 2).
  Eigen::MatrixXd midpoint;
  ReconstructionReport report;
};

struct Stage2Result {
  /// Γ^h_ik for i, k ≥ 2 on the reached x1 range.
  TensorTube gamma;
  ReconstructionReport report;
};

struct ConnectionReconstruction {
  ConnectionField connection;
  ReconstructionReport report;
};

Stage1Result stage1_integrate(const HypersurfaceConnectionData& init,
                              const ConnectionCurvatureSpec& curvature, const ChartSpec& spec,
                              const ReconOptions& options = {});

Stage2Result stage2_integrate(const Stage1Result& stage1, const HypersurfaceConnectionData& init,
                              const ConnectionCurvatureSpec& curvature, const ChartSpec& spec,
                              const ReconOptions& options = {});

ConnectionReconstruction reconstruct_connection(const HypersurfaceConnectionData& init,
                                                const ConnectionCurvatureSpec& curvature,
                                                const ChartSpec& spec,
                                                const ReconOptions& options = {});

}  // namespace semigeo
