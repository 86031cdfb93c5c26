#pragma once

// Reconstruction of a semigeodesic metric g = e dx1² + g_ij dx^i dx^j from
// (g̃, G̃) on x1 = 0 and prescribed a_ij = R_1ij1, via the first-order system
//
//   ∂1 g_ij = G_ij,   ∂1 G_ij = ½ g^{rs} G_ir G_js + 2 a_ij     (i, j ≥ 2)
//
// integrated independently at every transverse node in both x1 directions.

#include <Eigen/Core>

#include <cmath>

#include "semigeo/connection_recon.hpp"
#include "semigeo/curvature.hpp"
#include "semigeo/error.hpp"
#include "semigeo/field.hpp"
#include "semigeo/linalg.hpp"
#include "semigeo/report.hpp"

namespace semigeo {

/// g̃_ij and G̃_ij keyed (i, j), i, j ≥ 2. A missing mirror inherits.
struct HypersurfaceMetricData {
  FieldSet g;
  FieldSet G;
};

/// a_ij keyed (i, j), i, j ≥ 2; must be symmetric.
struct MetricCurvatureSpec {
  FieldSet a;
};

template <typename Scalar>
struct MetricRates {
  MatrixX<Scalar> dg;
  MatrixX<Scalar> dG;
};

/// Right-hand side of the transverse system. Output is exactly symmetric.
/// Throws DegenerateMetric when |det g| < det_tol.
template <typename Scalar>
MetricRates<Scalar> metric_rhs(const MatrixX<Scalar>& g, const MatrixX<Scalar>& G,
                               const MatrixX<Scalar>& a, double det_tol = kDefaultDegeneracyTol) {
  using std::abs;
  const Scalar det = small_determinant(g);
  if (!(abs(scalar_value(det)) >= det_tol)) {
    throw DegenerateMetric("degenerate transverse metric", {}, scalar_value(det));
  }
  const MatrixX<Scalar> quad = G * small_inverse(g, det) * G;
  MatrixX<Scalar> dG(g.rows(), g.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = i; j < g.cols(); ++j) {
      dG(i, j) = Scalar(0.5) * quad(i, j) + Scalar(2.0) * a(i, j);
    }
  }
  mirror_upper(dG);
  MatrixX<Scalar> dg = G;
  mirror_upper(dg);
  return {std::move(dg), std::move(dG)};
}

struct MetricReconstruction {
  MetricField metric;
  ReconstructionReport report;
};

/// Degeneracy stops a direction once |det g| < options.degeneracy_tol times
/// |det g̃| at that node.
MetricReconstruction reconstruct_metric(const HypersurfaceMetricData& init,
                                        const MetricCurvatureSpec& curvature, int e,
                                        const ChartSpec& spec, const ReconOptions& options = {});

}  // namespace semigeo
