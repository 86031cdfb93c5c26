#pragma once

// Forward curvature oracle on tube grids. All derivatives come from
// fd_partial / fd_second, so results are second-order accurate in the
// grid spacing.

#include <Eigen/Core>

#include <functional>
#include <optional>

#include "semigeo/grid.hpp"
#include "semigeo/tensor.hpp"

namespace semigeo {

inline constexpr double kDefaultDegeneracyTol = 1e-10;
inline constexpr double kDefaultSemigeodesicTol = 1e-10;

/// Symmetric linear connection Γ^h_ij, either sampled on a grid (evaluated
/// off-node by multilinear interpolation) or given pointwise.
class ConnectionField {
 public:
  using Function = std::function<double(int h, int i, int j, const Point&)>;

  explicit ConnectionField(TensorTube gamma);
  ConnectionField(int n, Function fn);

  int dim() const { return n_; }
  double operator()(int h, int i, int j, const Point& x) const;
  /// Underlying samples, if grid-backed.
  const TensorTube* tube() const { return tube_ ? &*tube_ : nullptr; }
  /// Components at the nodes of `grid` (stored data when the grid matches).
  TensorTube on_grid(const TubeGrid& grid) const;

 private:
  int n_;
  std::optional<TensorTube> tube_;
  Function fn_;
};

/// Metric g_ij over 1..n with sign element e, grid-backed or pointwise.
class MetricField {
 public:
  using Function = std::function<double(int i, int j, const Point&)>;

  MetricField(TensorTube g, int e);
  MetricField(int n, int e, Function fn);

  int dim() const { return n_; }
  int e() const { return e_; }
  double operator()(int i, int j, const Point& x) const;
  Eigen::MatrixXd matrix(const Point& x) const;
  const TensorTube* tube() const { return tube_ ? &*tube_ : nullptr; }
  TensorTube on_grid(const TubeGrid& grid) const;

 private:
  int n_;
  int e_;
  std::optional<TensorTube> tube_;
  Function fn_;
};

struct ChristoffelSymbols {
  TensorTube first_kind;  // Γ_ijk, symmetric in i, j
  ConnectionField second_kind;
};

/// Γ_ijk = ½(∂_i g_jk + ∂_j g_ik − ∂_k g_ij), Γ^h_ij = g^{hr} Γ_ijr.
/// Throws DegenerateMetric at the first node with |det g| < det_tol.
ChristoffelSymbols christoffel_from_metric(const MetricField& g, const TubeGrid& grid,
                                           double det_tol = kDefaultDegeneracyTol);

/// R^h_ijk = ∂_j Γ^h_ik − ∂_k Γ^h_ij + Γ^m_ik Γ^h_mj − Γ^m_ij Γ^h_mk.
/// Stored with one slot per (j<k) pair, so antisymmetry in j, k is exact.
TensorTube curvature13(const ConnectionField& gamma, const TubeGrid& grid);

struct SemigeodesicResidual {
  double g11 = 0.0;  // max |g_11 − e|
  double g1j = 0.0;  // max |g_1j|, j ≥ 2
};

SemigeodesicResidual semigeodesic_residual(const TensorTube& g, int e);

/// R_1ij1 = ½ ∂11 g_ij − ¼ g^{rs} ∂1 g_ir ∂1 g_js over i, j, r, s ≥ 2, for a
/// metric in semigeodesic form. Returns a symmetric tube over indices 2..n.
TensorTube curvature04_semigeo(const MetricField& g, const TubeGrid& grid,
                               double semigeodesic_tol = kDefaultSemigeodesicTol,
                               double det_tol = kDefaultDegeneracyTol);

struct LoweredCurvature {
  TensorTube r1ij1;     // g_im R^m_11j over i, j ≥ 2
  double max_residual;  // largest pairwise gap among the four expressions
};

/// Compares e R^1_ij1, −e R^1_i1j, g_im R^m_11j and −g_im R^m_1j1, all of
/// which equal R_1ij1 for a semigeodesic metric.
LoweredCurvature lower_and_check_identities(const MetricField& g, const TensorTube& r13,
                                      double semigeodesic_tol = kDefaultSemigeodesicTol);

}  // namespace semigeo
