#pragma once

// Residual checks for the two chart characterisations: x1-lines are
// canonically parametrised geodesics iff Γ^h_11 = 0, and a metric is
// semigeodesic iff g_11 = e and g_1j = 0.

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

#include "semigeo/curvature.hpp"
#include "semigeo/error.hpp"
#include "semigeo/grid.hpp"

namespace semigeo {

/// Uniformly sampled curve c(s_k) with its velocity.
struct Curve {
  std::vector<double> s;
  std::vector<Point> position;
  std::vector<Point> velocity;
};

/// Raised when a geodesic leaves the tube before s_max. Carries the samples
/// computed so far and the first point found outside.
class LeftDomain : public Error {
 public:
  LeftDomain(Curve partial, Point exit_point)
      : Error("geodesic left the tube domain"),
        partial_(std::move(partial)),
        exit_(std::move(exit_point)) {}
  const Curve& partial() const { return partial_; }
  const Point& exit_point() const { return exit_; }

 private:
  Curve partial_;
  Point exit_;
};

/// max over grid nodes of max_h |Γ^h_11|.
double pre_semigeodesic_residual(const ConnectionField& gamma, const TubeGrid& grid);

/// Plugs the x1-lines c(s) = (s, a2, ..., an) into the geodesic equations
/// (ċ = ∂1, c̈ = 0) at every sample and returns the largest residual. Lines
/// are taken at `trials` evenly strided transverse nodes (all when
/// trials <= 0 or trials >= transverse count).
double lemma1_check(const ConnectionField& gamma, const TubeGrid& grid, int trials = 0);

/// Geodesic-equation residual c̈^h + Γ^h_ij ċ^i ċ^j at one point.
Eigen::VectorXd geodesic_acceleration_residual(const ConnectionField& gamma, const Point& x,
                                               const Point& velocity,
                                               const Point& acceleration);

/// RK4 on the geodesic equations from (x0, v0) up to parameter s_max.
/// Throws LeftDomain once a step leaves the tube hull of `grid`.
Curve geodesic_shoot(const ConnectionField& gamma, const TubeGrid& grid, const Point& x0,
                     const Point& v0, double s_max, double step);

/// Largest geodesic-equation residual along a curve, with ċ and c̈ taken
/// from second-order differences of the sampled positions.
double geodesic_residual(const ConnectionField& gamma, const Curve& curve);

/// (max |g_11 − e|, max |g_1j|) over the grid.
SemigeodesicResidual semigeodesic_check(const MetricField& g, int e, const TubeGrid& grid);

/// max over samples of |g(ċ, ċ) − target|.
double speed_residual(const MetricField& g, const Curve& curve, double target);

/// Curve dump: header "s,x1,...,xn", one row per sample.
void write_curve(std::ostream& out, const Curve& curve);

}  // namespace semigeo
