#pragma once

// Tube-domain lattices: an x1 interval times a transverse box, sampled on a
// uniform tensor-product lattice. Axes are numbered 1..n like coordinates.
//
// Node numbering is row-major with x1 slowest and xn fastest, so that
// node = i1 * transverse_count() + t.

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace semigeo {

using Index = Eigen::Index;
using Point = Eigen::VectorXd;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ChartSpec {
  int n = 2;
  double x1_min = 0.0;
  double x1_max = 1.0;
  /// Box for x2..xn; empty means the unit cube.
  std::vector<Interval> transverse_box;
  /// Nodes per transverse axis; a single entry applies to every axis.
  std::vector<int> transverse_res{5};
  double h1 = 1e-2;
  int e = 1;

  /// Throws InvalidSpec when an invariant does not hold.
  void validate() const;

  Interval transverse_interval(int axis) const;
  int transverse_nodes(int axis) const;

  friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

class TubeGrid {
 public:
  TubeGrid() = default;
  explicit TubeGrid(const ChartSpec& spec);

  int dim() const { return spec_.n; }
  const ChartSpec& chart() const { return spec_; }

  const std::vector<double>& x1() const { return axes_[0]; }
  Index x1_count() const { return static_cast<Index>(axes_[0].size()); }
  /// Position of x1 = 0 among the x1 samples.
  Index zero_index() const { return zero_; }

  const std::vector<double>& axis_nodes(int axis) const { return axes_[axis - 1]; }
  Index axis_count(int axis) const {
    return static_cast<Index>(axes_[axis - 1].size());
  }
  double spacing(int axis) const { return spacing_[axis - 1]; }
  Index stride(int axis) const { return strides_[axis - 1]; }

  Index transverse_count() const { return strides_[0]; }
  Index node_count() const { return x1_count() * transverse_count(); }
  Index node(Index i1, Index t) const { return i1 * transverse_count() + t; }

  Index axis_position(Index node, int axis) const {
    return (node / strides_[axis - 1]) % axis_count(axis);
  }
  Point coords(Index node) const;
  /// Hypersurface point (0, x2, ..., xn) of transverse node t.
  Point surface_point(Index t) const;

  /// Sub-grid holding x1 samples first..last (inclusive); 0 must stay inside.
  TubeGrid slice_x1(Index first, Index last) const;

  friend bool operator==(const TubeGrid& a, const TubeGrid& b) {
    return a.spec_ == b.spec_ && a.axes_ == b.axes_;
  }

 private:
  void finish_layout();

  ChartSpec spec_;
  std::vector<std::vector<double>> axes_;
  std::vector<double> spacing_;
  std::vector<Index> strides_;
  Index zero_ = 0;
};

TubeGrid build_grid(const ChartSpec& spec);

/// Sample f(point) at every node.
template <typename F>
Eigen::VectorXd sample(const TubeGrid& grid, F&& f) {
  Eigen::VectorXd out(grid.node_count());
  for (Index node = 0; node < grid.node_count(); ++node) {
    out[node] = f(grid.coords(node));
  }
  return out;
}

/// First partial derivative along `axis` (1..n). Second-order central
/// differences inside, second-order one-sided stencils on the boundary.
Eigen::VectorXd fd_partial(const Eigen::VectorXd& values, int axis,
                           const TubeGrid& grid);

/// Second partial derivative along `axis`: 3-point interior, 4-point
/// one-sided boundary stencils, all second order. Needs 4 nodes on the axis.
Eigen::VectorXd fd_second(const Eigen::VectorXd& values, int axis,
                          const TubeGrid& grid);

/// Strided 1-D first difference over a flat array: entries k*stride apart
/// within blocks of count*stride belong to one line.
Eigen::VectorXd fd_along(const Eigen::VectorXd& values, Index count,
                         Index stride, double spacing);

/// Multilinear interpolation; throws OutOfDomain outside the lattice hull.
double interpolate(const Eigen::VectorXd& values, const TubeGrid& grid,
                   const Point& point);

bool inside_hull(const TubeGrid& grid, const Point& point);

}  // namespace semigeo
