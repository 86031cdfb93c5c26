#include "semigeo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semigeo/error.hpp"

namespace semigeo {

namespace {

// Relative slack used when snapping x1 range ends onto multiples of h1.
constexpr double kSnap = 1e-9;

}  // namespace

Interval ChartSpec::transverse_interval(int axis) const {
  if (transverse_box.empty()) return Interval{0.0, 1.0};
  return transverse_box[static_cast<std::size_t>(axis - 2)];
}

int ChartSpec::transverse_nodes(int axis) const {
  if (transverse_res.size() == 1) return transverse_res.front();
  return transverse_res[static_cast<std::size_t>(axis - 2)];
}

void ChartSpec::validate() const {
  if (n < 2) throw InvalidSpec("dimension n must be at least 2");
  if (!(std::isfinite(x1_min) && std::isfinite(x1_max)) || x1_min > 0.0 ||
      x1_max < 0.0) {
    throw InvalidSpec("x1 range must satisfy x1_min <= 0 <= x1_max");
  }
  if (!(h1 > 0.0) || !std::isfinite(h1)) throw InvalidSpec("h1 must be > 0");
  if (e != 1 && e != -1) throw InvalidSpec("e must be +1 or -1");
  if (!transverse_box.empty() &&
      transverse_box.size() != static_cast<std::size_t>(n - 1)) {
    throw InvalidSpec("transverse_box needs one interval per axis x2..xn");
  }
  for (const auto& iv : transverse_box) {
    if (!(iv.lo < iv.hi)) throw InvalidSpec("empty transverse interval");
  }
  if (transverse_res.size() != 1 &&
      transverse_res.size() != static_cast<std::size_t>(n - 1)) {
    throw InvalidSpec("transverse_res needs 1 or n-1 entries");
  }
  for (int r : transverse_res) {
    if (r < 3) {
      throw InvalidSpec("transverse_res must be >= 3 on every axis (got " +
                        std::to_string(r) + ")");
    }
  }
}

TubeGrid::TubeGrid(const ChartSpec& spec) : spec_(spec) {
  spec_.validate();
  const double h = spec_.h1;
  const auto k_min = static_cast<long long>(std::ceil(spec_.x1_min / h - kSnap));
  const auto k_max = static_cast<long long>(std::floor(spec_.x1_max / h + kSnap));
  axes_.assign(static_cast<std::size_t>(spec_.n), {});
  auto& x1 = axes_[0];
  for (long long k = k_min; k <= k_max; ++k) {
    x1.push_back(static_cast<double>(k) * h);
  }
  zero_ = static_cast<Index>(-k_min);
  for (int axis = 2; axis <= spec_.n; ++axis) {
    const Interval iv = spec_.transverse_interval(axis);
    const int count = spec_.transverse_nodes(axis);
    auto& nodes = axes_[static_cast<std::size_t>(axis - 1)];
    nodes.resize(static_cast<std::size_t>(count));
    const double step = (iv.hi - iv.lo) / (count - 1);
    for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = iv.lo + i * step;
    nodes.back() = iv.hi;
  }
  finish_layout();
}

void TubeGrid::finish_layout() {
  const int n = spec_.n;
  spacing_.assign(static_cast<std::size_t>(n), 0.0);
  strides_.assign(static_cast<std::size_t>(n), 1);
  spacing_[0] = spec_.h1;
  for (int axis = 2; axis <= n; ++axis) {
    const Interval iv = spec_.transverse_interval(axis);
    spacing_[static_cast<std::size_t>(axis - 1)] =
        (iv.hi - iv.lo) / (spec_.transverse_nodes(axis) - 1);
  }
  Index stride = 1;
  for (int axis = n; axis >= 1; --axis) {
    strides_[static_cast<std::size_t>(axis - 1)] = stride;
    if (axis >= 2) stride *= axis_count(axis);
  }
  // strides_[0] is the x1 stride, i.e. the transverse node count.
}

Point TubeGrid::coords(Index node) const {
  Point x(spec_.n);
  for (int axis = 1; axis <= spec_.n; ++axis) {
    x[axis - 1] = axes_[static_cast<std::size_t>(axis - 1)]
                       [static_cast<std::size_t>(axis_position(node, axis))];
  }
  return x;
}

Point TubeGrid::surface_point(Index t) const {
  Point x = coords(t);
  x[0] = 0.0;
  return x;
}

TubeGrid TubeGrid::slice_x1(Index first, Index last) const {
  if (first < 0 || last >= x1_count() || first > zero_ || last < zero_) {
    throw InvalidSpec("x1 slice must lie inside the grid and contain 0");
  }
  TubeGrid out = *this;
  out.axes_[0].assign(axes_[0].begin() + first, axes_[0].begin() + last + 1);
  out.spec_.x1_min = out.axes_[0].front();
  out.spec_.x1_max = out.axes_[0].back();
  out.zero_ = zero_ - first;
  return out;
}

TubeGrid build_grid(const ChartSpec& spec) { return TubeGrid(spec); }

Eigen::VectorXd fd_along(const Eigen::VectorXd& values, Index count,
                         Index stride, double spacing) {
  if (count < 3) {
    throw GridTooCoarse("finite differences need at least 3 nodes per axis");
  }
  const double inv2h = 1.0 / (2.0 * spacing);
  Eigen::VectorXd out(values.size());
  // stencils in difference form, so constants give exactly zero
  for (Index idx = 0; idx < values.size(); ++idx) {
    const Index p = (idx / stride) % count;
    if (p == 0 || p == count - 1) {
      const Index s = p == 0 ? stride : -stride;
      const double d1 = values[idx + s] - values[idx];
      const double d2 = values[idx + 2 * s] - values[idx + s];
      out[idx] = (p == 0 ? 1.0 : -1.0) * (3.0 * d1 - d2) * inv2h;
    } else {
      out[idx] = (values[idx + stride] - values[idx - stride]) * inv2h;
    }
  }
  return out;
}

Eigen::VectorXd fd_partial(const Eigen::VectorXd& values, int axis,
                           const TubeGrid& grid) {
  if (axis < 1 || axis > grid.dim()) throw InvalidSpec("axis out of range");
  if (values.size() != grid.node_count()) {
    throw InvalidSpec("value count does not match the grid");
  }
  return fd_along(values, grid.axis_count(axis), grid.stride(axis),
                  grid.spacing(axis));
}

Eigen::VectorXd fd_second(const Eigen::VectorXd& values, int axis,
                          const TubeGrid& grid) {
  if (axis < 1 || axis > grid.dim()) throw InvalidSpec("axis out of range");
  if (values.size() != grid.node_count()) {
    throw InvalidSpec("value count does not match the grid");
  }
  const Index count = grid.axis_count(axis);
  const Index s = grid.stride(axis);
  if (count < 4) {
    throw GridTooCoarse("second differences need at least 4 nodes per axis");
  }
  const double h = grid.spacing(axis);
  const double inv_h2 = 1.0 / (h * h);
  Eigen::VectorXd out(values.size());
  for (Index idx = 0; idx < values.size(); ++idx) {
    const Index p = (idx / s) % count;
    if (p == 0 || p == count - 1) {
      const Index q = p == 0 ? s : -s;
      const double d1 = values[idx] - values[idx + q];
      const double d2 = values[idx + q] - values[idx + 2 * q];
      const double d3 = values[idx + 2 * q] - values[idx + 3 * q];
      out[idx] = (2.0 * d1 - 3.0 * d2 + d3) * inv_h2;
    } else {
      out[idx] = ((values[idx + s] - values[idx]) - (values[idx] - values[idx - s])) * inv_h2;
    }
  }
  return out;
}

bool inside_hull(const TubeGrid& grid, const Point& point) {
  if (point.size() != grid.dim()) return false;
  for (int axis = 1; axis <= grid.dim(); ++axis) {
    const auto& nodes = grid.axis_nodes(axis);
    const double slack = 1e-12 * std::max(1.0, nodes.back() - nodes.front());
    const double v = point[axis - 1];
    if (!(v >= nodes.front() - slack && v <= nodes.back() + slack)) return false;
  }
  return true;
}

double interpolate(const Eigen::VectorXd& values, const TubeGrid& grid,
                   const Point& point) {
  if (!inside_hull(grid, point)) {
    throw OutOfDomain("interpolation point outside the grid hull");
  }
  const int n = grid.dim();
  std::vector<Index> cell(static_cast<std::size_t>(n));
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int axis = 1; axis <= n; ++axis) {
    const auto& nodes = grid.axis_nodes(axis);
    const Index count = grid.axis_count(axis);
    const auto a = static_cast<std::size_t>(axis - 1);
    if (count == 1) {
      cell[a] = 0;
      weight[a] = 0.0;
      continue;
    }
    const double v = std::clamp(point[axis - 1], nodes.front(), nodes.back());
    auto c = static_cast<Index>(
        std::upper_bound(nodes.begin(), nodes.end(), v) - nodes.begin()) - 1;
    c = std::clamp<Index>(c, 0, count - 2);
    const double lo = nodes[static_cast<std::size_t>(c)];
    const double hi = nodes[static_cast<std::size_t>(c + 1)];
    cell[a] = c;
    weight[a] = (v - lo) / (hi - lo);
  }
  double result = 0.0;
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    double w = 1.0;
    Index node = 0;
    for (int axis = 1; axis <= n; ++axis) {
      const auto a = static_cast<std::size_t>(axis - 1);
      const bool upper = (corner >> a) & 1u;
      const double wa = upper ? weight[a] : 1.0 - weight[a];
      if (wa == 0.0) {
        w = 0.0;
        break;
      }
      w *= wa;
      node += (cell[a] + (upper ? 1 : 0)) * grid.stride(axis);
    }
    if (w != 0.0) result += w * values[node];
  }
  return result;
}

}  // namespace semigeo
