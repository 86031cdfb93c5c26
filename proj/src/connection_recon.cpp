#include "semigeo/connection_recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "semigeo/error.hpp"
#include "semigeo/parallel.hpp"
#include "semigeo/rk4.hpp"
#include "march.hpp"

namespace semigeo {

namespace {

using detail::DirectionStop;
using detail::reduce_direction;

std::string component_name(int h, int i, int k) {
  return "Gamma^" + std::to_string(h) + "_" + std::to_string(i) + std::to_string(k);
}

// Name the first offending entry of a state vector.
template <typename NameFn>
std::string offending(const Eigen::VectorXd& y, double threshold, NameFn&& name) {
  for (Index c = 0; c < y.size(); ++c) {
    if (!std::isfinite(y[c]) || std::abs(y[c]) > threshold) return name(c);
  }
  return {};
}

}  // namespace

double HypersurfaceConnectionData::value(int h, int i, int j, const Point& x) const {
  if (const ScalarField* f = gamma.find({h, i, j})) return (*f)(x);
  if (const ScalarField* f = gamma.find({h, j, i})) return (*f)(x);
  return 0.0;
}

void HypersurfaceConnectionData::validate(const TubeGrid& grid) const {
  const int n = grid.dim();
  for (const auto& [idx, field] : gamma.entries()) {
    if (idx.size() != 3) throw InvalidInit("connection data needs three indices");
    for (int v : idx) {
      if (v < 1 || v > n) throw InvalidInit("connection data index out of range");
    }
  }
  for (Index t = 0; t < grid.transverse_count(); ++t) {
    const Point x = grid.surface_point(t);
    for (const auto& [idx, field] : gamma.entries()) {
      const double v = field(x);
      if (idx[1] == 1 && idx[2] == 1 && v != 0.0) {
        throw InvalidInit("initial data must satisfy Gamma^h_11 = 0 (" +
                          component_name(idx[0], 1, 1) + ")");
      }
      if (idx[1] < idx[2]) {
        if (const ScalarField* mirror = gamma.find({idx[0], idx[2], idx[1]})) {
          if ((*mirror)(x) != v) {
            throw InvalidInit("initial connection is not symmetric in its lower indices (" +
                              component_name(idx[0], idx[1], idx[2]) + ")");
          }
        }
      }
    }
  }
}

void ConnectionCurvatureSpec::validate(int n) const {
  for (const auto& [idx, field] : A.entries()) {
    if (idx.size() != 3) throw InvalidInit("curvature data needs three indices");
    for (int v : idx) {
      if (v < 1 || v > n) throw InvalidInit("curvature data index out of range");
    }
    if (idx[2] == 1) {
      throw InvalidInit("A^h_i1 components are identically zero and cannot be prescribed");
    }
  }
}

Stage1Result stage1_integrate(const HypersurfaceConnectionData& init,
                              const ConnectionCurvatureSpec& curvature, const ChartSpec& spec,
                              const ReconOptions& options) {
  const TubeGrid grid = build_grid(spec);
  const int n = grid.dim();
  init.validate(grid);
  curvature.validate(n);

  const Index T = grid.transverse_count();
  const Index N1 = grid.x1_count();
  const Index z = grid.zero_index();
  const double h1 = spec.h1;
  const int w = n - 1;
  const Index dim1 = static_cast<Index>(n) * w;
  auto col = [w](int h, int k) { return static_cast<Index>((h - 1) * w + (k - 2)); };

  std::vector<const ScalarField*> forcing(static_cast<std::size_t>(dim1), nullptr);
  for (int h = 1; h <= n; ++h) {
    for (int k = 2; k <= n; ++k) {
      forcing[static_cast<std::size_t>(col(h, k))] = curvature.A.find({h, 1, k});
    }
  }

  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(N1 * T, dim1);
  Eigen::MatrixXd mids = Eigen::MatrixXd::Zero(std::max<Index>(N1 - 1, 0) * T, dim1);
  std::vector<DirectionStop> plus(static_cast<std::size_t>(T)), minus(static_cast<std::size_t>(T));

  auto name = [&](Index c) {
    return component_name(static_cast<int>(c / w) + 1, 1, static_cast<int>(c % w) + 2);
  };

  parallel_for(T, options.threads, [&](Index t) {
    Point x = grid.surface_point(t);
    auto rhs = [&](double x1, const Eigen::VectorXd& y, RkPoint) {
      x[0] = x1;
      Eigen::VectorXd f(dim1);
      for (int h = 1; h <= n; ++h) {
        for (int k = 2; k <= n; ++k) {
          const ScalarField* a = forcing[static_cast<std::size_t>(col(h, k))];
          double v = a ? (*a)(x) : 0.0;
          for (int m = 2; m <= n; ++m) v -= y[col(m, k)] * y[col(h, m)];
          f[col(h, k)] = v;
        }
      }
      return f;
    };

    Eigen::VectorXd y0(dim1);
    for (int h = 1; h <= n; ++h) {
      for (int k = 2; k <= n; ++k) y0[col(h, k)] = init.value(h, 1, k, x);
    }
    samples.row(grid.node(z, t)) = y0.transpose();

    for (int dir : {+1, -1}) {
      DirectionStop& stop = dir > 0 ? plus[static_cast<std::size_t>(t)]
                                    : minus[static_cast<std::size_t>(t)];
      const Index end = dir > 0 ? N1 - 1 : 0;
      Index s = z;
      Eigen::VectorXd y = y0;
      try {
        while (s != end) {
          const double xs = grid.x1()[static_cast<std::size_t>(s)];
          const Eigen::VectorXd next = rk4_step(rhs, xs, y, dir * h1);
          const Eigen::VectorXd mid = rk4_step(rhs, xs, y, 0.5 * dir * h1);
          if (!within_threshold(next, options.blowup_threshold) ||
              !within_threshold(mid, options.blowup_threshold)) {
            stop.cause = ReconStatus::StoppedBlowup;
            stop.component = offending(within_threshold(next, options.blowup_threshold) ? mid : next,
                                       options.blowup_threshold, name);
            stop.message = "solution exceeded the blow-up threshold";
            break;
          }
          const Index interval = dir > 0 ? s : s - 1;
          mids.row(interval * T + t) = mid.transpose();
          s += dir;
          samples.row(grid.node(s, t)) = next.transpose();
          y = next;
        }
      } catch (const EvalError& err) {
        stop.cause = ReconStatus::StoppedError;
        stop.message = err.what();
      }
      stop.reached = s;
    }
  });

  ReconstructionReport report;
  const Index rp = reduce_direction(plus, +1, grid, report);
  const Index rm = reduce_direction(minus, -1, grid, report);

  Stage1Result result;
  TensorTube full = make_connection_tube(grid);
  for (int h = 1; h <= n; ++h) {
    for (int k = 2; k <= n; ++k) full.assign({h, 1, k}, samples.col(col(h, k)));
  }
  result.gamma = full.slice_x1(rm, rp);
  result.midpoint = mids.middleRows(rm * T, (rp - rm) * T);
  report.delta_hat_plus = grid.x1()[static_cast<std::size_t>(rp)];
  report.delta_hat_minus = grid.x1()[static_cast<std::size_t>(rm)];
  report.max_component = result.gamma.max_abs();
  result.report = std::move(report);
  return result;
}

Stage2Result stage2_integrate(const Stage1Result& stage1, const HypersurfaceConnectionData& init,
                              const ConnectionCurvatureSpec& curvature, const ChartSpec& spec,
                              const ReconOptions& options) {
  const TubeGrid requested = build_grid(spec);
  const TubeGrid& grid = stage1.gamma.grid();
  const int n = grid.dim();
  if (requested.dim() != n || requested.axis_nodes(2) != grid.axis_nodes(2) ||
      grid.chart().h1 != spec.h1 || requested.transverse_count() != grid.transverse_count()) {
    throw InvalidSpec("stage 2 must use the grid and step of stage 1");
  }
  for (int axis = 2; axis <= n; ++axis) {
    if (grid.axis_count(axis) < 3) {
      throw GridTooCoarse("stage 2 needs at least 3 transverse nodes on every axis");
    }
  }
  init.validate(grid);
  curvature.validate(n);

  const Index T = grid.transverse_count();
  const Index N1 = grid.x1_count();
  const Index z = grid.zero_index();
  const double h1 = spec.h1;
  const int w = n - 1;
  const Index dim1 = static_cast<Index>(n) * w;
  auto col1 = [w](int h, int k) { return static_cast<Index>((h - 1) * w + (k - 2)); };

  // Pair numbering for 2 ≤ i ≤ k ≤ n.
  std::vector<Index> pair_of(static_cast<std::size_t>(w * w));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 2; i <= n; ++i) {
    for (int k = i; k <= n; ++k) {
      pair_of[static_cast<std::size_t>((i - 2) * w + (k - 2))] = static_cast<Index>(pairs.size());
      pair_of[static_cast<std::size_t>((k - 2) * w + (i - 2))] = static_cast<Index>(pairs.size());
      pairs.emplace_back(i, k);
    }
  }
  const Index P = static_cast<Index>(pairs.size());
  const Index dim2 = static_cast<Index>(n) * P;
  auto col2 = [&](int h, int i, int k) {
    return static_cast<Index>(h - 1) * P + pair_of[static_cast<std::size_t>((i - 2) * w + (k - 2))];
  };

  // Stage-1 samples in stage-1 column order, plus transverse derivatives.
  Eigen::MatrixXd S(N1 * T, dim1);
  for (int h = 1; h <= n; ++h) {
    for (int k = 2; k <= n; ++k) S.col(col1(h, k)) = stage1.gamma.component({h, 1, k});
  }
  const Eigen::MatrixXd& M = stage1.midpoint;
  std::vector<Eigen::MatrixXd> dS(static_cast<std::size_t>(n + 1)), dM(static_cast<std::size_t>(n + 1));
  for (int axis = 2; axis <= n; ++axis) {
    auto& ds = dS[static_cast<std::size_t>(axis)];
    auto& dm = dM[static_cast<std::size_t>(axis)];
    ds.resize(S.rows(), dim1);
    dm.resize(M.rows(), dim1);
    for (Index c = 0; c < dim1; ++c) {
      ds.col(c) = fd_along(S.col(c), grid.axis_count(axis), grid.stride(axis), grid.spacing(axis));
      if (M.rows() > 0) {
        dm.col(c) = fd_along(M.col(c), grid.axis_count(axis), grid.stride(axis), grid.spacing(axis));
      }
    }
  }

  std::vector<const ScalarField*> forcing(static_cast<std::size_t>(dim2), nullptr);
  for (int h = 1; h <= n; ++h) {
    for (const auto& [i, k] : pairs) {
      forcing[static_cast<std::size_t>(col2(h, i, k))] = curvature.A.find({h, i, k});
    }
  }

  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(N1 * T, dim2);
  std::vector<DirectionStop> plus(static_cast<std::size_t>(T)), minus(static_cast<std::size_t>(T));
  auto name = [&](Index c) {
    const auto& [i, k] = pairs[static_cast<std::size_t>(c % P)];
    return component_name(static_cast<int>(c / P) + 1, i, k);
  };

  parallel_for(T, options.threads, [&](Index t) {
    Point x = grid.surface_point(t);
    Index s = z;
    int dir = 1;
    auto rhs = [&](double x1, const Eigen::VectorXd& y, RkPoint where) {
      x[0] = x1;
      const Eigen::MatrixXd* src = &S;
      const std::vector<Eigen::MatrixXd>* dsrc = &dS;
      Index row = 0;
      switch (where) {
        case RkPoint::Start: row = s * T + t; break;
        case RkPoint::End: row = (s + dir) * T + t; break;
        case RkPoint::Mid:
          row = (dir > 0 ? s : s - 1) * T + t;
          src = &M;
          dsrc = &dM;
          break;
      }
      // Γ^h_1m from stage 1 (zero for m = 1).
      auto g1 = [&](int h, int m) { return m == 1 ? 0.0 : (*src)(row, col1(h, m)); };
      auto g2 = [&](int h, int i, int k) { return y[col2(h, i, k)]; };
      Eigen::VectorXd f(dim2);
      for (int h = 1; h <= n; ++h) {
        for (const auto& [i, k] : pairs) {
          const ScalarField* a = forcing[static_cast<std::size_t>(col2(h, i, k))];
          double v = a ? (*a)(x) : 0.0;
          v += (*dsrc)[static_cast<std::size_t>(k)](row, col1(h, i));
          for (int m = 1; m <= n; ++m) {
            v -= g2(m, i, k) * g1(h, m);
            if (!options.literal_stage2) {
              const double gamma_hmk = m == 1 ? g1(h, k) : g2(h, m, k);
              v += g1(m, i) * gamma_hmk;
            }
          }
          f[col2(h, i, k)] = v;
        }
      }
      return f;
    };

    Eigen::VectorXd y0(dim2);
    for (int h = 1; h <= n; ++h) {
      for (const auto& [i, k] : pairs) y0[col2(h, i, k)] = init.value(h, i, k, x);
    }
    samples.row(grid.node(z, t)) = y0.transpose();

    for (int d : {+1, -1}) {
      dir = d;
      DirectionStop& stop = dir > 0 ? plus[static_cast<std::size_t>(t)]
                                    : minus[static_cast<std::size_t>(t)];
      const Index end = dir > 0 ? N1 - 1 : 0;
      s = z;
      Eigen::VectorXd y = y0;
      try {
        while (s != end) {
          const double xs = grid.x1()[static_cast<std::size_t>(s)];
          const Eigen::VectorXd next = rk4_step(rhs, xs, y, dir * h1);
          if (!within_threshold(next, options.blowup_threshold)) {
            stop.cause = ReconStatus::StoppedBlowup;
            stop.component = offending(next, options.blowup_threshold, name);
            stop.message = "solution exceeded the blow-up threshold";
            break;
          }
          s += dir;
          samples.row(grid.node(s, t)) = next.transpose();
          y = next;
        }
      } catch (const EvalError& err) {
        stop.cause = ReconStatus::StoppedError;
        stop.message = err.what();
      }
      stop.reached = s;
    }
  });

  ReconstructionReport report;
  report.status = stage1.report.status;
  report.diagnostics = stage1.report.diagnostics;
  const Index rp = reduce_direction(plus, +1, grid, report);
  const Index rm = reduce_direction(minus, -1, grid, report);

  TensorTube full = make_connection_tube(grid);
  for (int h = 1; h <= n; ++h) {
    for (const auto& [i, k] : pairs) full.assign({h, i, k}, samples.col(col2(h, i, k)));
  }
  Stage2Result result;
  result.gamma = full.slice_x1(rm, rp);
  report.delta_hat_plus = grid.x1()[static_cast<std::size_t>(rp)];
  report.delta_hat_minus = grid.x1()[static_cast<std::size_t>(rm)];
  report.max_component = result.gamma.max_abs();
  result.report = std::move(report);
  return result;
}

ConnectionReconstruction reconstruct_connection(const HypersurfaceConnectionData& init,
                                                const ConnectionCurvatureSpec& curvature,
                                                const ChartSpec& spec,
                                                const ReconOptions& options) {
  const Stage1Result s1 = stage1_integrate(init, curvature, spec, options);
  Stage2Result s2 = stage2_integrate(s1, init, curvature, spec, options);

  const TubeGrid& g1 = s1.gamma.grid();
  const TubeGrid& g2 = s2.gamma.grid();
  const int n = g2.dim();
  const Index T = g2.transverse_count();
  const Index offset = (g1.zero_index() - g2.zero_index()) * T;

  TensorTube gamma = s2.gamma;
  for (int h = 1; h <= n; ++h) {
    for (int k = 2; k <= n; ++k) {
      gamma.assign({h, 1, k}, s1.gamma.component({h, 1, k}).segment(offset, g2.node_count()));
    }
  }
  s2.report.max_component = gamma.max_abs();
  return {ConnectionField(std::move(gamma)), std::move(s2.report)};
}

}  // namespace semigeo
