#include "semigeo/metric_recon.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "semigeo/parallel.hpp"
#include "semigeo/rk4.hpp"
#include "march.hpp"

namespace semigeo {

namespace {

using detail::DirectionStop;
using detail::reduce_direction;

const ScalarField* find_sym(const FieldSet& set, int i, int j) {
  if (const ScalarField* f = set.find({i, j})) return f;
  return set.find({j, i});
}

void check_keys(const FieldSet& set, int n, const char* what) {
  for (const auto& [idx, field] : set.entries()) {
    if (idx.size() != 2 || idx[0] < 2 || idx[1] < 2 || idx[0] > n || idx[1] > n) {
      throw InvalidInit(std::string(what) + " components must be indexed by i, j in 2..n");
    }
  }
}

void check_symmetric_at(const FieldSet& set, const Point& x, const char* what) {
  for (const auto& [idx, field] : set.entries()) {
    if (idx[0] >= idx[1]) continue;
    if (const ScalarField* mirror = set.find({idx[1], idx[0]})) {
      if ((*mirror)(x) != field(x)) {
        throw InvalidInit(std::string(what) + " is not symmetric (" + std::to_string(idx[0]) +
                          "," + std::to_string(idx[1]) + ")");
      }
    }
  }
}

}  // namespace

MetricReconstruction reconstruct_metric(const HypersurfaceMetricData& init,
                                        const MetricCurvatureSpec& curvature, int e,
                                        const ChartSpec& spec, const ReconOptions& options) {
  if (e != 1 && e != -1) throw InvalidSpec("e must be +1 or -1");
  ChartSpec chart = spec;
  chart.e = e;
  const TubeGrid grid = build_grid(chart);
  const int n = grid.dim();
  const int w = n - 1;
  check_keys(init.g, n, "initial metric");
  check_keys(init.G, n, "initial metric derivative");
  check_keys(curvature.a, n, "curvature");

  const Index T = grid.transverse_count();
  const Index N1 = grid.x1_count();
  const Index z = grid.zero_index();
  const double h1 = chart.h1;

  for (Index t = 0; t < T; ++t) {
    const Point x = grid.surface_point(t);
    check_symmetric_at(init.g, x, "initial metric");
    check_symmetric_at(init.G, x, "initial metric derivative");
  }
  for (Index node = 0; node < grid.node_count(); ++node) {
    check_symmetric_at(curvature.a, grid.coords(node), "prescribed curvature");
  }

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < w; ++i) {
    for (int j = i; j < w; ++j) pairs.emplace_back(i, j);
  }
  const Index P = static_cast<Index>(pairs.size());
  std::vector<const ScalarField*> a_fields;
  for (const auto& [i, j] : pairs) a_fields.push_back(find_sym(curvature.a, i + 2, j + 2));

  auto unpack = [&](const Eigen::VectorXd& y, Index offset) {
    Eigen::MatrixXd m(w, w);
    for (Index p = 0; p < P; ++p) {
      const auto& [i, j] = pairs[static_cast<std::size_t>(p)];
      m(i, j) = m(j, i) = y[offset + p];
    }
    return m;
  };

  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(N1 * T, P);
  std::vector<DirectionStop> plus(static_cast<std::size_t>(T)), minus(static_cast<std::size_t>(T));

  parallel_for(T, options.threads, [&](Index t) {
    Point x = grid.surface_point(t);
    Eigen::VectorXd y0(2 * P);
    for (Index p = 0; p < P; ++p) {
      const auto& [i, j] = pairs[static_cast<std::size_t>(p)];
      const ScalarField* g = find_sym(init.g, i + 2, j + 2);
      const ScalarField* G = find_sym(init.G, i + 2, j + 2);
      y0[p] = g ? (*g)(x) : 0.0;
      y0[P + p] = G ? (*G)(x) : 0.0;
    }
    const Eigen::MatrixXd g0 = unpack(y0, 0);
    const double det0 = small_determinant(g0);
    if (!(std::abs(det0) >= options.degeneracy_tol)) {
      throw InvalidInit("initial metric is degenerate at a hypersurface node");
    }
    const double stop_tol = options.degeneracy_tol * std::abs(det0);
    const double sign0 = det0 > 0.0 ? 1.0 : -1.0;
    // det g is continuous along the solution, so a sign flip means it passed
    // through zero somewhere in the step.
    auto nondegenerate = [&](const Eigen::VectorXd& y) {
      return sign0 * small_determinant(unpack(y, 0)) >= stop_tol;
    };

    auto rhs = [&](double x1, const Eigen::VectorXd& y, RkPoint) {
      if (!nondegenerate(y)) throw DegenerateMetric("degenerate transverse metric", {}, 0.0);
      x[0] = x1;
      Eigen::MatrixXd a(w, w);
      for (Index p = 0; p < P; ++p) {
        const auto& [i, j] = pairs[static_cast<std::size_t>(p)];
        const ScalarField* f = a_fields[static_cast<std::size_t>(p)];
        a(i, j) = a(j, i) = f ? (*f)(x) : 0.0;
      }
      const auto rates = metric_rhs<double>(unpack(y, 0), unpack(y, P), a, stop_tol);
      Eigen::VectorXd f(2 * P);
      for (Index p = 0; p < P; ++p) {
        const auto& [i, j] = pairs[static_cast<std::size_t>(p)];
        f[p] = rates.dg(i, j);
        f[P + p] = rates.dG(i, j);
      }
      return f;
    };

    samples.row(grid.node(z, t)) = y0.head(P).transpose();
    for (int dir : {+1, -1}) {
      DirectionStop& stop = dir > 0 ? plus[static_cast<std::size_t>(t)]
                                    : minus[static_cast<std::size_t>(t)];
      const Index end = dir > 0 ? N1 - 1 : 0;
      Index s = z;
      Eigen::VectorXd y = y0;
      try {
        while (s != end) {
          const double xs = grid.x1()[static_cast<std::size_t>(s)];
          // d det g / dx1 = det g tr(g^-1 G); stop when the linear prediction
          // reaches the tolerance within this step.
          const Eigen::MatrixXd gs = unpack(y, 0);
          const double dets = small_determinant(gs);
          const double trace = (small_inverse(gs, dets) * unpack(y, P)).trace();
          if (!(sign0 * dets * (1.0 + dir * h1 * trace) >= stop_tol)) {
            stop.cause = ReconStatus::StoppedDegenerate;
            stop.message = "metric determinant predicted to vanish within one step";
            break;
          }
          const Eigen::VectorXd next = rk4_step(rhs, xs, y, dir * h1);
          if (!within_threshold(next, options.blowup_threshold)) {
            stop.cause = ReconStatus::StoppedBlowup;
            stop.message = "solution exceeded the blow-up threshold";
            break;
          }
          if (!nondegenerate(next)) {
            stop.cause = ReconStatus::StoppedDegenerate;
            stop.message = "metric determinant fell below tolerance";
            break;
          }
          s += dir;
          samples.row(grid.node(s, t)) = next.head(P).transpose();
          y = next;
        }
      } catch (const DegenerateMetric&) {
        stop.cause = ReconStatus::StoppedDegenerate;
        stop.message = "metric determinant fell below tolerance";
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

  TensorTube g = make_metric_tube(grid);
  g.assign({1, 1}, Eigen::VectorXd::Constant(grid.node_count(), e));
  for (Index p = 0; p < P; ++p) {
    const auto& [i, j] = pairs[static_cast<std::size_t>(p)];
    g.assign({i + 2, j + 2}, samples.col(p));
  }
  g = g.slice_x1(rm, rp);
  report.delta_hat_plus = grid.x1()[static_cast<std::size_t>(rp)];
  report.delta_hat_minus = grid.x1()[static_cast<std::size_t>(rm)];
  report.max_component = g.max_abs();
  return {MetricField(std::move(g), e), std::move(report)};
}

}  // namespace semigeo
