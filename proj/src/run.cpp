#include "semigeo/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "semigeo/chart_check.hpp"
#include "semigeo/connection_recon.hpp"
#include "semigeo/curvature.hpp"
#include "semigeo/metric_recon.hpp"
#include "semigeo/report.hpp"
#include "semigeo/tensor_io.hpp"

namespace semigeo {

namespace {

using Extras = std::vector<std::pair<std::string, std::string>>;

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  body(out);
  if (!out) throw Error("failed writing " + path.string());
}

void write_report_file(const std::filesystem::path& dir, Mode mode,
                       const ReconstructionReport& report, const Extras& extras) {
  write_file(dir / "report.txt", [&](std::ostream& out) {
    out << "mode: " << to_string(mode) << '\n';
    write_report(out, report);
    for (const auto& [k, v] : extras) out << k << ": " << v << '\n';
  });
}

ReconstructionReport full_range_report(const TubeGrid& grid, double max_component) {
  ReconstructionReport r;
  r.delta_hat_minus = grid.x1().front();
  r.delta_hat_plus = grid.x1().back();
  r.max_component = max_component;
  return r;
}

MetricField metric_from(const FieldSet& g, int n, int e) {
  return MetricField(n, e, [g](int i, int j, const Point& x) { return g.value({i, j}, x); });
}

ConnectionField connection_from(const FieldSet& gamma, int n) {
  return ConnectionField(
      n, [gamma](int h, int i, int j, const Point& x) { return gamma.value({h, i, j}, x); });
}

ReconOptions options_for(const RunConfig& cfg, int threads) {
  ReconOptions o;
  o.blowup_threshold = cfg.tolerances.blowup;
  o.degeneracy_tol = cfg.tolerances.degeneracy;
  o.threads = threads;
  return o;
}

// Same x1 range, doubled x1 step.
TubeGrid coarse_grid(const TubeGrid& fine) {
  ChartSpec c = fine.chart();
  c.x1_min = fine.x1().front();
  c.x1_max = fine.x1().back();
  c.h1 *= 2.0;
  return build_grid(c);
}

// Fine x1 index matching a coarse x1 sample.
Index fine_index(const TubeGrid& fine, double x1) {
  return static_cast<Index>(std::llround((x1 - fine.x1().front()) / fine.chart().h1));
}

// Richardson estimate of the discretisation error in `fine`, from the same
// quantity computed on a grid with twice the x1 step.
double richardson(const TubeGrid& fine, const TubeGrid& coarse,
                  const std::function<double(Index fine_node, Index coarse_node)>& gap) {
  const Index T = fine.transverse_count();
  double worst = 0.0;
  for (Index i = 0; i < coarse.x1_count(); ++i) {
    const Index f = fine_index(fine, coarse.x1()[static_cast<std::size_t>(i)]);
    for (Index t = 0; t < T; ++t) worst = std::max(worst, gap(fine.node(f, t), coarse.node(i, t)));
  }
  return worst / 3.0;
}

// |R_1ij1 − a_ij| over nodes, i ≤ j.
double metric_curvature_gap(const TensorTube& r, const FieldSet& a) {
  const TubeGrid& grid = r.grid();
  const int n = grid.dim();
  double worst = 0.0;
  for (Index node = 0; node < grid.node_count(); ++node) {
    const Point x = grid.coords(node);
    for (int i = 2; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        worst = std::max(worst, std::abs(r.at({i, j}, node) - a.value({i, j}, x)));
      }
    }
  }
  return worst;
}

// |R^h_i1k − A^h_ik| over nodes, i ≤ k, k ≥ 2.
double connection_curvature_gap(const TensorTube& r, const FieldSet& A) {
  const TubeGrid& grid = r.grid();
  const int n = grid.dim();
  double worst = 0.0;
  for (Index node = 0; node < grid.node_count(); ++node) {
    const Point x = grid.coords(node);
    for (int h = 1; h <= n; ++h) {
      for (int k = 2; k <= n; ++k) {
        for (int i = 1; i <= k; ++i) {
          worst = std::max(worst, std::abs(r.at({h, i, 1, k}, node) - A.value({h, i, k}, x)));
        }
      }
    }
  }
  return worst;
}

std::string real(double v) { return format_real(v); }

bool residual_passes(double residual, double estimate, double tol) {
  const double allowed = std::isfinite(estimate) ? std::max(tol, 10.0 * estimate) : tol;
  return residual <= allowed;
}

int finish(const ReconstructionReport& report, bool within_tolerance) {
  if (!report.complete()) return kExitNumericalStop;
  return within_tolerance ? kExitOk : kExitAboveTolerance;
}

int run_forward(const RunConfig& cfg, const std::filesystem::path& dir) {
  const TubeGrid grid = build_grid(cfg.chart);
  const int n = grid.dim();
  Extras extras;
  std::vector<TensorTube> curvature;
  if (cfg.has("g")) {
    const MetricField g = metric_from(cfg.family("g"), n, cfg.chart.e);
    const TensorTube g_tube = g.on_grid(grid);
    const ChristoffelSymbols chr =
        christoffel_from_metric(g, grid, cfg.tolerances.degeneracy);
    const TensorTube gamma = *chr.second_kind.tube();
    curvature.push_back(curvature13(chr.second_kind, grid));
    const SemigeodesicResidual semi = semigeodesic_residual(g_tube, cfg.chart.e);
    extras.emplace_back("semigeodesic_g11", real(semi.g11));
    extras.emplace_back("semigeodesic_g1j", real(semi.g1j));
    if (std::max(semi.g11, semi.g1j) <= kDefaultSemigeodesicTol) {
      const LoweredCurvature lowered = lower_and_check_identities(g, curvature.front());
      extras.emplace_back("identity_residual", real(lowered.max_residual));
      curvature.push_back(curvature04_semigeo(g, grid, kDefaultSemigeodesicTol,
                                              cfg.tolerances.degeneracy));
    }
    write_file(dir / "metric.csv", [&](std::ostream& out) { write_dump(out, g_tube); });
    write_file(dir / "connection.csv", [&](std::ostream& out) { write_dump(out, gamma); });
  } else {
    const ConnectionField gamma = connection_from(cfg.family("Gamma"), n);
    const TensorTube tube = gamma.on_grid(grid);
    curvature.push_back(curvature13(ConnectionField(tube), grid));
    write_file(dir / "connection.csv", [&](std::ostream& out) { write_dump(out, tube); });
  }
  std::vector<const TensorTube*> ptrs;
  for (const auto& t : curvature) ptrs.push_back(&t);
  write_file(dir / "curvature.csv", [&](std::ostream& out) { write_dump(out, ptrs); });
  const ReconstructionReport report = full_range_report(grid, curvature.front().max_abs());
  write_report_file(dir, cfg.mode, report, extras);
  return kExitOk;
}

int run_metric(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  HypersurfaceMetricData init{cfg.family("gtilde"), cfg.family("Gtilde")};
  MetricCurvatureSpec a{cfg.family("a")};
  const MetricReconstruction rec =
      reconstruct_metric(init, a, cfg.chart.e, cfg.chart, options_for(cfg, threads));
  const TensorTube& g = *rec.metric.tube();
  write_file(dir / "metric.csv", [&](std::ostream& out) { write_dump(out, g); });
  Extras extras;
  bool ok = true;

  if (cfg.mode == Mode::RoundtripMetric) try {
    const TubeGrid& grid = g.grid();
    const double tol = cfg.tolerances.roundtrip;
    if (cfg.has("gexact")) {
      double max_error = 0.0;
      const FieldSet& exact = cfg.family("gexact");
      for (Index node = 0; node < grid.node_count(); ++node) {
        const Point x = grid.coords(node);
        for (int i = 2; i <= grid.dim(); ++i) {
          for (int j = i; j <= grid.dim(); ++j) {
            max_error = std::max(max_error, std::abs(g.at({i, j}, node) - exact.value({i, j}, x)));
          }
        }
      }
      extras.emplace_back("max_error", real(max_error));
      ok = ok && max_error <= tol;
    }
    const SemigeodesicResidual semi = semigeodesic_check(rec.metric, cfg.chart.e, grid);
    extras.emplace_back("semigeodesic_g11", real(semi.g11));
    extras.emplace_back("semigeodesic_g1j", real(semi.g1j));

    const ChristoffelSymbols chr =
        christoffel_from_metric(rec.metric, grid, cfg.tolerances.degeneracy);
    const TensorTube r13 = curvature13(chr.second_kind, grid);
    const LoweredCurvature lowered = lower_and_check_identities(rec.metric, r13);
    const TensorTube r04 =
        curvature04_semigeo(rec.metric, grid, kDefaultSemigeodesicTol, cfg.tolerances.degeneracy);
    const double residual = metric_curvature_gap(r04, a.a);
    double estimate = std::numeric_limits<double>::quiet_NaN();
    try {
      const TubeGrid coarse = coarse_grid(grid);
      const TensorTube r04c = curvature04_semigeo(rec.metric, coarse, kDefaultSemigeodesicTol,
                                                  cfg.tolerances.degeneracy);
      estimate = richardson(grid, coarse, [&](Index f, Index c) {
        double gap = 0.0;
        for (int i = 2; i <= grid.dim(); ++i) {
          for (int j = i; j <= grid.dim(); ++j) {
            gap = std::max(gap, std::abs(r04.at({i, j}, f) - r04c.at({i, j}, c)));
          }
        }
        return gap;
      });
    } catch (const GridTooCoarse&) {
    } catch (const InvalidSpec&) {
    }
    extras.emplace_back("identity_residual", real(lowered.max_residual));
    extras.emplace_back("curvature_residual", real(residual));
    extras.emplace_back("curvature_residual_estimate", real(estimate));
    ok = ok && residual_passes(residual, estimate, tol);

    write_file(dir / "connection.csv",
               [&](std::ostream& out) { write_dump(out, *chr.second_kind.tube()); });
    write_file(dir / "curvature.csv",
               [&](std::ostream& out) { write_dump(out, {&r13, &r04}); });
  } catch (const Error& e) {
    extras.emplace_back("oracle_error", e.what());
    ok = false;
  }
  write_report_file(dir, cfg.mode, rec.report, extras);
  return finish(rec.report, ok);
}

int run_connection(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  HypersurfaceConnectionData init{cfg.family("Gammatilde")};
  ConnectionCurvatureSpec A{cfg.family("A")};
  const ConnectionReconstruction rec =
      reconstruct_connection(init, A, cfg.chart, options_for(cfg, threads));
  const TensorTube& gamma = *rec.connection.tube();
  write_file(dir / "connection.csv", [&](std::ostream& out) { write_dump(out, gamma); });
  Extras extras;
  bool ok = true;

  if (cfg.mode == Mode::RoundtripConnection) try {
    const TubeGrid& grid = gamma.grid();
    const double tol = cfg.tolerances.roundtrip;
    if (cfg.has("Gammaexact")) {
      const FieldSet& exact = cfg.family("Gammaexact");
      double max_error = 0.0;
      for (Index node = 0; node < grid.node_count(); ++node) {
        const Point x = grid.coords(node);
        for (const IndexTuple& idx : gamma.all_tuples()) {
          max_error = std::max(max_error, std::abs(gamma.at(idx, node) - exact.value(idx, x)));
        }
      }
      extras.emplace_back("max_error", real(max_error));
      ok = ok && max_error <= tol;
    }
    extras.emplace_back("pre_semigeodesic_residual",
                        real(pre_semigeodesic_residual(rec.connection, grid)));
    const TensorTube r13 = curvature13(rec.connection, grid);
    const double residual = connection_curvature_gap(r13, A.A);
    double estimate = std::numeric_limits<double>::quiet_NaN();
    try {
      const TubeGrid coarse = coarse_grid(grid);
      const TensorTube r13c = curvature13(rec.connection, coarse);
      const std::vector<IndexTuple> tuples = r13.all_tuples();
      estimate = richardson(grid, coarse, [&](Index f, Index c) {
        double gap = 0.0;
        for (const IndexTuple& idx : tuples) {
          gap = std::max(gap, std::abs(r13.at(idx, f) - r13c.at(idx, c)));
        }
        return gap;
      });
    } catch (const GridTooCoarse&) {
    } catch (const InvalidSpec&) {
    }
    extras.emplace_back("curvature_residual", real(residual));
    extras.emplace_back("curvature_residual_estimate", real(estimate));
    ok = ok && residual_passes(residual, estimate, tol);
    write_file(dir / "curvature.csv", [&](std::ostream& out) { write_dump(out, r13); });
  } catch (const Error& e) {
    extras.emplace_back("oracle_error", e.what());
    ok = false;
  }
  write_report_file(dir, cfg.mode, rec.report, extras);
  return finish(rec.report, ok);
}

int run_check(const RunConfig& cfg, const std::filesystem::path& dir) {
  const TubeGrid grid = build_grid(cfg.chart);
  const int n = grid.dim();
  const double tol = cfg.tolerances.roundtrip;
  Extras extras;
  bool ok = true;

  std::optional<MetricField> metric;
  std::optional<ConnectionField> gamma;
  if (cfg.has("g")) {
    metric.emplace(metric_from(cfg.family("g"), n, cfg.chart.e));
    gamma.emplace(christoffel_from_metric(*metric, grid, cfg.tolerances.degeneracy).second_kind);
  } else {
    gamma.emplace(connection_from(cfg.family("Gamma"), n));
  }

  const double pre = pre_semigeodesic_residual(*gamma, grid);
  const double lemma = lemma1_check(*gamma, grid);
  extras.emplace_back("pre_semigeodesic_residual", real(pre));
  extras.emplace_back("lemma1_residual", real(lemma));
  ok = ok && pre <= tol && lemma == pre;

  if (metric) {
    const SemigeodesicResidual semi = semigeodesic_check(*metric, cfg.chart.e, grid);
    extras.emplace_back("semigeodesic_g11", real(semi.g11));
    extras.emplace_back("semigeodesic_g1j", real(semi.g1j));
    ok = ok && std::max(semi.g11, semi.g1j) <= tol;
  }

  // x1-line geodesics from up to five evenly spaced hypersurface nodes.
  const Index T = grid.transverse_count();
  const Index shots = std::min<Index>(T, 5);
  Point v0 = Point::Zero(n);
  v0[0] = 1.0;
  double speed = 0.0;
  double geodesic = 0.0;
  for (Index k = 0; k < shots; ++k) {
    const Index t = shots == 1 ? 0 : (k * (T - 1)) / (shots - 1);
    Curve curve;
    try {
      curve = geodesic_shoot(*gamma, grid, grid.surface_point(t), v0, grid.x1().back(),
                             cfg.chart.h1);
    } catch (const LeftDomain& left) {
      curve = left.partial();
    }
    if (curve.s.size() >= 4) geodesic = std::max(geodesic, geodesic_residual(*gamma, curve));
    if (metric) speed = std::max(speed, speed_residual(*metric, curve, cfg.chart.e));
    write_file(dir / ("curve_" + std::to_string(k + 1) + ".csv"),
               [&](std::ostream& out) { write_curve(out, curve); });
  }
  extras.emplace_back("geodesic_residual", real(geodesic));
  if (metric) {
    extras.emplace_back("speed_residual", real(speed));
    ok = ok && speed <= tol;
  }

  const ReconstructionReport report = full_range_report(grid, pre);
  write_report_file(dir, cfg.mode, report, extras);
  return ok ? kExitOk : kExitAboveTolerance;
}

}  // namespace

int run(const RunConfig& config, const std::filesystem::path& out_dir, int threads,
        std::ostream& err) {
  for (const std::string& note : config.notes) err << "note: " << note << '\n';
  try {
    std::filesystem::create_directories(out_dir);
    switch (config.mode) {
      case Mode::Forward: return run_forward(config, out_dir);
      case Mode::ReconstructMetric:
      case Mode::RoundtripMetric: return run_metric(config, out_dir, threads);
      case Mode::ReconstructConnection:
      case Mode::RoundtripConnection: return run_connection(config, out_dir, threads);
      case Mode::CheckChart: return run_check(config, out_dir);
    }
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInit& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalStop;
  }
  return kExitConfig;
}

}  // namespace semigeo
