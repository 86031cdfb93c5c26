#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "semigeo/curvature.hpp"
#include "semigeo/error.hpp"
#include "semigeo/metric_recon.hpp"

using namespace semigeo;
using testing_support::AnalyticMetric;
using testing_support::eval_jet;
using testing_support::exact_christoffel;
using testing_support::exact_r13;

namespace {

ChartSpec chart(int n, double lo, double hi, double h1, int res) {
  ChartSpec c;
  c.n = n;
  c.x1_min = lo;
  c.x1_max = hi;
  c.h1 = h1;
  c.transverse_res = {res};
  return c;
}

Eigen::MatrixXd m1(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

HypersurfaceMetricData unit_data(double G22) {
  HypersurfaceMetricData d;
  d.g.set({2, 2}, 1.0);
  d.G.set({2, 2}, G22);
  return d;
}

MetricCurvatureSpec a22(const char* text) {
  MetricCurvatureSpec a;
  a.a.set({2, 2}, parse_field(text, 2));
  return a;
}

double max_gap(const MetricField& g, int i, int j, double (*f)(double)) {
  const TensorTube& t = *g.tube();
  double worst = 0.0;
  for (Index node = 0; node < t.grid().node_count(); ++node) {
    worst = std::max(worst, std::abs(t.at({i, j}, node) - f(t.grid().coords(node)[0])));
  }
  return worst;
}

// Semigeodesic metric on three coordinates with full dependence.
const AnalyticMetric kSemi(3, 1,
                           {{{1, 1}, "1"},
                            {{2, 2}, "1.2 + 0.3*sin(x1 + x2)"},
                            {{2, 3}, "0.1*x1*x3 + 0.05*cos(x2)"},
                            {{3, 3}, "1 + 0.2*x3^2*cos(x1) + 0.1*x1"}});

// Surface values, first x1-derivative and R_1ij1 = e R^1_ij1 of an analytic metric.
std::pair<HypersurfaceMetricData, MetricCurvatureSpec> inputs_for(const AnalyticMetric& m) {
  HypersurfaceMetricData d;
  MetricCurvatureSpec a;
  for (int i = 2; i <= m.n; ++i) {
    for (int j = i; j <= m.n; ++j) {
      const FieldExpr expr = m.g[static_cast<std::size_t>((i - 1) * m.n + j - 1)];
      d.g.set({i, j}, ScalarField::function([expr](const Point& x) {
                Point s = x;
                s[0] = 0.0;
                return eval_jet(expr, s).v;
              }));
      d.G.set({i, j}, ScalarField::function([expr](const Point& x) {
                Point s = x;
                s[0] = 0.0;
                return eval_jet(expr, s).d[0];
              }));
      a.a.set({i, j}, ScalarField::function([m, i, j](const Point& x) {
                return m.e * exact_r13(exact_christoffel(m, x), 1, i, j, 1);
              }));
    }
  }
  return {d, a};
}

double error_against(const MetricReconstruction& r, const AnalyticMetric& m) {
  const TensorTube& t = *r.metric.tube();
  double worst = 0.0;
  for (Index node = 0; node < t.grid().node_count(); ++node) {
    const Point x = t.grid().coords(node);
    for (int i = 2; i <= m.n; ++i) {
      for (int j = 2; j <= m.n; ++j) worst = std::max(worst, std::abs(t.at({i, j}, node) - m(i, j, x)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("metric_rhs examples") {
  const auto flat = metric_rhs<double>(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2),
                                       Eigen::MatrixXd::Zero(2, 2));
  CHECK(flat.dg.cwiseAbs().maxCoeff() == 0.0);
  CHECK(flat.dG.cwiseAbs().maxCoeff() == 0.0);

  const double c = 0.4;
  const auto sphere = metric_rhs<double>(m1(std::cos(c) * std::cos(c)), m1(-std::sin(2 * c)),
                                         m1(-std::cos(c) * std::cos(c)));
  CHECK(sphere.dg(0, 0) == -std::sin(2 * c));
  CHECK(sphere.dG(0, 0) == doctest::Approx(-2.0 * std::cos(2 * c)).epsilon(1e-13));

  const auto cone = metric_rhs<double>(m1((1 - c) * (1 - c)), m1(-2 * (1 - c)), m1(0.0));
  CHECK(cone.dG(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::MatrixXd g(2, 2), G(2, 2), a(2, 2);
  g << 2.0, 0.3, 0.3, 1.0;
  G << 0.1, -0.7, -0.7, 0.4;
  a << 0.5, 0.2, 0.2, -1.0;
  const auto r = metric_rhs<double>(g, G, a);
  CHECK(r.dG(0, 1) == r.dG(1, 0));
  CHECK_THROWS_AS(metric_rhs<double>(Eigen::MatrixXd::Zero(2, 2), G, a), DegenerateMetric);
}

TEST_CASE("flat data stays flat") {
  const auto r = reconstruct_metric(unit_data(0.0), {}, 1, chart(2, -0.5, 0.5, 0.1, 5));
  CHECK(r.report.complete());
  const TensorTube& t = *r.metric.tube();
  for (Index node = 0; node < t.grid().node_count(); ++node) {
    CHECK(t.at({1, 1}, node) == 1.0);
    CHECK(t.at({1, 2}, node) == 0.0);
    CHECK(t.at({2, 2}, node) == 1.0);
  }
}

TEST_CASE("sphere and hyperbolic closed forms") {
  const ChartSpec c = chart(2, 0.0, 1.0, 1e-3, 5);
  const auto sphere = reconstruct_metric(unit_data(0.0), a22("-cos(x1)^2"), 1, c);
  CHECK(sphere.report.complete());
  CHECK(max_gap(sphere.metric, 2, 2, [](double x) { return std::cos(x) * std::cos(x); }) <= 1e-8);
  const auto hyper = reconstruct_metric(unit_data(0.0), a22("cosh(x1)^2"), 1, c);
  CHECK(max_gap(hyper.metric, 2, 2, [](double x) { return std::cosh(x) * std::cosh(x); }) <= 1e-8);
}

TEST_CASE("degenerate cone stops within one step of x1 = 1") {
  const double h1 = 1e-3;
  const auto r = reconstruct_metric(unit_data(-2.0), {}, 1, chart(2, -0.5, 2.0, h1, 3));
  CHECK(r.report.status == ReconStatus::StoppedDegenerate);
  CHECK(std::abs(r.report.delta_hat_plus - 1.0) <= h1 + 1e-12);
  CHECK(r.report.delta_hat_minus == -0.5);
  // (1 - x1)^2 is reproduced on the reached range; RK4 error grows next to the singular point
  CHECK(max_gap(r.metric, 2, 2, [](double x) { return (1 - x) * (1 - x); }) <= 1e-7);
}

TEST_CASE("assembled metric is semigeodesic for both signs") {
  const auto [d, a] = inputs_for(kSemi);
  for (int e : {1, -1}) {
    const auto r = reconstruct_metric(d, a, e, chart(3, -0.3, 0.3, 0.05, 5));
    const SemigeodesicResidual s = semigeodesic_residual(*r.metric.tube(), e);
    CHECK(s.g11 == 0.0);
    CHECK(s.g1j == 0.0);
    CHECK(r.metric.e() == e);
  }
}

TEST_CASE("surface values are exact") {
  const auto [d, a] = inputs_for(kSemi);
  const auto r = reconstruct_metric(d, a, 1, chart(3, -0.3, 0.3, 0.05, 5));
  const TensorTube& t = *r.metric.tube();
  const TubeGrid& g = t.grid();
  for (Index tt = 0; tt < g.transverse_count(); ++tt) {
    const Index node = g.node(g.zero_index(), tt);
    for (int i = 2; i <= 3; ++i) {
      for (int j = i; j <= 3; ++j) CHECK(t.at({i, j}, node) == d.g.value({i, j}, g.coords(node)));
    }
  }
}

TEST_CASE("round trip converges at fourth order in h1") {
  const auto [d, a] = inputs_for(kSemi);
  const double coarse = error_against(reconstruct_metric(d, a, 1, chart(3, -0.5, 0.5, 0.1, 3)), kSemi);
  const double fine = error_against(reconstruct_metric(d, a, 1, chart(3, -0.5, 0.5, 0.05, 3)), kSemi);
  CHECK(coarse / fine > 13.0);
  CHECK(coarse / fine < 19.0);
}

TEST_CASE("transverse resolution does not change shared nodes") {
  const auto [d, a] = inputs_for(kSemi);
  const auto coarse = reconstruct_metric(d, a, 1, chart(3, -0.3, 0.3, 0.05, 3));
  const auto fine = reconstruct_metric(d, a, 1, chart(3, -0.3, 0.3, 0.05, 5));
  const TensorTube& tc = *coarse.metric.tube();
  const TensorTube& tf = *fine.metric.tube();
  int compared = 0;
  for (Index node = 0; node < tc.grid().node_count(); ++node) {
    const Point x = tc.grid().coords(node);
    for (Index other = 0; other < tf.grid().node_count(); ++other) {
      if (tf.grid().coords(other) != x) continue;
      ++compared;
      for (const auto& idx : tc.all_tuples()) CHECK(tc.at(idx, node) == tf.at(idx, other));
    }
  }
  CHECK(compared == tc.grid().node_count());
}

TEST_CASE("invalid initial data") {
  const ChartSpec c = chart(3, -0.5, 0.5, 0.1, 3);
  HypersurfaceMetricData asym;
  asym.g.set({2, 2}, 1.0);
  asym.g.set({3, 3}, 1.0);
  asym.g.set({2, 3}, 0.1);
  asym.g.set({3, 2}, 0.2);
  CHECK_THROWS_AS(reconstruct_metric(asym, {}, 1, c), InvalidInit);

  HypersurfaceMetricData degenerate;
  degenerate.g.set({2, 2}, 1.0);
  CHECK_THROWS_AS(reconstruct_metric(degenerate, {}, 1, c), InvalidInit);

  HypersurfaceMetricData bad_key;
  bad_key.g.set({1, 2}, 1.0);
  CHECK_THROWS_AS(reconstruct_metric(bad_key, {}, 1, c), InvalidInit);

  CHECK_THROWS_AS(reconstruct_metric(unit_data(0.0), {}, 0, chart(2, -0.5, 0.5, 0.1, 3)), InvalidSpec);
}
