#include "semigeo/chart_check.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "semigeo/tensor_io.hpp"

namespace semigeo {

double pre_semigeodesic_residual(const ConnectionField& gamma, const TubeGrid& grid) {
  const TensorTube t = gamma.on_grid(grid);
  double worst = 0.0;
  for (int h = 1; h <= grid.dim(); ++h) {
    worst = std::max(worst, t.component({h, 1, 1}).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::VectorXd geodesic_acceleration_residual(const ConnectionField& gamma, const Point& x,
                                               const Point& velocity,
                                               const Point& acceleration) {
  const int n = gamma.dim();
  Eigen::VectorXd r = acceleration;
  for (int h = 1; h <= n; ++h) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        r[h - 1] += gamma(h, i, j, x) * velocity[i - 1] * velocity[j - 1];
      }
    }
  }
  return r;
}

double lemma1_check(const ConnectionField& gamma, const TubeGrid& grid, int trials) {
  const TensorTube t = gamma.on_grid(grid);
  const ConnectionField sampled(t);
  const int n = grid.dim();
  const Index T = grid.transverse_count();
  const Index lines = (trials <= 0 || trials >= T) ? T : trials;
  Point velocity = Point::Zero(n);
  velocity[0] = 1.0;
  const Point acceleration = Point::Zero(n);
  double worst = 0.0;
  for (Index k = 0; k < lines; ++k) {
    const Index line = lines == T ? k : (k * (T - 1)) / std::max<Index>(lines - 1, 1);
    for (Index i1 = 0; i1 < grid.x1_count(); ++i1) {
      const Point x = grid.coords(grid.node(i1, line));
      const Eigen::VectorXd r =
          geodesic_acceleration_residual(sampled, x, velocity, acceleration);
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Curve geodesic_shoot(const ConnectionField& gamma, const TubeGrid& grid, const Point& x0,
                     const Point& v0, double s_max, double step) {
  if (!(step > 0.0)) throw InvalidSpec("geodesic step must be positive");
  if (!inside_hull(grid, x0)) throw OutOfDomain("geodesic start point outside the tube");
  const int n = gamma.dim();
  // State: position followed by velocity.
  auto rhs = [&](const Eigen::VectorXd& y) {
    const Point x = y.head(n);
    const Point v = y.tail(n);
    if (!inside_hull(grid, x)) throw OutOfDomain("geodesic stage left the tube");
    Eigen::VectorXd f(2 * n);
    f.head(n) = v;
    f.tail(n) = -geodesic_acceleration_residual(gamma, x, v, Point::Zero(n));
    return f;
  };

  Curve curve;
  Eigen::VectorXd y(2 * n);
  y << x0, v0;
  curve.s.push_back(0.0);
  curve.position.push_back(x0);
  curve.velocity.push_back(v0);
  const auto steps = static_cast<long long>(std::floor(s_max / step + 1e-9));
  for (long long k = 1; k <= steps; ++k) {
    Eigen::VectorXd next;
    try {
      const Eigen::VectorXd k1 = rhs(y);
      const Eigen::VectorXd k2 = rhs(y + 0.5 * step * k1);
      const Eigen::VectorXd k3 = rhs(y + 0.5 * step * k2);
      const Eigen::VectorXd k4 = rhs(y + step * k3);
      next = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const OutOfDomain&) {
      throw LeftDomain(std::move(curve), Point(y.head(n) + step * y.tail(n)));
    }
    if (!inside_hull(grid, next.head(n))) throw LeftDomain(std::move(curve), next.head(n));
    y = next;
    curve.s.push_back(static_cast<double>(k) * step);
    curve.position.push_back(y.head(n));
    curve.velocity.push_back(y.tail(n));
  }
  return curve;
}

double geodesic_residual(const ConnectionField& gamma, const Curve& curve) {
  const std::size_t count = curve.s.size();
  if (count < 4) throw GridTooCoarse("curve needs at least 4 samples");
  const double h = curve.s[1] - curve.s[0];
  const int n = gamma.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    Point v(n), a(n);
    const auto& p = curve.position;
    if (k == 0) {
      v = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h);
      a = (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) / (h * h);
    } else if (k == count - 1) {
      v = (3.0 * p[k] - 4.0 * p[k - 1] + p[k - 2]) / (2.0 * h);
      a = (2.0 * p[k] - 5.0 * p[k - 1] + 4.0 * p[k - 2] - p[k - 3]) / (h * h);
    } else {
      v = (p[k + 1] - p[k - 1]) / (2.0 * h);
      a = (p[k + 1] - 2.0 * p[k] + p[k - 1]) / (h * h);
    }
    worst = std::max(worst,
                     geodesic_acceleration_residual(gamma, p[k], v, a).cwiseAbs().maxCoeff());
  }
  return worst;
}

SemigeodesicResidual semigeodesic_check(const MetricField& g, int e, const TubeGrid& grid) {
  return semigeodesic_residual(g.on_grid(grid), e);
}

double speed_residual(const MetricField& g, const Curve& curve, double target) {
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.s.size(); ++k) {
    const Point& v = curve.velocity[k];
    const double norm = v.dot(g.matrix(curve.position[k]) * v);
    worst = std::max(worst, std::abs(norm - target));
  }
  return worst;
}

void write_curve(std::ostream& out, const Curve& curve) {
  const Index n = curve.position.empty() ? 0 : curve.position.front().size();
  out << "s";
  for (Index i = 1; i <= n; ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t k = 0; k < curve.s.size(); ++k) {
    out << format_real(curve.s[k]);
    for (Index i = 0; i < n; ++i) out << ',' << format_real(curve.position[k][i]);
    out << '\n';
  }
}

}  // namespace semigeo
