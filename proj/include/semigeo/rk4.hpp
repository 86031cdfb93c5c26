#pragma once

#include <Eigen/Core>

#include <cmath>

namespace semigeo {

/// Which RK4 stage a right-hand side is evaluated at. Data tabulated at
/// step starts, midpoints and ends can be looked up without interpolation.
enum class RkPoint { Start, Mid, End };

/// One classic fourth-order Runge-Kutta step of size h (may be negative)
/// for dy/dx = rhs(x, y, RkPoint).
template <typename Vector, typename Rhs>
Vector rk4_step(Rhs&& rhs, double x, const Vector& y, double h) {
  const double half = 0.5 * h;
  const Vector k1 = rhs(x, y, RkPoint::Start);
  const Vector k2 = rhs(x + half, Vector(y + half * k1), RkPoint::Mid);
  const Vector k3 = rhs(x + half, Vector(y + half * k2), RkPoint::Mid);
  const Vector k4 = rhs(x + h, Vector(y + h * k3), RkPoint::End);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// False once any entry is non-finite or exceeds the threshold in magnitude.
template <typename Derived>
bool within_threshold(const Eigen::MatrixBase<Derived>& y, double threshold) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = y.derived().coeff(i);
    if (!std::isfinite(v) || std::abs(v) > threshold) return false;
  }
  return true;
}

}  // namespace semigeo
