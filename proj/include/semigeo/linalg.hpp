#pragma once

// Small dense matrices: metric blocks are at most a few rows, so sizes up
// to 3 use the explicit adjugate and larger ones fall back to pivoted LU.

#include <Eigen/Core>
#include <Eigen/LU>

namespace semigeo {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
typename Derived::Scalar small_determinant(const Eigen::MatrixBase<Derived>& m) {
  const auto& a = m.derived();
  switch (a.rows()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return a.partialPivLu().determinant();
  }
}

/// Inverse given the (already checked, nonzero) determinant.
template <typename Derived>
MatrixX<typename Derived::Scalar> small_inverse(const Eigen::MatrixBase<Derived>& m,
                                                typename Derived::Scalar det) {
  using Scalar = typename Derived::Scalar;
  const auto& a = m.derived();
  const Eigen::Index size = a.rows();
  MatrixX<Scalar> inv(size, size);
  switch (size) {
    case 1:
      inv(0, 0) = Scalar(1) / det;
      return inv;
    case 2:
      inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
      return inv / det;
    case 3:
      inv(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
      inv(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
      inv(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
      inv(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
      inv(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
      inv(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
      inv(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
      inv(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
      inv(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
      return inv / det;
    default:
      return a.partialPivLu().inverse();
  }
}

/// Copy the upper triangle onto the lower one.
template <typename Derived>
void mirror_upper(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) m(i, j) = m(j, i);
  }
}

}  // namespace semigeo
