#pragma once

#include <Eigen/Core>

namespace zdadapt {

// Small determinants by explicit cofactor expansion. The evaluation order is
// fixed, so results are bit-identical across runs for the same inputs.

template <typename Derived>
typename Derived::Scalar det2(const Eigen::MatrixBase<Derived>& m) {
  static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2);
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <typename Scalar>
Scalar det2(Scalar a, Scalar b, Scalar c, Scalar d) {
  return a * d - b * c;
}

template <typename Derived>
typename Derived::Scalar det3(const Eigen::MatrixBase<Derived>& m) {
  static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 3);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Expansion along the last column, so det4 is an explicit linear form in that
// column (the payoff column of the payoff determinant).
template <typename Derived>
typename Derived::Scalar det4(const Eigen::MatrixBase<Derived>& m) {
  static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 4);
  using Scalar = typename Derived::Scalar;
  Scalar result(0);
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix<Scalar, 3, 3> minor;
    for (int r = 0, mr = 0; r < 4; ++r) {
      if (r == i) continue;
      for (int c = 0; c < 3; ++c) minor(mr, c) = m(r, c);
      ++mr;
    }
    const Scalar sign = ((i + 3) % 2 == 0) ? Scalar(1) : Scalar(-1);
    result += sign * m(i, 3) * det3(minor);
  }
  return result;
}

}  // namespace zdadapt
