#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace zdadapt {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, 5, 1>;
template <typename Scalar>
using RowVector4 = Eigen::Matrix<Scalar, 1, 4>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

// Input outside the admissible parameter region (payoffs, probabilities, delta).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation hit a singular or near-singular quantity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested ZD parameters produce probabilities outside [0, 1].
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ZD strategy with alpha = 0 (equalizer); the slope chi is undefined.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form corner expression disagrees with direct evaluation.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strategy handed to the relay classifier still has an improvable q_l.
class NotRelayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zdadapt
