// Copyright 2026 The rmpta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rmpta/errors.hpp"
#include "rmpta/geometry.hpp"

namespace rmpta {

// Relative singular-value cutoff for every pseudo-inverse in the policy algebra.
inline constexpr double kPinvTolerance = 1e-10;

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A motion policy (f, A): desired acceleration plus a symmetric positive
// semi-definite metric, both in the coordinates of one manifold.
template <class Scalar = double>
struct MotionPolicy {
  VectorX<Scalar> f;
  MatrixX<Scalar> metric;

  [[nodiscard]] int dim() const { return static_cast<int>(f.size()); }

  static MotionPolicy zero(int dim) {
    return {VectorX<Scalar>::Zero(dim), MatrixX<Scalar>::Zero(dim, dim)};
  }
};

using Policy = MotionPolicy<double>;

template <class Scalar>
struct SpectralDecomposition {
  MatrixX<Scalar> eigenvectors;  // columns, orthonormal
  VectorX<Scalar> eigenvalues;   // descending, non-negative
};

/// Moore-Penrose pseudo-inverse; singular values at or below
/// kPinvTolerance * sigma_max are treated as zero.
template <class Derived>
MatrixX<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return MatrixX<Scalar>(a.cols(), a.rows());
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const Scalar cutoff = Scalar(kPinvTolerance) * sigma(0);
  VectorX<Scalar> inv = VectorX<Scalar>::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > Scalar(0)) inv(i) = Scalar(1) / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Pull-back through a Jacobian: A' = J^T A J, f' = (J^T A J)^+ J^T A f.
template <class Scalar>
MotionPolicy<Scalar> pullback(const MotionPolicy<Scalar>& policy, const MatrixX<Scalar>& jacobian) {
  if (jacobian.rows() != policy.dim() || policy.metric.rows() != policy.dim() ||
      policy.metric.cols() != policy.dim()) {
    throw DimensionMismatch("pullback: Jacobian rows must match the policy dimension");
  }
  const MatrixX<Scalar> ja = jacobian.transpose() * policy.metric;
  MatrixX<Scalar> metric = ja * jacobian;
  metric = Scalar(0.5) * (metric + metric.transpose());
  const VectorX<Scalar> force = ja * policy.f;
  return {pseudo_inverse(metric) * force, metric};
}

/// Metric-weighted policy addition: A = sum A_i, f = A^+ sum A_i f_i.
template <class Scalar>
MotionPolicy<Scalar> rmp_sum(std::span<const MotionPolicy<Scalar>> policies) {
  if (policies.empty()) throw EmptyList("rmp_sum: no policies");
  const int dim = policies.front().dim();
  MatrixX<Scalar> metric = MatrixX<Scalar>::Zero(dim, dim);
  VectorX<Scalar> force = VectorX<Scalar>::Zero(dim);
  for (const auto& p : policies) {
    if (p.dim() != dim || p.metric.rows() != dim || p.metric.cols() != dim) {
      throw DimensionMismatch("rmp_sum: policies live in different dimensions");
    }
    metric += p.metric;
    force += p.metric * p.f;
  }
  return {pseudo_inverse(metric) * force, metric};
}

template <class Scalar>
MotionPolicy<Scalar> rmp_sum(const std::vector<MotionPolicy<Scalar>>& policies) {
  return rmp_sum(std::span<const MotionPolicy<Scalar>>(policies));
}

/// Eigen-decomposition of a symmetric PSD matrix, eigenvalues descending.
/// Eigenvalues in (-1e-10, 0) are clamped to zero.
template <class Derived>
SpectralDecomposition<typename Derived::Scalar> spectral(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw DimensionMismatch("spectral: matrix is not square");
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
    throw NotSymmetric("spectral: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(a);
  const Eigen::Index n = a.rows();
  SpectralDecomposition<Scalar> out{MatrixX<Scalar>(n, n), VectorX<Scalar>(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;
    out.eigenvalues(i) = std::max(Scalar(0), solver.eigenvalues()(src));
    out.eigenvectors.col(i) = solver.eigenvectors().col(src);
  }
  return out;
}

/// <a, b>_A
template <class Scalar>
Scalar metric_inner(const VectorX<Scalar>& a, const VectorX<Scalar>& b, const MatrixX<Scalar>& metric) {
  return a.dot(metric * b);
}

enum class PolicyCategory { kSafety, kMission };

// A task-feature policy: potential, damping and metric on the manifold reached
// through `chart`. Mission policies additionally carry `human_map`, the
// constant Jacobian from human-input coordinates to this policy's coordinates.
struct PolicySpec {
  std::string name;
  PolicyCategory category = PolicyCategory::kMission;
  Chart chart;
  std::function<double(const Eigen::VectorXd&)> potential;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double damping = 0.0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> metric;
  Eigen::VectorXd optimum;
  Eigen::VectorXd period;  // per coordinate; 0 where the coordinate is not periodic
  Eigen::MatrixXd human_map;

  [[nodiscard]] int dim() const { return chart.dim(); }
  [[nodiscard]] bool is_mission() const { return category == PolicyCategory::kMission; }

  /// Coordinate difference x - reference with periodic coordinates wrapped.
  [[nodiscard]] Eigen::VectorXd difference(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& reference) const;
};

/// f = -grad(x) - damping * xdot, A = metric(x, xdot).
[[nodiscard]] Policy evaluate(const PolicySpec& spec, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& xdot);

/// Evaluates `spec` at a configuration and pulls it back to the 6-D tangent space.
[[nodiscard]] Policy evaluate_pulled(const PolicySpec& spec, const Pose& pose, const Twist& twist);

}  // namespace rmpta
