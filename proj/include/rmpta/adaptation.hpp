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

#include <span>
#include <vector>

#include "rmpta/geometry.hpp"
#include "rmpta/rmp.hpp"

namespace rmpta {

// Below this magnitude a gradient carries no direction.
inline constexpr double kGradientEpsilon = 1e-9;
inline constexpr double kUnitSlack = 1e-12;

struct AdaptationConfig {
  Eigen::MatrixXd gain = 0.5 * Eigen::MatrixXd::Identity(3, 3);  // K, velocity per unit input
  double alpha_step = 0.02;
  double gamma_tolerance = 0.15;
  double update_rate = 100.0;  // Hz
  bool hold_without_input = true;  // keep alpha while the operator input is exactly zero

  /// Throws BadParams unless K is symmetric positive-definite and the step is in (0, 1].
  void validate() const;
};

// Mission-policy scales, each in [0, 1].
struct ScaleVector {
  Eigen::VectorXd alpha;

  [[nodiscard]] static ScaleVector uniform(int size, double value) {
    return {Eigen::VectorXd::Constant(size, value)};
  }
  [[nodiscard]] int size() const { return static_cast<int>(alpha.size()); }
};

struct OperatorInput {
  Eigen::VectorXd u;
  double time = 0.0;

  /// Renormalizes inputs outside the unit ball; non-finite inputs become zero.
  [[nodiscard]] static OperatorInput ingest(const Eigen::VectorXd& raw, double time);
  [[nodiscard]] static OperatorInput zero(int dim, double time) {
    return {Eigen::VectorXd::Zero(dim), time};
  }
};

struct LikelihoodReport {
  Eigen::VectorXd conditional;
  Eigen::VectorXd prior;
  Eigen::VectorXd combined;
  Eigen::VectorXd desired_gradient;  // -grad Phi_des
};

// A mission policy expressed in human-input coordinates.
struct HumanView {
  Policy policy;                 // (f^H, A^H)
  Eigen::VectorXd gradient;      // grad Phi^H
  Eigen::VectorXd displacement;  // h_R - h*, restricted to the coordinates the policy sees
};

[[nodiscard]] HumanView human_view(const PolicySpec& spec, const Pose& pose, const Twist& twist);

/// Returns -grad Phi_des = hdot + K u.
[[nodiscard]] Eigen::VectorXd desired_gradient(const Eigen::VectorXd& hdot, const OperatorInput& input,
                                               const AdaptationConfig& cfg);

/// 0.5 * (1 + cos) of the metric-weighted angle between grad Phi_des and
/// grad Phi_i. Degenerate directions give 0.5.
[[nodiscard]] double conditional_likelihood(const Eigen::VectorXd& neg_desired,
                                            const Eigen::VectorXd& gradient,
                                            const Eigen::MatrixXd& metric);

/// Spectrally weighted region-of-attraction prior. `input_norm` shrinks the
/// projected distances; at 1 the prior is 1 everywhere.
[[nodiscard]] double policy_prior(const Eigen::MatrixXd& metric, const Eigen::VectorXd& displacement,
                                  double input_norm);
[[nodiscard]] double policy_prior(const PolicySpec& spec, const Pose& pose, const Twist& twist,
                                  const OperatorInput& input);

[[nodiscard]] LikelihoodReport policy_likelihoods(std::span<const HumanView> views,
                                                  const Eigen::VectorXd& hdot,
                                                  const OperatorInput& input,
                                                  const AdaptationConfig& cfg);

/// One sorted pass of scale updates. Policies are visited by decreasing
/// likelihood (ties by index); each one is raised by alpha_step when it does
/// not conflict with the cumulative higher-likelihood policy and lowered
/// otherwise.
[[nodiscard]] ScaleVector policy_scaling(std::span<const HumanView> views,
                                         const Eigen::VectorXd& likelihood, const ScaleVector& alpha,
                                         const AdaptationConfig& cfg);

struct AdaptationResult {
  ScaleVector alpha;
  LikelihoodReport report;
};

[[nodiscard]] AdaptationResult adaptation_step(const Pose& pose, const Twist& twist,
                                               const OperatorInput& input,
                                               std::span<const PolicySpec> mission,
                                               const Chart& human_chart, const ScaleVector& alpha,
                                               const AdaptationConfig& cfg);

}  // namespace rmpta
