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

#include "rmpta/geometry.hpp"
#include "rmpta/rmp.hpp"

namespace rmpta {

// Soft-norm target attractor. `weight` holds either one isotropic metric
// weight or one weight per coordinate.
struct AttractorParams {
  double gain = 4.0;       // saturated pull, manifold units / s^2
  double softness = 0.05;  // length scale where the pull saturates
  double damping = 4.0;    // 1/s
  Eigen::VectorXd weight = Eigen::VectorXd::Constant(1, 1.0);
};

// Quadratic keeper with a logistic metric ramp:
//   A = barrier_scale * logistic(steepness * violation) + floor
struct KeeperParams {
  double setpoint = 0.0;
  double stiffness = 100.0;
  double damping = 20.0;
  double barrier_scale = 50.0;
  double steepness = 100.0;
  double floor = 0.1;
};

enum class RollMode { kHorizontal, kVertical };

[[nodiscard]] constexpr double roll_target(RollMode mode) {
  return mode == RollMode::kHorizontal ? 0.0 : std::numbers::pi / 2.0;
}

/// 1 / (1 + exp(-x)) without overflow.
[[nodiscard]] double logistic(double x);

/// eta * (sqrt(|d|^2 + sigma^2) - sigma)
[[nodiscard]] double soft_norm_potential(const Eigen::VectorXd& d, double gain, double softness);

/// Default onset angle for the normal-keeping ramp (10 degrees).
inline constexpr double kNormalRampOnset = std::numbers::pi / 18.0;

// Mission policy on (height, arc, distance) pulling toward `target`.
[[nodiscard]] PolicySpec make_inspection_position(const CylinderChart& cylinder,
                                                  const Eigen::Vector3d& target,
                                                  const AttractorParams& params,
                                                  std::string name = "position");

// Mission policy on the tool roll about the surface normal.
[[nodiscard]] PolicySpec make_inspection_rotation(const CylinderChart& cylinder, RollMode mode,
                                                  const AttractorParams& params,
                                                  std::string name = "rotation");

// Safety policy on the distance to the surface. `params.setpoint` is unused.
[[nodiscard]] PolicySpec make_distance_keeping(const CylinderChart& cylinder, double d_safe,
                                               const KeeperParams& params);

// Safety policy on the tool tilt away from the inward normal.
// `params.setpoint` is the tilt angle (rad) where the metric ramp turns on.
[[nodiscard]] PolicySpec make_normal_keeping(const CylinderChart& cylinder,
                                             const KeeperParams& params);

}  // namespace rmpta
