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

#include <string>
#include <vector>

#include "rmpta/adaptation.hpp"
#include "rmpta/geometry.hpp"
#include "rmpta/policies.hpp"
#include "rmpta/rmp.hpp"

namespace rmpta {

struct RobotState {
  Pose pose;
  Twist twist;
  double time = 0.0;
};

struct InspectionTarget {
  double height = 0.0;  // m along the axis
  double arc = 0.0;     // m along the surface
  RollMode mode = RollMode::kHorizontal;
};

struct TaskTolerance {
  double position = 0.05;                          // m
  double rotation = 3.0 * std::numbers::pi / 180;  // rad
  double dwell = 0.5;                              // s
};

// Every tunable number of an inspection scenario. This is what the config
// file holds.
struct ScenarioParams {
  Eigen::Vector3d cylinder_origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d cylinder_axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d cylinder_reference = Eigen::Vector3d::UnitX();
  double cylinder_radius = 0.4;
  double cylinder_height = 1.0;

  std::vector<InspectionTarget> targets;
  double standoff = 0.08;  // inspection distance from the surface
  double d_safe = 0.08;

  AttractorParams position{.damping = 18.0};
  AttractorParams rotation;
  KeeperParams distance;
  KeeperParams normal{.setpoint = kNormalRampOnset};
  AdaptationConfig adaptation;

  double dt = 0.01;
  double max_duration = 60.0;
  double convergence_threshold = 0.95;
  TaskTolerance tolerance;

  // Start state, in surface coordinates, at rest.
  double initial_height = 0.5;
  double initial_arc = 0.0;
  double initial_distance = 0.2;
  double initial_roll = std::numbers::pi / 4.0;
  double initial_alpha = -1.0;  // negative: 1 / N_mission
};

/// The shipped inspection scenario: six targets on a 2 x 3 grid with
/// alternating roll modes.
[[nodiscard]] ScenarioParams reference_params();

class Scenario {
 public:
  explicit Scenario(ScenarioParams params);

  [[nodiscard]] const ScenarioParams& params() const { return params_; }
  [[nodiscard]] const CylinderChart& cylinder() const { return cylinder_; }
  [[nodiscard]] const std::vector<InspectionTarget>& targets() const { return params_.targets; }
  [[nodiscard]] const std::vector<PolicySpec>& mission() const { return mission_; }
  [[nodiscard]] const std::vector<PolicySpec>& safety() const { return safety_; }
  [[nodiscard]] const Chart& human_chart() const { return human_chart_; }
  [[nodiscard]] const AdaptationConfig& adaptation() const { return params_.adaptation; }
  [[nodiscard]] double dt() const { return params_.dt; }
  [[nodiscard]] double max_duration() const { return params_.max_duration; }
  [[nodiscard]] int human_dim() const { return human_chart_.dim(); }
  [[nodiscard]] int mission_count() const { return static_cast<int>(mission_.size()); }
  [[nodiscard]] int task_count() const { return static_cast<int>(params_.targets.size()); }

  /// Mission-policy index of task k's position attractor.
  [[nodiscard]] int position_policy(int task) const { return task; }
  /// Mission-policy index of the roll attractor for `mode`.
  [[nodiscard]] int rotation_policy(RollMode mode) const {
    return task_count() + (mode == RollMode::kHorizontal ? 0 : 1);
  }
  [[nodiscard]] int rotation_policy_for_task(int task) const {
    return rotation_policy(params_.targets.at(static_cast<std::size_t>(task)).mode);
  }

  [[nodiscard]] Pose target_pose(int task) const;
  [[nodiscard]] RobotState initial_state() const;
  [[nodiscard]] ScaleVector initial_alpha() const;

  /// Pose on the standoff shell at the given surface coordinates, tool aligned.
  [[nodiscard]] Pose surface_pose(double height, double arc, double distance, double roll) const;

  /// Euclidean distance and geodesic rotation angle to task k's target pose.
  [[nodiscard]] std::pair<double, double> task_errors(int task, const Pose& pose) const;
  [[nodiscard]] bool within_tolerance(int task, const Pose& pose) const;

 private:
  ScenarioParams params_;
  CylinderChart cylinder_;
  Chart human_chart_;
  std::vector<PolicySpec> mission_;
  std::vector<PolicySpec> safety_;
};

}  // namespace rmpta
