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

#include "rmpta/scenario.hpp"

namespace rmpta {

ScenarioParams reference_params() {
  ScenarioParams p;
  using enum RollMode;
  p.targets = {
      {0.3, 0.0, kHorizontal}, {0.7, 0.3, kVertical},   {0.3, -0.3, kHorizontal},
      {0.7, 0.0, kVertical},   {0.3, 0.3, kHorizontal}, {0.7, -0.3, kVertical},
  };
  return p;
}

Scenario::Scenario(ScenarioParams params)
    : params_(std::move(params)),
      cylinder_(params_.cylinder_origin, params_.cylinder_axis, params_.cylinder_radius,
                params_.cylinder_reference),
      human_chart_(make_surface_chart(cylinder_)) {
  if (params_.targets.empty()) throw BadParams("scenario needs at least one target");
  if (!(params_.dt > 0.0)) throw BadParams("dt must be positive");
  if (!(params_.max_duration > 0.0)) throw BadParams("max_duration must be positive");
  if (!(params_.standoff >= 0.0)) throw BadParams("standoff must be non-negative");
  params_.adaptation.validate();
  if (params_.adaptation.gain.rows() != 3) throw BadParams("K must be 3 x 3 for the surface input manifold");

  for (std::size_t i = 0; i < params_.targets.size(); ++i) {
    const auto& t = params_.targets[i];
    if (t.height < 0.0 || t.height > params_.cylinder_height) {
      throw BadParams("target " + std::to_string(i + 1) + " lies off the cylinder");
    }
    mission_.push_back(make_inspection_position(cylinder_, {t.height, t.arc, params_.standoff},
                                                params_.position, "position_" + std::to_string(i + 1)));
  }
  mission_.push_back(make_inspection_rotation(cylinder_, RollMode::kHorizontal, params_.rotation,
                                              "rotation_horizontal"));
  mission_.push_back(make_inspection_rotation(cylinder_, RollMode::kVertical, params_.rotation,
                                              "rotation_vertical"));
  safety_.push_back(make_distance_keeping(cylinder_, params_.d_safe, params_.distance));
  safety_.push_back(make_normal_keeping(cylinder_, params_.normal));
}

Pose Scenario::surface_pose(double height, double arc, double distance, double roll) const {
  return {cylinder_.surface_point(height, arc, distance), cylinder_.surface_orientation(arc, roll)};
}

Pose Scenario::target_pose(int task) const {
  const auto& t = params_.targets.at(static_cast<std::size_t>(task));
  return surface_pose(t.height, t.arc, params_.standoff, roll_target(t.mode));
}

RobotState Scenario::initial_state() const {
  return {surface_pose(params_.initial_height, params_.initial_arc, params_.initial_distance,
                       params_.initial_roll),
          Twist{}, 0.0};
}

ScaleVector Scenario::initial_alpha() const {
  const double v = params_.initial_alpha < 0.0 ? 1.0 / mission_count() : params_.initial_alpha;
  return ScaleVector::uniform(mission_count(), std::clamp(v, 0.0, 1.0));
}

std::pair<double, double> Scenario::task_errors(int task, const Pose& pose) const {
  const Pose target = target_pose(task);
  return {(pose.position - target.position).norm(),
          orientation_error(pose.orientation, target.orientation)};
}

bool Scenario::within_tolerance(int task, const Pose& pose) const {
  const auto [trans, rot] = task_errors(task, pose);
  return trans <= params_.tolerance.position && rot <= params_.tolerance.rotation;
}

}  // namespace rmpta
