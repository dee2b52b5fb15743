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

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rmpta/errors.hpp"
#include "rmpta/geometry.hpp"
#include "rmpta/policies.hpp"

namespace rmpta {

struct TargetEntry {
  std::array<double, 7> pose{};  // x y z qw qx qy qz
  RollMode mode = RollMode::kHorizontal;

  bool operator==(const TargetEntry&) const = default;
};

struct StateFrame {
  double t = 0.0;
  std::array<double, 7> pose{};
  std::array<double, 3> surface_coords{};  // height, arc, roll
  std::array<double, 6> twist{};
  std::vector<double> alpha;
  std::vector<double> likelihood;
  std::vector<double> conditional;
  std::vector<double> prior;
  int active_target = -1;
  std::vector<TargetEntry> target_list;
  double distance_to_surface = 0.0;

  bool operator==(const StateFrame&) const = default;
};

struct InputFrame {
  std::array<double, 3> u_h{};
  double client_time = 0.0;
  std::int64_t sequence = 0;

  bool operator==(const InputFrame&) const = default;
};

struct HelloFrame {
  std::string role;    // "operator" or "observer"
  std::string client;  // free-form client name

  bool operator==(const HelloFrame&) const = default;
};

struct InstructionFrame {
  int target = -1;
  RollMode mode = RollMode::kHorizontal;
  std::string text;

  bool operator==(const InstructionFrame&) const = default;
};

using Frame = std::variant<StateFrame, InputFrame, HelloFrame, InstructionFrame>;

[[nodiscard]] std::string encode(const Frame& frame);
/// Throws MalformedFrame on unknown types, missing or mistyped fields, or an empty payload.
[[nodiscard]] Frame decode(const std::string& text);

[[nodiscard]] std::array<double, 7> pose_array(const Pose& pose);
/// Exact inverse of pose_array; the quaternion is not renormalized.
[[nodiscard]] Pose array_pose(const std::array<double, 7>& a);

}  // namespace rmpta
