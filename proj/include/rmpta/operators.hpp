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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "rmpta/adaptation.hpp"
#include "rmpta/scenario.hpp"

namespace rmpta {

class DegenerateTarget : public Error {
 public:
  using Error::Error;
};

// Demonstrates the scheduled target with unit effort (position and roll at once).
struct PerfectOperator {};
// Perfect demonstration plus isotropic Gaussian noise, projected to the unit ball.
struct NoisyOperator {
  double noise_std = 0.2;
};
struct IdleOperator {};
// Plays back recorded inputs tick by tick; zero once exhausted.
struct ReplayOperator {
  std::vector<OperatorInput> inputs;
};

using OperatorModel = std::variant<PerfectOperator, NoisyOperator, IdleOperator, ReplayOperator>;

[[nodiscard]] std::string operator_kind(const OperatorModel& model);

/// Unit-norm input whose desired gradient hdot + K u points along
/// `target_gradient`. When no such input exists, the unit input maximizing the
/// cosine along a one-parameter family on the unit sphere.
/// Throws DegenerateTarget when |target_gradient| < kGradientEpsilon.
[[nodiscard]] OperatorInput perfect_input(const Eigen::VectorXd& target_gradient,
                                          const Eigen::VectorXd& hdot, const AdaptationConfig& cfg,
                                          double time = 0.0);

/// Same, for a single target policy observed at (pose, twist).
[[nodiscard]] OperatorInput perfect_input(const PolicySpec& target, const Pose& pose,
                                          const Twist& twist, const Chart& human_chart,
                                          const AdaptationConfig& cfg, double time = 0.0);

[[nodiscard]] OperatorInput noisy_input(const OperatorInput& base, double noise_std,
                                        std::mt19937_64& rng);

/// Combined human-manifold gradient of task k's position and roll attractors.
[[nodiscard]] Eigen::VectorXd task_gradient(const Scenario& scenario, int task, const Pose& pose,
                                            const Twist& twist);

// Walks the target sequence. A task completes once its pose tolerance has
// held continuously for the dwell time.
class TaskSchedule {
 public:
  explicit TaskSchedule(const Scenario& scenario) : scenario_(&scenario) {}

  void update(double time, const Pose& pose);

  [[nodiscard]] int active() const { return complete() ? -1 : active_; }
  [[nodiscard]] bool complete() const { return active_ >= scenario_->task_count(); }
  [[nodiscard]] const std::vector<double>& completion_times() const { return completions_; }

 private:
  const Scenario* scenario_;
  int active_ = 0;
  std::optional<double> hold_start_;
  std::vector<double> completions_;
};

// A running operator model: owns the random stream and replay cursor.
class OperatorSession {
 public:
  OperatorSession(OperatorModel model, const Scenario& scenario, std::uint64_t seed);

  [[nodiscard]] OperatorInput next(const RobotState& state, int active_task);
  [[nodiscard]] const OperatorModel& model() const { return model_; }

 private:
  OperatorModel model_;
  const Scenario* scenario_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
};

}  // namespace rmpta
