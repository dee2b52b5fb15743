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
#include <vector>

#include "rmpta/adaptation.hpp"
#include "rmpta/operators.hpp"
#include "rmpta/scenario.hpp"
#include "rmpta/trace.hpp"

namespace rmpta {

// Twist norm beyond which an episode is aborted.
inline constexpr double kDivergenceSpeed = 10.0;

/// Combined configuration-space acceleration of all policies, mission metrics scaled by alpha.
[[nodiscard]] Vector6d compose_motion(const RobotState& state, const Scenario& scenario,
                                      const ScaleVector& alpha);

/// Semi-implicit Euler step of the end-effector double integrator.
[[nodiscard]] RobotState integrate_step(const RobotState& state, const Vector6d& u_r, double dt);

/// Norm of sum_i alpha_i J_i^T A_i grad Phi_i over the mission policies.
[[nodiscard]] double optimality_residual(const RobotState& state, const Scenario& scenario,
                                         const ScaleVector& alpha);

/// Potentials of every policy, mission first.
[[nodiscard]] Eigen::VectorXd policy_potentials(const RobotState& state, const Scenario& scenario);

// Tick-by-tick episode driver; the input source is up to the caller.
class EpisodeRunner {
 public:
  EpisodeRunner(const Scenario& scenario, TraceHeader header);

  /// Advances one tick with the given input and returns the record it appended.
  const TraceRecord& step(const OperatorInput& input);

  [[nodiscard]] const RobotState& state() const { return state_; }
  [[nodiscard]] const ScaleVector& alpha() const { return alpha_; }
  [[nodiscard]] const LikelihoodReport& report() const { return report_; }
  [[nodiscard]] const TaskSchedule& schedule() const { return schedule_; }
  [[nodiscard]] const Scenario& scenario() const { return *scenario_; }
  [[nodiscard]] int active_task() const { return schedule_.active(); }
  [[nodiscard]] long ticks() const { return tick_; }
  [[nodiscard]] bool timed_out() const;
  [[nodiscard]] const EpisodeTrace& trace() const { return trace_; }
  [[nodiscard]] EpisodeTrace take_trace() { return std::move(trace_); }

  /// Refreshes the schedule once per tick; returns the active task.
  int observe();

 private:
  const Scenario* scenario_;
  RobotState state_;
  ScaleVector alpha_;
  LikelihoodReport report_;
  TaskSchedule schedule_;
  EpisodeTrace trace_;
  long tick_ = 0;
  long observed_tick_ = -1;
};

struct EpisodeOptions {
  bool stop_when_complete = true;
  double max_duration = -1.0;  // negative: scenario value
};

[[nodiscard]] EpisodeTrace run_episode(const Scenario& scenario, const OperatorModel& model,
                                       std::uint64_t seed, const EpisodeOptions& options = {});

}  // namespace rmpta
