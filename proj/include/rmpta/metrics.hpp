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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmpta/trace.hpp"

namespace rmpta {

struct TaskInterval {
  std::size_t begin = 0;  // first record of the task
  std::size_t end = 0;    // one past the last record
  bool completed = false;
};

struct TaskMetrics {
  int task = 0;
  std::optional<double> convergence_position;  // s after task start
  std::optional<double> convergence_rotation;
  std::optional<double> completion;            // s after task start
  std::optional<double> translation_error;     // m
  std::optional<double> rotation_error;        // rad
};

struct EpisodeMetrics {
  std::uint64_t seed = 0;
  double effort = 0.0;
  std::vector<TaskMetrics> tasks;
};

[[nodiscard]] double compute_effort(const EpisodeTrace& trace);

/// Records during which `task` was active; nullopt if it never started.
[[nodiscard]] std::optional<TaskInterval> task_interval(const EpisodeTrace& trace, int task);

/// Seconds from task start until alpha of `policy` stays above the threshold; nullopt if never.
[[nodiscard]] std::optional<double> compute_convergence_time(const EpisodeTrace& trace, int task,
                                                             int policy);
[[nodiscard]] std::optional<double> compute_convergence_time(const EpisodeTrace& trace, int task,
                                                             bool rotation_feature);

/// Minimum translation and rotation error while inside the tolerance; nullopt if never reached.
[[nodiscard]] std::optional<std::pair<double, double>> compute_pose_errors(const EpisodeTrace& trace,
                                                                           int task);

[[nodiscard]] std::optional<double> compute_completion_time(const EpisodeTrace& trace, int task);

[[nodiscard]] EpisodeMetrics compute_metrics(const EpisodeTrace& trace);

void write_summary_header(std::ostream& out);
void write_summary_rows(std::ostream& out, const EpisodeMetrics& metrics);
[[nodiscard]] std::string summary_csv(const std::vector<EpisodeMetrics>& episodes);

}  // namespace rmpta
