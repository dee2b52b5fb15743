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
#include <filesystem>
#include <string>
#include <vector>

#include "rmpta/metrics.hpp"
#include "rmpta/operators.hpp"
#include "rmpta/scenario.hpp"

namespace rmpta {

struct BatchResult {
  std::vector<EpisodeMetrics> episodes;
  std::vector<std::uint64_t> diverged;  // seeds whose episode hit the divergence fuse
  std::filesystem::path summary;

  [[nodiscard]] bool ok() const { return diverged.empty(); }
};

[[nodiscard]] std::string trace_filename(std::uint64_t seed);

/// Runs seeds 0..count-1, writing one trace per episode and summary.csv into `out_dir`.
[[nodiscard]] BatchResult run_batch(const ScenarioParams& params, const OperatorModel& model,
                                    int count, const std::filesystem::path& out_dir);

/// Recomputes summary.csv from every trace in `dir`; returns its path.
std::filesystem::path summarize_traces(const std::filesystem::path& dir);

/// Inputs recorded in a trace, for the replay operator.
[[nodiscard]] ReplayOperator replay_from_trace(const EpisodeTrace& trace);

}  // namespace rmpta
