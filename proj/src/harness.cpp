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

#include "rmpta/harness.hpp"

#include <algorithm>
#include <fstream>

#include "rmpta/sim.hpp"
#include "rmpta/trace.hpp"

namespace rmpta {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << text;
  if (!out) throw IoFailure("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoFailure("cannot create directory " + dir.string());
}

}  // namespace

std::string trace_filename(std::uint64_t seed) {
  return "episode_" + std::to_string(seed) + ".jsonl";
}

BatchResult run_batch(const ScenarioParams& params, const OperatorModel& model, int count,
                      const fs::path& out_dir) {
  if (count < 1) throw BadParams("run_batch: need at least one seed");
  ensure_dir(out_dir);
  const Scenario scenario(params);
  BatchResult result;
  for (int i = 0; i < count; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    EpisodeTrace trace;
    try {
      trace = run_episode(scenario, model, seed);
    } catch (const Diverged&) {
      result.diverged.push_back(seed);
      continue;
    }
    save_trace((out_dir / trace_filename(seed)).string(), trace);
    result.episodes.push_back(compute_metrics(trace));
  }
  result.summary = out_dir / "summary.csv";
  write_text(result.summary, summary_csv(result.episodes));
  return result;
}

fs::path summarize_traces(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoFailure("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  if (files.empty()) throw IoFailure("no traces in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<EpisodeMetrics> episodes;
  for (const auto& f : files) episodes.push_back(compute_metrics(load_trace(f.string())));
  std::stable_sort(episodes.begin(), episodes.end(),
                   [](const EpisodeMetrics& a, const EpisodeMetrics& b) { return a.seed < b.seed; });
  const fs::path out = dir / "summary.csv";
  write_text(out, summary_csv(episodes));
  return out;
}

ReplayOperator replay_from_trace(const EpisodeTrace& trace) {
  ReplayOperator op;
  op.inputs.reserve(trace.records.size());
  for (const auto& r : trace.records) op.inputs.push_back({r.u_h, r.t});
  return op;
}

}  // namespace rmpta
