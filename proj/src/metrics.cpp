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

#include "rmpta/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace rmpta {
namespace {

std::string cell(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

double compute_effort(const EpisodeTrace& trace) {
  if (trace.empty()) throw EmptyTrace("compute_effort: trace has no records");
  const auto& r = trace.records;
  if (r.size() == 1) return r.front().u_h.squaredNorm();
  double integral = 0.0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    integral += 0.5 * (r[k - 1].u_h.squaredNorm() + r[k].u_h.squaredNorm()) * (r[k].t - r[k - 1].t);
  }
  return integral / trace.duration();
}

std::optional<TaskInterval> task_interval(const EpisodeTrace& trace, int task) {
  const auto& r = trace.records;
  std::size_t k = 0;
  while (k < r.size() && r[k].task != task) ++k;
  if (k == r.size()) return std::nullopt;
  TaskInterval out{k, k, false};
  while (out.end < r.size() && r[out.end].task == task) ++out.end;
  out.completed = out.end < r.size();
  return out;
}

std::optional<double> compute_convergence_time(const EpisodeTrace& trace, int task, int policy) {
  const auto interval = task_interval(trace, task);
  if (!interval) return std::nullopt;
  const double threshold = trace.header.convergence_threshold;
  const auto& r = trace.records;
  std::optional<std::size_t> since;
  for (std::size_t k = interval->begin; k < interval->end; ++k) {
    if (r[k].alpha(policy) >= threshold) {
      if (!since) since = k;
    } else {
      since.reset();
    }
  }
  if (!since) return std::nullopt;
  return r[*since].t - r[interval->begin].t;
}

std::optional<double> compute_convergence_time(const EpisodeTrace& trace, int task,
                                               bool rotation_feature) {
  const auto& info = trace.header.tasks.at(static_cast<std::size_t>(task));
  return compute_convergence_time(trace, task,
                                  rotation_feature ? info.rotation_policy : info.position_policy);
}

std::optional<std::pair<double, double>> compute_pose_errors(const EpisodeTrace& trace, int task) {
  const auto interval = task_interval(trace, task);
  if (!interval) return std::nullopt;
  const auto& tol = trace.header.tolerance;
  const Pose& target = trace.header.tasks.at(static_cast<std::size_t>(task)).target;
  std::optional<std::pair<double, double>> best;
  // The record that completes the task belongs to the dwell window too.
  const std::size_t last = std::min(interval->end + (interval->completed ? 1 : 0), trace.records.size());
  for (std::size_t k = interval->begin; k < last; ++k) {
    const Pose& pose = trace.records[k].pose;
    const double trans = (pose.position - target.position).norm();
    const double rot = orientation_error(pose.orientation, target.orientation);
    if (trans > tol.position || rot > tol.rotation) continue;
    if (!best) {
      best = {trans, rot};
    } else {
      best->first = std::min(best->first, trans);
      best->second = std::min(best->second, rot);
    }
  }
  return best;
}

std::optional<double> compute_completion_time(const EpisodeTrace& trace, int task) {
  const auto interval = task_interval(trace, task);
  if (!interval || !interval->completed) return std::nullopt;
  return trace.records[interval->end].t - trace.records[interval->begin].t;
}

EpisodeMetrics compute_metrics(const EpisodeTrace& trace) {
  EpisodeMetrics out;
  out.seed = trace.header.seed;
  out.effort = compute_effort(trace);
  for (int k = 0; k < static_cast<int>(trace.header.tasks.size()); ++k) {
    TaskMetrics m;
    m.task = k;
    m.convergence_position = compute_convergence_time(trace, k, false);
    m.convergence_rotation = compute_convergence_time(trace, k, true);
    m.completion = compute_completion_time(trace, k);
    if (const auto err = compute_pose_errors(trace, k)) {
      m.translation_error = err->first;
      m.rotation_error = err->second;
    }
    out.tasks.push_back(m);
  }
  return out;
}

void write_summary_header(std::ostream& out) {
  out << "seed,task,convergence_pos_s,convergence_rot_s,completion_s,trans_err_m,rot_err_rad,effort\n";
}

void write_summary_rows(std::ostream& out, const EpisodeMetrics& metrics) {
  for (const auto& m : metrics.tasks) {
    out << metrics.seed << ',' << m.task + 1 << ',' << cell(m.convergence_position) << ','
        << cell(m.convergence_rotation) << ',' << cell(m.completion) << ','
        << cell(m.translation_error) << ',' << cell(m.rotation_error) << ','
        << cell(metrics.effort) << '\n';
  }
}

std::string summary_csv(const std::vector<EpisodeMetrics>& episodes) {
  std::ostringstream out;
  write_summary_header(out);
  for (const auto& e : episodes) write_summary_rows(out, e);
  return out.str();
}

}  // namespace rmpta
