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
#include <map>
#include <string>
#include <vector>

#include "rmpta/geometry.hpp"
#include "rmpta/scenario.hpp"

namespace rmpta {

inline constexpr int kTraceSchemaVersion = 1;

struct TaskInfo {
  int position_policy = 0;
  int rotation_policy = 0;
  RollMode mode = RollMode::kHorizontal;
  Pose target;
};

struct TraceHeader {
  int schema_version = kTraceSchemaVersion;
  std::uint64_t seed = 0;
  std::string operator_kind;
  double dt = 0.01;
  std::vector<std::string> mission_names;
  std::vector<std::string> safety_names;
  std::vector<TaskInfo> tasks;
  double convergence_threshold = 0.95;
  TaskTolerance tolerance;
  // Present on live-session traces only; written as a second header line.
  std::map<std::string, std::string> client;
};

// One control tick: the state entering the tick and everything decided in it.
struct TraceRecord {
  double t = 0.0;
  Pose pose;
  Twist twist;
  Eigen::VectorXd u_h;
  Vector6d u_r = Vector6d::Zero();
  Eigen::VectorXd alpha;
  Eigen::VectorXd p;
  Eigen::VectorXd cond;
  Eigen::VectorXd prior;
  Eigen::VectorXd phi;  // mission potentials, then safety potentials
  int task = -1;        // active schedule entry, -1 when none
};

struct EpisodeTrace {
  TraceHeader header;
  std::vector<TraceRecord> records;

  [[nodiscard]] bool empty() const { return records.empty(); }
  [[nodiscard]] double duration() const {
    return records.empty() ? 0.0 : records.back().t - records.front().t;
  }
};

[[nodiscard]] TraceHeader make_trace_header(const Scenario& scenario, std::uint64_t seed,
                                            std::string operator_kind);

/// Line-delimited JSON: header line, optional client line, one line per record.
void write_trace(std::ostream& out, const EpisodeTrace& trace);
[[nodiscard]] EpisodeTrace read_trace(std::istream& in);
void save_trace(const std::string& path, const EpisodeTrace& trace);
[[nodiscard]] EpisodeTrace load_trace(const std::string& path);

[[nodiscard]] std::string encode_record(const TraceRecord& record);
[[nodiscard]] TraceRecord decode_record(const std::string& line);
[[nodiscard]] std::string encode_header(const TraceHeader& header);
[[nodiscard]] std::string encode_client_line(const std::map<std::string, std::string>& client);

bool operator==(const TraceRecord& a, const TraceRecord& b);

}  // namespace rmpta
