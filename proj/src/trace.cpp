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

#include "rmpta/trace.hpp"

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

namespace rmpta {
namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd json_vec(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw IoFailure(std::string("trace record is missing array field '") + field + "'");
  }
  const auto& arr = j.at(field);
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

json pose_json(const Pose& p) {
  return json::array({p.position.x(), p.position.y(), p.position.z(), p.orientation.w(),
                      p.orientation.x(), p.orientation.y(), p.orientation.z()});
}

Pose json_pose(const Eigen::VectorXd& v) {
  if (v.size() != 7) throw IoFailure("pose must have 7 entries");
  Pose p;
  // Stored quaternions are already unit; keep the bits untouched.
  p.position = v.head<3>();
  p.orientation = Eigen::Quaterniond(v(3), v(4), v(5), v(6));
  return p;
}

const char* mode_name(RollMode m) { return m == RollMode::kHorizontal ? "horizontal" : "vertical"; }

RollMode parse_mode(const std::string& s) {
  if (s == "horizontal") return RollMode::kHorizontal;
  if (s == "vertical") return RollMode::kVertical;
  throw IoFailure("unknown roll mode '" + s + "'");
}

json header_json(const TraceHeader& h) {
  json tasks = json::array();
  for (const auto& t : h.tasks) {
    tasks.push_back({{"position_policy", t.position_policy},
                     {"rotation_policy", t.rotation_policy},
                     {"mode", mode_name(t.mode)},
                     {"pose", pose_json(t.target)}});
  }
  return {{"type", "header"},
          {"schema_version", h.schema_version},
          {"seed", h.seed},
          {"operator", h.operator_kind},
          {"dt", h.dt},
          {"mission", h.mission_names},
          {"safety", h.safety_names},
          {"tasks", tasks},
          {"convergence_threshold", h.convergence_threshold},
          {"tolerance",
           {{"position", h.tolerance.position},
            {"rotation", h.tolerance.rotation},
            {"dwell", h.tolerance.dwell}}}};
}

TraceHeader parse_header(const json& j) {
  TraceHeader h;
  try {
    h.schema_version = j.at("schema_version").get<int>();
    if (h.schema_version != kTraceSchemaVersion) {
      throw IoFailure("unsupported trace schema version " + std::to_string(h.schema_version));
    }
    h.seed = j.at("seed").get<std::uint64_t>();
    h.operator_kind = j.at("operator").get<std::string>();
    h.dt = j.at("dt").get<double>();
    h.mission_names = j.at("mission").get<std::vector<std::string>>();
    h.safety_names = j.at("safety").get<std::vector<std::string>>();
    for (const auto& t : j.at("tasks")) {
      TaskInfo info;
      info.position_policy = t.at("position_policy").get<int>();
      info.rotation_policy = t.at("rotation_policy").get<int>();
      info.mode = parse_mode(t.at("mode").get<std::string>());
      info.target = json_pose(json_vec(t, "pose"));
      h.tasks.push_back(info);
    }
    h.convergence_threshold = j.at("convergence_threshold").get<double>();
    const auto& tol = j.at("tolerance");
    h.tolerance.position = tol.at("position").get<double>();
    h.tolerance.rotation = tol.at("rotation").get<double>();
    h.tolerance.dwell = tol.at("dwell").get<double>();
  } catch (const json::exception& e) {
    throw IoFailure(std::string("malformed trace header: ") + e.what());
  }
  return h;
}

}  // namespace

TraceHeader make_trace_header(const Scenario& scenario, std::uint64_t seed, std::string operator_kind) {
  TraceHeader h;
  h.seed = seed;
  h.operator_kind = std::move(operator_kind);
  h.dt = scenario.dt();
  for (const auto& s : scenario.mission()) h.mission_names.push_back(s.name);
  for (const auto& s : scenario.safety()) h.safety_names.push_back(s.name);
  for (int k = 0; k < scenario.task_count(); ++k) {
    h.tasks.push_back({scenario.position_policy(k), scenario.rotation_policy_for_task(k),
                       scenario.targets()[static_cast<std::size_t>(k)].mode, scenario.target_pose(k)});
  }
  h.convergence_threshold = scenario.params().convergence_threshold;
  h.tolerance = scenario.params().tolerance;
  return h;
}

std::string encode_record(const TraceRecord& r) {
  json j = {{"t", r.t},
            {"pose", pose_json(r.pose)},
            {"twist", vec_json(r.twist.stacked())},
            {"u_h", vec_json(r.u_h)},
            {"u_r", vec_json(r.u_r)},
            {"alpha", vec_json(r.alpha)},
            {"p", vec_json(r.p)},
            {"cond", vec_json(r.cond)},
            {"prior", vec_json(r.prior)},
            {"phi", vec_json(r.phi)},
            {"task", r.task}};
  return j.dump();
}

TraceRecord decode_record(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoFailure(std::string("unparseable trace line: ") + e.what());
  }
  TraceRecord r;
  try {
    r.t = j.at("t").get<double>();
    r.task = j.at("task").get<int>();
  } catch (const json::exception& e) {
    throw IoFailure(std::string("trace record: ") + e.what());
  }
  r.pose = json_pose(json_vec(j, "pose"));
  const Eigen::VectorXd tw = json_vec(j, "twist");
  if (tw.size() != 6) throw IoFailure("twist must have 6 entries");
  r.twist = Twist::from_stacked(tw);
  r.u_h = json_vec(j, "u_h");
  const Eigen::VectorXd ur = json_vec(j, "u_r");
  if (ur.size() != 6) throw IoFailure("u_r must have 6 entries");
  r.u_r = ur;
  r.alpha = json_vec(j, "alpha");
  r.p = json_vec(j, "p");
  r.cond = json_vec(j, "cond");
  r.prior = json_vec(j, "prior");
  r.phi = json_vec(j, "phi");
  return r;
}

std::string encode_header(const TraceHeader& header) { return header_json(header).dump(); }

std::string encode_client_line(const std::map<std::string, std::string>& client) {
  json j = {{"type", "client"}, {"client", client}};
  return j.dump();
}

void write_trace(std::ostream& out, const EpisodeTrace& trace) {
  out << encode_header(trace.header) << '\n';
  if (!trace.header.client.empty()) out << encode_client_line(trace.header.client) << '\n';
  for (const auto& r : trace.records) out << encode_record(r) << '\n';
}

EpisodeTrace read_trace(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_header) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw IoFailure(std::string("unparseable trace header: ") + e.what());
      }
      if (j.value("type", "") != "header") throw IoFailure("trace does not start with a header line");
      trace.header = parse_header(j);
      have_header = true;
      continue;
    }
    if (line.find("\"type\"") != std::string::npos) {
      const json j = json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.value("type", "") == "client") {
        trace.header.client = j.at("client").get<std::map<std::string, std::string>>();
        continue;
      }
    }
    trace.records.push_back(decode_record(line));
  }
  if (!have_header) throw IoFailure("empty trace");
  return trace;
}

void save_trace(const std::string& path, const EpisodeTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  write_trace(out, trace);
  if (!out) throw IoFailure("write failed for " + path);
}

EpisodeTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path);
  return read_trace(in);
}

bool operator==(const TraceRecord& a, const TraceRecord& b) {
  return a.t == b.t && a.pose.position == b.pose.position &&
         a.pose.orientation.coeffs() == b.pose.orientation.coeffs() &&
         a.twist.stacked() == b.twist.stacked() && a.u_h == b.u_h && a.u_r == b.u_r &&
         a.alpha == b.alpha && a.p == b.p && a.cond == b.cond && a.prior == b.prior &&
         a.phi == b.phi && a.task == b.task;
}

}  // namespace rmpta
