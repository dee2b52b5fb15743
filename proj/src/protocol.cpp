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

#include "rmpta/protocol.hpp"

#include <cmath>
#include <json.hpp>

namespace rmpta {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw MalformedFrame(what); }

const json& field(const json& p, const char* key) {
  if (!p.contains(key)) malformed(std::string("missing field '") + key + "'");
  return p.at(key);
}

double number(const json& j, const char* key) {
  if (!j.is_number()) malformed(std::string("field '") + key + "' is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) malformed(std::string("field '") + key + "' is not finite");
  return v;
}

template <std::size_t N>
std::array<double, N> fixed(const json& p, const char* key) {
  const json& j = field(p, key);
  if (!j.is_array() || j.size() != N) malformed(std::string("field '") + key + "' has the wrong length");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], key);
  return out;
}

std::vector<double> numbers(const json& p, const char* key) {
  const json& j = field(p, key);
  if (!j.is_array()) malformed(std::string("field '") + key + "' is not an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

std::string text(const json& p, const char* key) {
  const json& j = field(p, key);
  if (!j.is_string()) malformed(std::string("field '") + key + "' is not a string");
  return j.get<std::string>();
}

std::int64_t integer(const json& p, const char* key) {
  const json& j = field(p, key);
  if (!j.is_number_integer()) malformed(std::string("field '") + key + "' is not an integer");
  return j.get<std::int64_t>();
}

std::string mode_name(RollMode m) { return m == RollMode::kHorizontal ? "horizontal" : "vertical"; }

RollMode mode_of(const json& p, const char* key) {
  const std::string s = text(p, key);
  if (s == "horizontal") return RollMode::kHorizontal;
  if (s == "vertical") return RollMode::kVertical;
  malformed("unknown rotation mode '" + s + "'");
}

json to_payload(const StateFrame& f) {
  json targets = json::array();
  for (const auto& t : f.target_list) targets.push_back({{"pose", t.pose}, {"mode", mode_name(t.mode)}});
  return {{"t", f.t},
          {"pose", f.pose},
          {"surface_coords", f.surface_coords},
          {"twist", f.twist},
          {"alpha", f.alpha},
          {"likelihood", f.likelihood},
          {"conditional", f.conditional},
          {"prior", f.prior},
          {"active_target", f.active_target},
          {"target_list", targets},
          {"distance_to_surface", f.distance_to_surface}};
}

json to_payload(const InputFrame& f) {
  return {{"u_h", f.u_h}, {"client_time", f.client_time}, {"sequence", f.sequence}};
}

json to_payload(const HelloFrame& f) { return {{"role", f.role}, {"client", f.client}}; }

json to_payload(const InstructionFrame& f) {
  return {{"target", f.target}, {"mode", mode_name(f.mode)}, {"text", f.text}};
}

const char* type_name(const Frame& f) {
  static constexpr const char* kNames[] = {"state", "input", "hello", "instruction"};
  return kNames[f.index()];
}

StateFrame state_from(const json& p) {
  StateFrame f;
  f.t = number(field(p, "t"), "t");
  f.pose = fixed<7>(p, "pose");
  f.surface_coords = fixed<3>(p, "surface_coords");
  f.twist = fixed<6>(p, "twist");
  f.alpha = numbers(p, "alpha");
  f.likelihood = numbers(p, "likelihood");
  f.conditional = numbers(p, "conditional");
  f.prior = numbers(p, "prior");
  f.active_target = static_cast<int>(integer(p, "active_target"));
  const json& targets = field(p, "target_list");
  if (!targets.is_array()) malformed("field 'target_list' is not an array");
  for (const auto& t : targets) {
    if (!t.is_object()) malformed("target entry is not an object");
    f.target_list.push_back({fixed<7>(t, "pose"), mode_of(t, "mode")});
  }
  f.distance_to_surface = number(field(p, "distance_to_surface"), "distance_to_surface");
  return f;
}

InputFrame input_from(const json& p) {
  InputFrame f;
  f.u_h = fixed<3>(p, "u_h");
  f.client_time = number(field(p, "client_time"), "client_time");
  f.sequence = integer(p, "sequence");
  return f;
}

HelloFrame hello_from(const json& p) {
  HelloFrame f{text(p, "role"), p.contains("client") ? text(p, "client") : std::string{}};
  if (f.role != "operator" && f.role != "observer") malformed("unknown role '" + f.role + "'");
  return f;
}

InstructionFrame instruction_from(const json& p) {
  return {static_cast<int>(integer(p, "target")), mode_of(p, "mode"),
          p.contains("text") ? text(p, "text") : std::string{}};
}

}  // namespace

std::string encode(const Frame& frame) {
  const json payload = std::visit([](const auto& f) { return to_payload(f); }, frame);
  return json{{"type", type_name(frame)}, {"payload", payload}}.dump();
}

Frame decode(const std::string& raw) {
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::exception&) {
    malformed("frame is not valid JSON");
  }
  if (!doc.is_object()) malformed("frame is not an object");
  const std::string type = text(doc, "type");
  const json& payload = field(doc, "payload");
  if (!payload.is_object() || payload.empty()) malformed("empty payload");
  try {
    if (type == "state") return state_from(payload);
    if (type == "input") return input_from(payload);
    if (type == "hello") return hello_from(payload);
    if (type == "instruction") return instruction_from(payload);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  malformed("unknown frame type '" + type + "'");
}

std::array<double, 7> pose_array(const Pose& pose) {
  const auto& p = pose.position;
  const auto& q = pose.orientation;
  return {p.x(), p.y(), p.z(), q.w(), q.x(), q.y(), q.z()};
}

Pose array_pose(const std::array<double, 7>& a) {
  Pose pose;
  pose.position = {a[0], a[1], a[2]};
  pose.orientation.w() = a[3];
  pose.orientation.x() = a[4];
  pose.orientation.y() = a[5];
  pose.orientation.z() = a[6];
  return pose;
}

}  // namespace rmpta
