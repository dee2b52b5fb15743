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

#include "rmpta/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace rmpta {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigParse("config field '" + field + "': " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path + key, "missing");
  return j.at(key);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) fail(path + key, "unknown key");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "not finite");
  return v;
}

void read_number(const json& j, const std::string& key, const std::string& path, double& out) {
  if (j.contains(key)) out = number(j.at(key), path + key);
}

Eigen::Vector3d vector3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) fail(field, "expected 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v(i) = number(j.at(static_cast<std::size_t>(i)), field);
  return v;
}

const json& section(const json& j, const std::string& key, const std::string& path) {
  const json& s = j.at(key);
  if (!s.is_object()) fail(path + key, "expected an object");
  return s;
}

void read_attractor(const json& j, const std::string& path, AttractorParams& p) {
  reject_unknown(j, {"gain", "softness", "damping", "weight"}, path);
  read_number(j, "gain", path, p.gain);
  read_number(j, "softness", path, p.softness);
  read_number(j, "damping", path, p.damping);
  if (j.contains("weight")) {
    const json& w = j.at("weight");
    if (w.is_number()) {
      p.weight = Eigen::VectorXd::Constant(1, number(w, path + "weight"));
    } else if (w.is_array() && !w.empty()) {
      p.weight.resize(static_cast<Eigen::Index>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i) p.weight(static_cast<Eigen::Index>(i)) = number(w[i], path + "weight");
    } else {
      fail(path + "weight", "expected a number or a non-empty array");
    }
  }
}

void read_keeper(const json& j, const std::string& path, KeeperParams& p) {
  reject_unknown(j, {"setpoint", "stiffness", "damping", "barrier_scale", "steepness", "floor"}, path);
  read_number(j, "setpoint", path, p.setpoint);
  read_number(j, "stiffness", path, p.stiffness);
  read_number(j, "damping", path, p.damping);
  read_number(j, "barrier_scale", path, p.barrier_scale);
  read_number(j, "steepness", path, p.steepness);
  read_number(j, "floor", path, p.floor);
}

RollMode parse_mode(const json& j, const std::string& field) {
  if (j == "horizontal") return RollMode::kHorizontal;
  if (j == "vertical") return RollMode::kVertical;
  fail(field, "expected \"horizontal\" or \"vertical\"");
}

ordered attractor_json(const AttractorParams& p) {
  ordered w = ordered::array();
  for (Eigen::Index i = 0; i < p.weight.size(); ++i) w.push_back(p.weight(i));
  return {{"gain", p.gain}, {"softness", p.softness}, {"damping", p.damping}, {"weight", w}};
}

ordered keeper_json(const KeeperParams& p) {
  return {{"setpoint", p.setpoint},         {"stiffness", p.stiffness}, {"damping", p.damping},
          {"barrier_scale", p.barrier_scale}, {"steepness", p.steepness}, {"floor", p.floor}};
}

ordered vec3_json(const Eigen::Vector3d& v) { return ordered::array({v.x(), v.y(), v.z()}); }

// Puts arrays of plain numbers on one line.
std::string compact_arrays(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') {
      const std::size_t close = text.find(']', i);
      const std::string inner = text.substr(i + 1, close - i - 1);
      if (close != std::string::npos && inner.find_first_of("[{\"") == std::string::npos) {
        out += '[';
        bool first = true;
        std::size_t pos = 0;
        while (pos < inner.size()) {
          const std::size_t comma = inner.find(',', pos);
          std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
          item.erase(0, item.find_first_not_of(" \n"));
          item.erase(item.find_last_not_of(" \n") + 1);
          if (!item.empty()) {
            if (!first) out += ", ";
            out += item;
            first = false;
          }
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
        out += ']';
        i = close;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

ScenarioParams parse_document(const json& doc) {
  if (!doc.is_object()) fail("", "document must be an object");
  reject_unknown(doc, {"schema_version", "cylinder", "targets", "inspection", "policies", "safety",
                       "adaptation", "sim", "start", "metrics"},
                 "");
  const json& version = require(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kConfigSchemaVersion) {
    fail("schema_version", "unsupported version, expected " + std::to_string(kConfigSchemaVersion));
  }

  ScenarioParams p = reference_params();
  p.targets.clear();

  const json& cyl = require(doc, "cylinder", "");
  if (!cyl.is_object()) fail("cylinder", "expected an object");
  reject_unknown(cyl, {"origin", "axis", "reference", "radius", "height"}, "cylinder.");
  p.cylinder_radius = number(require(cyl, "radius", "cylinder."), "cylinder.radius");
  p.cylinder_height = number(require(cyl, "height", "cylinder."), "cylinder.height");
  if (cyl.contains("origin")) p.cylinder_origin = vector3(cyl.at("origin"), "cylinder.origin");
  if (cyl.contains("axis")) p.cylinder_axis = vector3(cyl.at("axis"), "cylinder.axis");
  if (cyl.contains("reference")) p.cylinder_reference = vector3(cyl.at("reference"), "cylinder.reference");

  const json& targets = require(doc, "targets", "");
  if (!targets.is_array() || targets.empty()) fail("targets", "expected a non-empty array");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string path = "targets[" + std::to_string(i) + "].";
    const json& t = targets[i];
    reject_unknown(t, {"height", "arc", "mode"}, path);
    InspectionTarget target;
    target.height = number(require(t, "height", path), path + "height");
    target.arc = number(require(t, "arc", path), path + "arc");
    target.mode = parse_mode(require(t, "mode", path), path + "mode");
    p.targets.push_back(target);
  }

  if (doc.contains("inspection")) {
    const json& s = section(doc, "inspection", "");
    reject_unknown(s, {"standoff"}, "inspection.");
    read_number(s, "standoff", "inspection.", p.standoff);
  }
  if (doc.contains("policies")) {
    const json& s = section(doc, "policies", "");
    reject_unknown(s, {"position", "rotation"}, "policies.");
    if (s.contains("position")) read_attractor(section(s, "position", "policies."), "policies.position.", p.position);
    if (s.contains("rotation")) read_attractor(section(s, "rotation", "policies."), "policies.rotation.", p.rotation);
  }
  if (doc.contains("safety")) {
    const json& s = section(doc, "safety", "");
    reject_unknown(s, {"d_safe", "distance", "normal"}, "safety.");
    read_number(s, "d_safe", "safety.", p.d_safe);
    if (s.contains("distance")) read_keeper(section(s, "distance", "safety."), "safety.distance.", p.distance);
    if (s.contains("normal")) read_keeper(section(s, "normal", "safety."), "safety.normal.", p.normal);
  }
  if (doc.contains("adaptation")) {
    const json& s = section(doc, "adaptation", "");
    reject_unknown(s, {"gain", "alpha_step", "gamma_tolerance", "update_rate", "hold_without_input"}, "adaptation.");
    if (s.contains("gain")) {
      const json& k = s.at("gain");
      if (k.is_number()) {
        p.adaptation.gain = number(k, "adaptation.gain") * Eigen::MatrixXd::Identity(3, 3);
      } else if (k.is_array() && k.size() == 3) {
        for (std::size_t r = 0; r < 3; ++r) {
          const Eigen::Vector3d row = vector3(k[r], "adaptation.gain");
          p.adaptation.gain.row(static_cast<Eigen::Index>(r)) = row.transpose();
        }
      } else {
        fail("adaptation.gain", "expected a number or a 3 x 3 array");
      }
    }
    read_number(s, "alpha_step", "adaptation.", p.adaptation.alpha_step);
    read_number(s, "gamma_tolerance", "adaptation.", p.adaptation.gamma_tolerance);
    read_number(s, "update_rate", "adaptation.", p.adaptation.update_rate);
    if (s.contains("hold_without_input")) {
      const json& h = s.at("hold_without_input");
      if (!h.is_boolean()) fail("adaptation.hold_without_input", "expected true or false");
      p.adaptation.hold_without_input = h.get<bool>();
    }
  }
  if (doc.contains("sim")) {
    const json& s = section(doc, "sim", "");
    reject_unknown(s, {"dt", "max_duration"}, "sim.");
    read_number(s, "dt", "sim.", p.dt);
    read_number(s, "max_duration", "sim.", p.max_duration);
  }
  if (doc.contains("start")) {
    const json& s = section(doc, "start", "");
    reject_unknown(s, {"height", "arc", "distance", "roll", "alpha"}, "start.");
    read_number(s, "height", "start.", p.initial_height);
    read_number(s, "arc", "start.", p.initial_arc);
    read_number(s, "distance", "start.", p.initial_distance);
    read_number(s, "roll", "start.", p.initial_roll);
    read_number(s, "alpha", "start.", p.initial_alpha);
  }
  if (doc.contains("metrics")) {
    const json& s = section(doc, "metrics", "");
    reject_unknown(s, {"convergence_threshold", "tolerance"}, "metrics.");
    read_number(s, "convergence_threshold", "metrics.", p.convergence_threshold);
    if (s.contains("tolerance")) {
      const json& t = section(s, "tolerance", "metrics.");
      reject_unknown(t, {"position", "rotation", "dwell"}, "metrics.tolerance.");
      read_number(t, "position", "metrics.tolerance.", p.tolerance.position);
      read_number(t, "rotation", "metrics.tolerance.", p.tolerance.rotation);
      read_number(t, "dwell", "metrics.tolerance.", p.tolerance.dwell);
    }
  }
  return p;
}

}  // namespace

ScenarioParams parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioParams p = parse_document(doc);
  // Construct once so geometric and numeric constraints surface as config errors.
  try {
    (void)Scenario(p);
  } catch (const BadParams& e) {
    throw ConfigParse(std::string("config rejected: ") + e.what());
  }
  return p;
}

ScenarioParams load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const ScenarioParams& p) {
  ordered targets = ordered::array();
  for (const auto& t : p.targets) {
    targets.push_back({{"height", t.height},
                       {"arc", t.arc},
                       {"mode", t.mode == RollMode::kHorizontal ? "horizontal" : "vertical"}});
  }
  ordered gain = ordered::array();
  for (Eigen::Index r = 0; r < p.adaptation.gain.rows(); ++r) {
    ordered row = ordered::array();
    for (Eigen::Index c = 0; c < p.adaptation.gain.cols(); ++c) row.push_back(p.adaptation.gain(r, c));
    gain.push_back(row);
  }
  ordered doc = {
      {"schema_version", kConfigSchemaVersion},
      {"cylinder",
       {{"origin", vec3_json(p.cylinder_origin)},
        {"axis", vec3_json(p.cylinder_axis)},
        {"reference", vec3_json(p.cylinder_reference)},
        {"radius", p.cylinder_radius},
        {"height", p.cylinder_height}}},
      {"targets", targets},
      {"inspection", {{"standoff", p.standoff}}},
      {"policies", {{"position", attractor_json(p.position)}, {"rotation", attractor_json(p.rotation)}}},
      {"safety",
       {{"d_safe", p.d_safe}, {"distance", keeper_json(p.distance)}, {"normal", keeper_json(p.normal)}}},
      {"adaptation",
       {{"gain", gain},
        {"alpha_step", p.adaptation.alpha_step},
        {"gamma_tolerance", p.adaptation.gamma_tolerance},
        {"update_rate", p.adaptation.update_rate},
        {"hold_without_input", p.adaptation.hold_without_input}}},
      {"sim", {{"dt", p.dt}, {"max_duration", p.max_duration}}},
      {"start",
       {{"height", p.initial_height},
        {"arc", p.initial_arc},
        {"distance", p.initial_distance},
        {"roll", p.initial_roll},
        {"alpha", p.initial_alpha}}},
      {"metrics",
       {{"convergence_threshold", p.convergence_threshold},
        {"tolerance",
         {{"position", p.tolerance.position},
          {"rotation", p.tolerance.rotation},
          {"dwell", p.tolerance.dwell}}}}},
  };
  return compact_arrays(doc.dump(2)) + "\n";
}

}  // namespace rmpta
