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

#include <string>

#include "rmpta/scenario.hpp"

namespace rmpta {

inline constexpr int kConfigSchemaVersion = 1;

/// Parses a scenario document. Sections other than cylinder and targets fall back to defaults.
[[nodiscard]] ScenarioParams parse_config(const std::string& text);
[[nodiscard]] ScenarioParams load_config(const std::string& path);

/// Full document for `params`, every section present.
[[nodiscard]] std::string dump_config(const ScenarioParams& params);

}  // namespace rmpta
