/* Copyright 2026 The qoctl Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qoc/fidelity.hpp"
#include "qoc/optim/optimizer.hpp"

namespace qoc::io {

inline constexpr int kProblemFileVersion = 1;

// A validated problem file. `resolved` is the input with every default
// filled in; resolving it again yields the same document.
struct LoadedProblem {
  ControlProblem problem;
  OptimizerConfig optimizer;
  nlohmann::json resolved;
  std::vector<std::string> warnings;
};

/// JSON text to a document. Throws ParseError naming line and column.
nlohmann::json parse_json_text(std::string_view text);

/// Strict schema check plus defaults. Unknown keys and bad values throw
/// ValidationError whose message starts with the offending key path.
nlohmann::json resolve_problem(const nlohmann::json& document);

/// Builds the problem and optimizer settings from a document (resolving it
/// first). Physics violations throw ValidationError or DimensionError.
LoadedProblem build_problem(const nlohmann::json& document);

LoadedProblem load_problem_text(std::string_view text);
LoadedProblem load_problem_file(const std::filesystem::path& path);

/// Pretty-printed resolved document with a trailing newline.
std::string serialize_problem(const nlohmann::json& resolved);

}  // namespace qoc::io
