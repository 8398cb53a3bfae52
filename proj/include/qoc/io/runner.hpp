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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qoc/io/problem_file.hpp"
#include "qoc/optim/common.hpp"

namespace qoc::io {

inline constexpr int kExitGoal = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMaxIterations = 2;
inline constexpr int kExitStalled = 3;

int exit_code(Termination t);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iterations;
};

/// Applies overrides to both the built config and the resolved echo.
void apply_overrides(LoadedProblem& loaded, const RunOverrides& overrides);

std::string trace_csv(const OptimizationResult& result);
std::string profile_csv(const ControlProblem& problem, const OptimizationResult& result);
nlohmann::json run_manifest(const LoadedProblem& loaded, const OptimizationResult& result);

/// Channel labels of the system in column order.
std::vector<std::string> channel_labels(const ControlSystem& system);

// Command entry points. They report to `out`/`err` and return the exit code;
// no exception escapes.
int run_command(const std::filesystem::path& problem_path, const std::filesystem::path& out_dir,
                const RunOverrides& overrides, std::ostream& out, std::ostream& err);
int evaluate_command(const std::filesystem::path& pulse_path, const std::filesystem::path& problem_path,
                     std::ostream& out, std::ostream& err);
int validate_command(const std::filesystem::path& problem_path, std::ostream& out, std::ostream& err);

}  // namespace qoc::io
