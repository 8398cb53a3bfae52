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

#include <cstddef>

#include "qoc/optim/annealing.hpp"
#include "qoc/optim/grape.hpp"

namespace qoc {

// Alternating schedule: every cycle runs sa_blocks_per_cycle annealing
// blocks, restarts GRAPE from the annealing best, runs
// grape_iterations_per_cycle GRAPE steps and hands the GRAPE best back to
// the annealer as its current point. Both shapes must agree.
struct SagrapeConfig {
  AnnealingConfig sa;
  GrapeConfig grape;
  std::size_t sa_blocks_per_cycle = 5;
  std::size_t grape_iterations_per_cycle = 50;
  bool operator==(const SagrapeConfig&) const = default;
};

/// Every annealing block and every GRAPE step is one iteration. With zero
/// annealing blocks the run reproduces grape_run; with zero GRAPE steps it
/// reproduces sa_run (same seed).
OptimizationResult sagrape_run(const ControlProblem& problem, const SagrapeConfig& config,
                               const RunSettings& settings);

}  // namespace qoc
