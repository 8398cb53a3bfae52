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
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qoc/control.hpp"
#include "qoc/fidelity.hpp"

namespace qoc {

enum class Termination { goal_reached, max_iterations, stalled };

std::string_view to_string(Termination t);

// Budget and stopping rule shared by every algorithm. The seed determines
// every stochastic draw of a run.
struct RunSettings {
  std::size_t max_iterations = 1000;
  double fidelity_goal = 0.999;
  std::uint64_t seed = 0;
  bool operator==(const RunSettings&) const = default;
};

// Layout of a piecewise-constant sequence and the spread of its random
// initial amplitudes (fraction of each channel's max_amplitude).
struct SequenceShape {
  std::size_t segments = 20;
  double total_time = 1.0;
  double initial_fraction = 0.1;
  bool operator==(const SequenceShape&) const = default;
};

// Trace entry 0 is the evaluation of the starting point; every iteration
// appends one entry, so iterations_used == fidelity_trace.size().
struct OptimizationResult {
  ControlSequence sequence;
  std::vector<double> fidelity_trace;   // mean ensemble fidelity
  std::vector<double> objective_trace;  // fidelity minus penalty
  std::vector<double> per_bin_profile;
  double final_fidelity = 0.0;
  double final_objective = 0.0;
  Termination termination = Termination::max_iterations;
  std::size_t iterations_used = 0;
  double wall_time_seconds = 0.0;
};

using Rng = std::mt19937_64;

/// Equal-duration sequence with amplitudes uniform in
/// [-f * max_amplitude, f * max_amplitude].
ControlSequence random_initial_sequence(const ControlSystem& system, const SequenceShape& shape,
                                        Rng& rng);

/// Fills sequence, final fidelity/objective and per-bin profile by
/// re-evaluating `best` on the problem.
void finalize_result(const ControlProblem& problem, const ControlSequence& best,
                     OptimizationResult& result);

}  // namespace qoc
