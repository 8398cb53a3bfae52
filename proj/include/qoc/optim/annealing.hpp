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
#include <functional>

#include "qoc/optim/common.hpp"

namespace qoc {

/// min(1, T exp(-delta_phi / T)). Throws ValidationError for T <= 0.
double sa_threshold(double temperature, double delta_phi);

// Threshold annealing over a real vector, maximizing `objective`. A move
// perturbs one uniformly chosen coordinate by N(0, scale_i) and is kept
// when delta_phi = phi(current) - phi(neighbor) <= sa_threshold(T,
// delta_phi). The temperature is multiplied by `cooling` after every block.
class Annealer {
 public:
  using Objective = std::function<double(const RealVector&)>;

  Annealer(Objective objective, RealVector start, RealVector scales, double initial_temperature,
           double cooling, std::size_t moves_per_block, Rng& rng);

  /// Runs one block of moves, then cools. Returns true when the best value
  /// improved during the block.
  bool run_block();

  /// Replace the current point (the best is kept if still better).
  void reset_current(RealVector x);

  const RealVector& current() const { return current_; }
  double current_value() const { return current_value_; }
  const RealVector& best() const { return best_; }
  double best_value() const { return best_value_; }
  double temperature() const { return temperature_; }

 private:
  Objective objective_;
  RealVector current_;
  double current_value_;
  RealVector best_;
  double best_value_;
  RealVector scales_;
  double temperature_;
  double cooling_;
  std::size_t moves_;
  Rng& rng_;
};

struct AnnealingConfig {
  SequenceShape shape;
  double initial_temperature = 0.01;
  double cooling = 0.95;        // per block
  double neighborhood = 0.1;    // move scale as a fraction of max_amplitude
  std::size_t moves_per_block = 50;
  std::size_t stall_blocks = 200;  // blocks without a new best before stalling
  bool operator==(const AnnealingConfig&) const = default;
};

/// Per-coordinate move scales for a flattened (column-major) amplitude
/// matrix.
RealVector annealing_scales(const ControlSystem& system, std::size_t segments, double neighborhood);

/// Seeded random start, then annealing on the penalized objective. One
/// iteration is one block; the trace records the best-so-far fidelity.
OptimizationResult sa_run(const ControlProblem& problem, const AnnealingConfig& config,
                          const RunSettings& settings);

}  // namespace qoc
