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

#include "qoc/optim/annealing.hpp"

#include <chrono>
#include <cmath>

#include "qoc/error.hpp"

namespace qoc {

double sa_threshold(double temperature, double delta_phi) {
  if (!(temperature > 0.0)) throw ValidationError("annealing temperature must be > 0");
  return std::min(1.0, temperature * std::exp(-delta_phi / temperature));
}

Annealer::Annealer(Objective objective, RealVector start, RealVector scales,
                   double initial_temperature, double cooling, std::size_t moves_per_block,
                   Rng& rng)
    : objective_(std::move(objective)),
      current_(std::move(start)),
      scales_(std::move(scales)),
      temperature_(initial_temperature),
      cooling_(cooling),
      moves_(moves_per_block),
      rng_(rng) {
  if (current_.size() == 0) throw ValidationError("annealing needs at least one coordinate");
  if (scales_.size() != current_.size()) throw DimensionError("annealing scales size mismatch");
  if (!(initial_temperature > 0.0)) throw ValidationError("initial_temperature must be > 0");
  if (!(cooling > 0.0 && cooling < 1.0)) throw ValidationError("cooling must lie in (0, 1)");
  if (moves_per_block == 0) throw ValidationError("moves_per_block must be >= 1");
  current_value_ = objective_(current_);
  best_ = current_;
  best_value_ = current_value_;
}

bool Annealer::run_block() {
  bool improved = false;
  std::uniform_int_distribution<Eigen::Index> pick(0, current_.size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t k = 0; k < moves_; ++k) {
    const Eigen::Index i = pick(rng_);
    RealVector neighbor = current_;
    neighbor(i) += scales_(i) * gauss(rng_);
    const double value = objective_(neighbor);
    const double delta_phi = current_value_ - value;
    if (delta_phi <= sa_threshold(temperature_, delta_phi)) {
      current_ = std::move(neighbor);
      current_value_ = value;
      if (value > best_value_) {
        best_value_ = value;
        best_ = current_;
        improved = true;
      }
    }
  }
  temperature_ *= cooling_;
  return improved;
}

void Annealer::reset_current(RealVector x) {
  if (x.size() != current_.size()) throw DimensionError("annealing reset size mismatch");
  current_ = std::move(x);
  current_value_ = objective_(current_);
  if (current_value_ > best_value_) {
    best_value_ = current_value_;
    best_ = current_;
  }
}

RealVector annealing_scales(const ControlSystem& system, std::size_t segments, double neighborhood) {
  if (!(neighborhood > 0.0)) throw ValidationError("neighborhood must be > 0");
  const std::size_t m = system.channel_count();
  RealVector scales(static_cast<Eigen::Index>(m * segments));
  for (std::size_t n = 0; n < segments; ++n) {
    for (std::size_t c = 0; c < m; ++c) {
      scales(static_cast<Eigen::Index>(n * m + c)) = neighborhood * system.channels()[c].max_amplitude;
    }
  }
  return scales;
}

OptimizationResult sa_run(const ControlProblem& problem, const AnnealingConfig& config,
                          const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  Rng rng(settings.seed);
  const ControlSequence initial = random_initial_sequence(problem.system, config.shape, rng);
  const auto rows = static_cast<Eigen::Index>(initial.channel_count());
  const auto cols = static_cast<Eigen::Index>(initial.segment_count());
  auto to_sequence = [&](const RealVector& x) {
    return ControlSequence(initial.durations(), Eigen::Map<const RealMatrix>(x.data(), rows, cols));
  };
  auto objective = [&](const RealVector& x) { return penalized_performance(problem, to_sequence(x)); };

  Annealer annealer(objective,
                    Eigen::Map<const RealVector>(initial.amplitudes().data(), rows * cols),
                    annealing_scales(problem.system, initial.segment_count(), config.neighborhood),
                    config.initial_temperature, config.cooling, config.moves_per_block, rng);

  OptimizationResult result;
  auto record = [&] {
    const double f = ensemble_performance(problem, to_sequence(annealer.best())).mean;
    result.fidelity_trace.push_back(f);
    result.objective_trace.push_back(annealer.best_value());
    return f;
  };
  double fidelity = record();
  result.termination = Termination::max_iterations;
  std::size_t quiet = 0;
  if (fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
  } else {
    for (std::size_t it = 0; it < settings.max_iterations; ++it) {
      const bool improved = annealer.run_block();
      fidelity = record();
      if (fidelity >= settings.fidelity_goal) {
        result.termination = Termination::goal_reached;
        break;
      }
      quiet = improved ? 0 : quiet + 1;
      if (quiet >= config.stall_blocks) {
        result.termination = Termination::stalled;
        break;
      }
    }
  }
  finalize_result(problem, to_sequence(annealer.best()), result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
