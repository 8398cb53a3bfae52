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

#include "qoc/optim/sagrape.hpp"

#include <chrono>
#include <optional>

#include "qoc/error.hpp"

namespace qoc {

OptimizationResult sagrape_run(const ControlProblem& problem, const SagrapeConfig& config,
                               const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  if (!(config.sa.shape == config.grape.shape)) {
    throw ValidationError("sagrape: sa.shape and grape.shape must agree");
  }
  const bool use_sa = config.sa_blocks_per_cycle > 0;
  const bool use_grape = config.grape_iterations_per_cycle > 0;
  if (!use_sa && !use_grape) throw ValidationError("sagrape: schedule has no work");

  Rng rng(settings.seed);
  const ControlSequence initial = random_initial_sequence(problem.system, config.grape.shape, rng);
  const auto rows = static_cast<Eigen::Index>(initial.channel_count());
  const auto cols = static_cast<Eigen::Index>(initial.segment_count());
  auto to_sequence = [&](const RealVector& x) {
    return ControlSequence(initial.durations(), Eigen::Map<const RealMatrix>(x.data(), rows, cols));
  };
  auto to_vector = [&](const ControlSequence& s) -> RealVector {
    return Eigen::Map<const RealVector>(s.amplitudes().data(), rows * cols);
  };
  auto objective = [&](const RealVector& x) { return penalized_performance(problem, to_sequence(x)); };

  std::optional<Annealer> annealer;
  std::optional<GrapeStepper> stepper;
  if (use_sa) {
    annealer.emplace(objective, to_vector(initial),
                     annealing_scales(problem.system, initial.segment_count(), config.sa.neighborhood),
                     config.sa.initial_temperature, config.sa.cooling, config.sa.moves_per_block, rng);
  }
  if (use_grape) stepper.emplace(problem, config.grape, initial);

  OptimizationResult result;
  auto push = [&](double f, double phi) {
    result.fidelity_trace.push_back(f);
    result.objective_trace.push_back(phi);
  };

  // Overall best by objective; a goal hit returns the sequence that hit it.
  ControlSequence best = initial;
  double best_phi = use_sa ? annealer->best_value() : stepper->objective();
  ControlSequence goal_sequence;
  auto offer = [&](const ControlSequence& s, double phi) {
    if (phi > best_phi) {
      best_phi = phi;
      best = s;
    }
  };

  double fidelity;
  if (use_sa) {
    fidelity = ensemble_performance(problem, to_sequence(annealer->best())).mean;
    push(fidelity, annealer->best_value());
  } else {
    fidelity = stepper->fidelity();
    push(fidelity, stepper->objective());
  }

  result.termination = Termination::max_iterations;
  bool done = false;
  if (fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
    goal_sequence = initial;
    done = true;
  }
  std::size_t used = 0;
  std::size_t quiet = 0;
  while (!done && used < settings.max_iterations) {
    if (use_sa) {
      if (use_grape && used > 0) annealer->reset_current(to_vector(stepper->best()));
      for (std::size_t b = 0; b < config.sa_blocks_per_cycle && used < settings.max_iterations; ++b) {
        const bool improved = annealer->run_block();
        ++used;
        const ControlSequence sa_best = to_sequence(annealer->best());
        fidelity = ensemble_performance(problem, sa_best).mean;
        push(fidelity, annealer->best_value());
        offer(sa_best, annealer->best_value());
        if (fidelity >= settings.fidelity_goal) {
          result.termination = Termination::goal_reached;
          goal_sequence = sa_best;
          done = true;
          break;
        }
        quiet = improved ? 0 : quiet + 1;
        if (!use_grape && quiet >= config.sa.stall_blocks) {
          result.termination = Termination::stalled;
          done = true;
          break;
        }
      }
    }
    if (done || used >= settings.max_iterations) break;
    if (use_grape) {
      if (use_sa) stepper->reset(to_sequence(annealer->best()));
      for (std::size_t g = 0; g < config.grape_iterations_per_cycle && used < settings.max_iterations; ++g) {
        const bool ok = stepper->step();
        ++used;
        push(stepper->fidelity(), stepper->objective());
        offer(stepper->current(), stepper->objective());
        if (stepper->fidelity() >= settings.fidelity_goal) {
          result.termination = Termination::goal_reached;
          goal_sequence = stepper->current();
          done = true;
          break;
        }
        if (!ok) {
          if (!use_sa) {
            result.termination = Termination::stalled;
            done = true;
          }
          break;
        }
      }
    }
  }

  ControlSequence final_seq;
  if (result.termination == Termination::goal_reached) {
    final_seq = goal_sequence;
  } else if (!use_sa) {
    final_seq = stepper->best();
  } else if (!use_grape) {
    final_seq = to_sequence(annealer->best());
  } else {
    final_seq = best;
  }
  finalize_result(problem, final_seq, result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
