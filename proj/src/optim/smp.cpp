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

#include "qoc/optim/smp.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "qoc/error.hpp"
#include "qoc/optim/nelder_mead.hpp"

namespace qoc {

OptimizationResult smp_run(const ControlProblem& problem, const SmpConfig& config,
                           const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  if (config.max_segments == 0) throw ValidationError("smp: max_segments must be >= 1");
  if (!(config.initial_duration > 0.0)) throw ValidationError("smp: initial_duration must be > 0");
  if (!(config.min_duration > 0.0)) throw ValidationError("smp: min_duration must be > 0");
  const auto& sys = problem.system;
  const std::size_t channels = sys.channel_count();
  const std::size_t stride = channels + 1;

  Rng rng(settings.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);

  auto to_sequence = [&](const RealVector& x) {
    const std::size_t n = static_cast<std::size_t>(x.size()) / stride;
    std::vector<double> durations(n);
    RealMatrix amps(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const auto base = static_cast<Eigen::Index>(k * stride);
      durations[k] = std::max(std::abs(x(base)), config.min_duration);
      for (std::size_t m = 0; m < channels; ++m) {
        amps(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = x(base + 1 + static_cast<Eigen::Index>(m));
      }
    }
    return ControlSequence(std::move(durations), std::move(amps));
  };

  RealVector x(static_cast<Eigen::Index>(stride));
  x(0) = config.initial_duration;
  for (std::size_t m = 0; m < channels; ++m) {
    x(static_cast<Eigen::Index>(1 + m)) = sys.channels()[m].max_amplitude * unit(rng);
  }

  double best_phi = -std::numeric_limits<double>::infinity();
  double best_fidelity = 0.0;
  RealVector best_x = x;
  auto objective = [&](const RealVector& v) {
    const ControlSequence seq = to_sequence(v);
    const double f = ensemble_performance(problem, seq).mean;
    const double phi = f - penalty_value(sys, seq, problem.penalty);
    if (phi > best_phi) {
      best_phi = phi;
      best_fidelity = f;
      best_x = v;
    }
    return -phi;
  };

  OptimizationResult result;
  objective(x);
  result.fidelity_trace.push_back(best_fidelity);
  result.objective_trace.push_back(best_phi);
  result.termination = Termination::stalled;

  bool stop = false;
  if (best_fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
    stop = true;
  } else if (settings.max_iterations == 0) {
    result.termination = Termination::max_iterations;
    stop = true;
  }
  auto on_iteration = [&](std::size_t, double) {
    result.fidelity_trace.push_back(best_fidelity);
    result.objective_trace.push_back(best_phi);
    if (best_fidelity >= settings.fidelity_goal) {
      result.termination = Termination::goal_reached;
      stop = true;
    } else if (result.fidelity_trace.size() > settings.max_iterations) {
      result.termination = Termination::max_iterations;
      stop = true;
    }
    return !stop;
  };

  std::size_t segments = 1;
  while (!stop) {
    NelderMeadConfig nm;
    nm.max_evaluations = config.stage_evaluations;
    RealVector base_step(x.size());
    for (std::size_t k = 0; k < segments; ++k) {
      const auto b = static_cast<Eigen::Index>(k * stride);
      base_step(b) = 0.1 * std::max(std::abs(x(b)), config.min_duration);
      for (std::size_t m = 0; m < channels; ++m) {
        base_step(b + 1 + static_cast<Eigen::Index>(m)) = 0.1 * sys.channels()[m].max_amplitude;
      }
    }
    for (std::size_t attempt = 0; attempt <= config.restarts && !stop; ++attempt) {
      nm.initial_step = base_step;
      if (attempt > 0) {
        for (Eigen::Index i = 0; i < base_step.size(); ++i) nm.initial_step(i) *= jitter(rng);
      }
      nelder_mead_minimize(objective, best_x, nm, on_iteration);
    }
    if (stop || 2 * segments > config.max_segments) break;
    // Halve every segment; the propagator is unchanged by construction.
    RealVector split(best_x.size() * 2);
    for (std::size_t k = 0; k < segments; ++k) {
      const auto src = static_cast<Eigen::Index>(k * stride);
      for (int half = 0; half < 2; ++half) {
        const auto dst = static_cast<Eigen::Index>((2 * k + static_cast<std::size_t>(half)) * stride);
        split.segment(dst, static_cast<Eigen::Index>(stride)) = best_x.segment(src, static_cast<Eigen::Index>(stride));
        split(dst) = std::max(std::abs(best_x(src)), config.min_duration) / 2.0;
      }
    }
    segments *= 2;
    x = split;
    best_x = split;
  }
  finalize_result(problem, to_sequence(best_x), result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
