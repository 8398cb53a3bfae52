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

#include "qoc/optim/crab.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "qoc/error.hpp"

namespace qoc {

double crab_waveform(const CrabChannel& params, double total_time, double t) {
  if (params.beta.size() != params.alpha.size() || params.r.size() != params.alpha.size()) {
    throw DimensionError("crab: alpha, beta and r must have equal length");
  }
  if (!(total_time > 0.0)) throw ValidationError("crab: total_time must be > 0");
  double value = params.mean;
  for (std::size_t k = 0; k < params.alpha.size(); ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * t * (1.0 + params.r[k]) / total_time;
    value += params.alpha[k] * std::cos(phi) + params.beta[k] * std::sin(phi);
  }
  return value;
}

ControlSequence crab_discretize(const std::vector<CrabChannel>& channels, double total_time,
                                std::size_t segments) {
  ControlSequence seq = ControlSequence::uniform(segments, channels.size(), total_time);
  const double tau = total_time / static_cast<double>(segments);
  for (std::size_t n = 0; n < segments; ++n) {
    const double t = (static_cast<double>(n) + 0.5) * tau;
    for (std::size_t m = 0; m < channels.size(); ++m) {
      seq.set_amplitude(m, n, crab_waveform(channels[m], total_time, t));
    }
  }
  return seq;
}

OptimizationResult crab_run(const ControlProblem& problem, const CrabConfig& config,
                            const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  if (config.discretize_segments == 0) throw ValidationError("crab: discretize_segments must be >= 1");
  if (!(config.total_time > 0.0)) throw ValidationError("crab: total_time must be > 0");
  const std::size_t channels = problem.system.channel_count();
  const std::size_t k = config.harmonics;
  const std::size_t per_channel = 1 + 2 * k;

  Rng rng(settings.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::vector<CrabChannel> shape(channels);
  for (auto& ch : shape) {
    ch.alpha.assign(k, 0.0);
    ch.beta.assign(k, 0.0);
    ch.r.resize(k);
    for (double& r : ch.r) r = unit(rng);
  }
  auto unpack = [&](const RealVector& x) {
    std::vector<CrabChannel> out = shape;
    for (std::size_t m = 0; m < channels; ++m) {
      const auto base = static_cast<Eigen::Index>(m * per_channel);
      out[m].mean = x(base);
      for (std::size_t j = 0; j < k; ++j) {
        out[m].alpha[j] = x(base + 1 + static_cast<Eigen::Index>(j));
        out[m].beta[j] = x(base + 1 + static_cast<Eigen::Index>(k + j));
      }
    }
    return crab_discretize(out, config.total_time, config.discretize_segments);
  };

  RealVector x0 = RealVector::Zero(static_cast<Eigen::Index>(channels * per_channel));
  NelderMeadConfig nm;
  nm.max_evaluations = config.max_evaluations;
  nm.initial_step.resize(x0.size());
  for (std::size_t m = 0; m < channels; ++m) {
    const double step = config.initial_step * problem.system.channels()[m].max_amplitude;
    nm.initial_step.segment(static_cast<Eigen::Index>(m * per_channel),
                            static_cast<Eigen::Index>(per_channel))
        .setConstant(step);
  }

  // The simplex never loses its best vertex, so the best evaluation so far is
  // the simplex best.
  double best_phi = -std::numeric_limits<double>::infinity();
  double best_fidelity = 0.0;
  auto objective = [&](const RealVector& x) {
    const ControlSequence seq = unpack(x);
    const double f = ensemble_performance(problem, seq).mean;
    const double phi = f - penalty_value(problem.system, seq, problem.penalty);
    if (phi > best_phi) {
      best_phi = phi;
      best_fidelity = f;
    }
    return -phi;
  };

  OptimizationResult result;
  result.termination = Termination::max_iterations;
  auto on_iteration = [&](std::size_t, double) {
    result.fidelity_trace.push_back(best_fidelity);
    result.objective_trace.push_back(best_phi);
    if (best_fidelity >= settings.fidelity_goal) {
      result.termination = Termination::goal_reached;
      return false;
    }
    return result.fidelity_trace.size() <= settings.max_iterations;
  };
  {
    const ControlSequence seq = unpack(x0);
    const double f = ensemble_performance(problem, seq).mean;
    result.fidelity_trace.push_back(f);
    result.objective_trace.push_back(f - penalty_value(problem.system, seq, problem.penalty));
  }
  RealVector best_x = x0;
  if (result.fidelity_trace.front() >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
  } else if (settings.max_iterations > 0) {
    const NelderMeadResult nmr = nelder_mead_minimize(objective, x0, nm, on_iteration);
    best_x = nmr.x;
    if (!nmr.stopped_by_callback) result.termination = Termination::stalled;
  }
  finalize_result(problem, unpack(best_x), result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
