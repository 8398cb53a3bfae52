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

#include "qoc/optim/adiabatic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qoc/error.hpp"
#include "qoc/systems.hpp"

namespace qoc {
namespace {

void validate(const AdiabaticConfig& config) {
  if (config.detunings_hz.empty()) throw ValidationError("adiabatic: at least one detuning is required");
  if (!(config.total_time > 0.0)) throw ValidationError("adiabatic: total_time must be > 0");
  if (config.segments == 0) throw ValidationError("adiabatic: segments must be >= 1");
  if (!(config.amplitude > 0.0)) throw ValidationError("adiabatic: amplitude must be > 0");
  if (config.profile == SweepProfile::tanh && !(config.steepness > 0.0)) {
    throw ValidationError("adiabatic: steepness must be > 0");
  }
  const double lo = std::min(config.nu_start_hz, config.nu_end_hz);
  const double hi = std::max(config.nu_start_hz, config.nu_end_hz);
  for (double delta : config.detunings_hz) {
    if (!(delta > lo && delta < hi)) {
      std::ostringstream os;
      os << "adiabatic: sweep range [" << lo << ", " << hi << "] Hz does not straddle detuning "
         << delta << " Hz";
      throw ValidationError(os.str());
    }
  }
}

}  // namespace

ControlSystem adiabatic_system(const AdiabaticConfig& config) {
  const std::size_t n = config.detunings_hz.size();
  if (n == 0) throw ValidationError("adiabatic: at least one detuning is required");
  const auto d = static_cast<Eigen::Index>(1) << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  ComplexMatrix z_sum = ComplexMatrix::Zero(d, d);
  ComplexMatrix x_sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix z = embed_single_qubit(pauli::z(), i, n) / 2.0;
    h += 2.0 * std::numbers::pi * config.detunings_hz[i] * z;
    z_sum += z;
    x_sum += embed_single_qubit(pauli::x(), i, n) / 2.0;
  }
  const double nu_max = std::max({std::abs(config.nu_start_hz), std::abs(config.nu_end_hz), 1e-12});
  // Limits leave headroom so the amplitude penalty stays silent on the sweep.
  std::vector<ControlChannel> channels{
      {-z_sum, 4.0 * std::numbers::pi * nu_max, "freq"},
      {x_sum, 2.0 * std::max(config.amplitude, 1e-12), "drive"}};
  return ControlSystem(std::move(h), std::move(channels));
}

double sweep_frequency(const AdiabaticConfig& config, double t) {
  const double s = t / config.total_time;
  if (config.profile == SweepProfile::linear) {
    return config.nu_start_hz + (config.nu_end_hz - config.nu_start_hz) * s;
  }
  const double mid = 0.5 * (config.nu_start_hz + config.nu_end_hz);
  const double half = 0.5 * (config.nu_end_hz - config.nu_start_hz);
  return mid + half * std::tanh(config.steepness * (2.0 * s - 1.0)) / std::tanh(config.steepness);
}

ControlSequence adiabatic_sweep(const AdiabaticConfig& config) {
  validate(config);
  ControlSequence seq = ControlSequence::uniform(config.segments, 2, config.total_time);
  const double tau = config.total_time / static_cast<double>(config.segments);
  for (std::size_t n = 0; n < config.segments; ++n) {
    const double t = (static_cast<double>(n) + 0.5) * tau;
    seq.set_amplitude(0, n, 2.0 * std::numbers::pi * sweep_frequency(config, t));
    seq.set_amplitude(1, n, config.amplitude);
  }
  return seq;
}

std::vector<std::string> adiabatic_warnings(const AdiabaticConfig& config) {
  std::vector<std::string> out;
  for (double delta : config.detunings_hz) {
    const double offset = std::abs(2.0 * std::numbers::pi * (delta - config.nu_start_hz));
    if (offset < 10.0 * config.amplitude) {
      std::ostringstream os;
      os << "spin at " << delta << " Hz starts only " << offset / config.amplitude
         << " drive amplitudes off resonance (10 recommended)";
      out.push_back(os.str());
    }
  }
  return out;
}

OptimizationResult adiabatic_run(const ControlProblem& problem, const AdiabaticConfig& config,
                                 const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  const ControlSequence seq = adiabatic_sweep(config);
  check_compatible(problem.system, seq);
  OptimizationResult result;
  const EnsemblePerformance perf = ensemble_performance(problem, seq);
  result.fidelity_trace.push_back(perf.mean);
  result.objective_trace.push_back(perf.mean - penalty_value(problem.system, seq, problem.penalty));
  result.termination =
      perf.mean >= settings.fidelity_goal ? Termination::goal_reached : Termination::stalled;
  finalize_result(problem, seq, result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
