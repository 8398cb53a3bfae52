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
#include <string>
#include <vector>

#include "qoc/optim/common.hpp"

namespace qoc {

enum class SweepProfile { linear, tanh };

struct AdiabaticConfig {
  std::vector<double> detunings_hz{0.0};
  double amplitude = 6.283185307179586;  // drive omega, rad/s
  double nu_start_hz = -20.0;
  double nu_end_hz = 20.0;
  double total_time = 50.0;
  std::size_t segments = 2000;
  SweepProfile profile = SweepProfile::linear;
  double steepness = 2.0;  // tanh profile only
  bool operator==(const AdiabaticConfig&) const = default;
};

/// Rotating-frame register with H^S = sum_i 2 pi delta_i Z_i / 2 and two
/// channels shared by all spins: "freq" (operator -sum Z_i/2, amplitude
/// 2 pi nu_RF) and "drive" (operator sum X_i/2, amplitude omega).
ControlSystem adiabatic_system(const AdiabaticConfig& config);

/// nu_RF(t) in Hz. The tanh profile is normalized so both endpoints are
/// exact.
double sweep_frequency(const AdiabaticConfig& config, double t);

/// Frequency-modulated sequence sampled at segment midpoints. Throws
/// ValidationError unless the sweep range strictly contains every detuning.
ControlSequence adiabatic_sweep(const AdiabaticConfig& config);

/// Human-readable notes for spins that start closer to resonance than ten
/// times the drive amplitude.
std::vector<std::string> adiabatic_warnings(const AdiabaticConfig& config);

/// Builds the sweep and evaluates it once. The trace has one entry.
OptimizationResult adiabatic_run(const ControlProblem& problem, const AdiabaticConfig& config,
                                 const RunSettings& settings);

}  // namespace qoc
