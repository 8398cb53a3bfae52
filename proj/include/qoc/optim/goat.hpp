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
#include <vector>

#include "qoc/optim/common.hpp"

namespace qoc {

struct GaussianPulse {
  double center = 0.0;  // delta, seconds
  double width = 1.0;   // sigma, seconds
};

/// sum_k exp(-(t - delta_k)^2 / sigma_k^2). Throws ValidationError for a
/// non-positive width.
double goat_waveform(const std::vector<GaussianPulse>& pulses, double t);

// Analytic controls: channel m carries scale_m * goat_waveform(pulses[m]).
// Flattened parameter order is (channel, pulse, {center, width}).
struct GoatControls {
  std::vector<std::vector<GaussianPulse>> pulses;
  std::vector<double> scale;

  std::size_t parameter_count() const;
  RealVector parameters() const;
  void set_parameters(const RealVector& alpha);
};

struct GoatPropagation {
  ComplexMatrix propagator;
  std::vector<ComplexMatrix> sensitivities;  // dU/dalpha, flattened order
};

struct GoatIntegration {
  double rtol = 1e-9;
  double atol = 1e-12;
};

/// Integrates U and every dU/dalpha jointly from (I, 0) over [0, T]:
/// dU/dt = -i H U, d(dU)/dt = -i (dH U + H dU).
GoatPropagation goat_propagate_with_sensitivities(const ControlSystem& system,
                                                  const GoatControls& controls, double total_time,
                                                  const GoatIntegration& integration = {});

/// Midpoint samples of the analytic controls on equal slices.
ControlSequence goat_discretize(const ControlSystem& system, const GoatControls& controls,
                                double total_time, std::size_t segments);

struct GoatConfig {
  std::size_t pulses_per_channel = 2;  // K
  double total_time = 1.0;
  // Per-channel waveform scale as a fraction of max_amplitude.
  double amplitude_fraction = 0.25;
  std::size_t discretize_segments = 500;
  double rtol = 1e-9;
  double atol = 1e-12;
  bool operator==(const GoatConfig&) const = default;
};

/// Gradient descent with Armijo backtracking on |f|, f = 1 - <U_F|U>/<U_F|U_F>.
/// When every control operator is traceless the target's global phase is
/// first aligned with det U(T). The trace holds the integrated gate
/// fidelity; the returned sequence is the discretized waveform.
OptimizationResult goat_run(const ControlProblem& problem, const GoatConfig& config,
                            const RunSettings& settings);

}  // namespace qoc
