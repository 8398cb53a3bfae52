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

struct KrotovConfig {
  SequenceShape shape;
  double delta = 1e-3;  // forward-sweep mixing, in [0, 2]
  double eta = 1e-3;    // backward-sweep mixing, in [0, 2]
  double lambda = 1e-4;
  std::vector<double> channel_lambda;  // per-channel override; empty uses lambda
  double kappa = 1.0;                  // state problems only
  std::size_t stall_window = 200;
  double stall_tolerance = 1e-12;
  bool operator==(const KrotovConfig&) const = default;
};

/// B_n for segment n (0-based) of the nominal sequence, optionally with all
/// amplitudes scaled. Gate: U_{n+1:N}^dagger U_F <U_F|U_{1:N}>. State:
/// U_{n+1:N}^dagger (rho_F U_{1:N} rho_I + kappa U_{1:N}).
ComplexMatrix krotov_multiplier(const ControlProblem& problem, const ControlSequence& seq,
                                std::size_t n, double kappa, double scale = 1.0);

/// Alternating forward (sequence) and backward (co-sequence) sweeps. Each
/// iteration is one forward plus one backward sweep and records the
/// fidelity of the forward sequence. A fidelity drop larger than 1e-6
/// throws MonotonicityError.
///
/// Supports gate targets and trace-fidelity state targets without
/// interleaved channels; anything else is a CapabilityError.
OptimizationResult krotov_run(const ControlProblem& problem, const KrotovConfig& config,
                              const RunSettings& settings);

OptimizationResult krotov_run(const ControlProblem& problem, const KrotovConfig& config,
                              const RunSettings& settings, const ControlSequence& initial);

}  // namespace qoc
