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

#include "qoc/optim/common.hpp"

namespace qoc {

/// 1 - <psi_f|rho|psi_f>.
double lyapunov_v(const QuantumState& rho, const ComplexVector& psi_f);

/// v_m = -i Tr(rho [P, A_m]) with P = I - |psi_f><psi_f|.
RealVector lyapunov_gradient(const ControlSystem& system, const ComplexMatrix& rho,
                             const ComplexVector& psi_f);

/// Bang-bang law omega_m = -max_amplitude_m * sign(v_m); zero when
/// |v_m| <= dead_band * max_amplitude_m. Throws ApplicabilityError unless
/// psi_f is an eigenstate of H^S ([P, H^S] = 0 to 1e-8).
RealVector lyapunov_control_law(const ControlSystem& system, const ComplexMatrix& rho,
                                const ComplexVector& psi_f, double dead_band = 1e-8);

struct LyapunovConfig {
  double dt = 1e-3;
  double max_time = 20.0;
  double dead_band = 1e-8;
  double kick = 0.01;        // fraction of max_amplitude; 0 disables kicks
  std::size_t max_kicks = 10;
  bool operator==(const LyapunovConfig&) const = default;
};

/// Applies the law over successive dt slices and emits the realized
/// sequence. When the law vanishes away from the target a seeded random
/// kick is applied for one slice; running out of kicks stalls the run.
/// The target state must be pure. One iteration is one slice.
OptimizationResult lyapunov_run(const ControlProblem& problem, const LyapunovConfig& config,
                                const RunSettings& settings);

}  // namespace qoc
