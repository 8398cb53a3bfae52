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
#include <deque>

#include "qoc/optim/common.hpp"

namespace qoc {

enum class GrapeMode { first_order, quasi_newton };

struct GrapeConfig {
  SequenceShape shape;
  // omega += step * tau * g in first-order mode.
  double step = 100.0;
  GrapeMode mode = GrapeMode::first_order;
  std::size_t lbfgs_memory = 10;
  // Iterations without an objective gain above stall_tolerance before the
  // run is declared stalled.
  std::size_t stall_window = 200;
  double stall_tolerance = 1e-12;
  bool operator==(const GrapeConfig&) const = default;
};

/// First-order GRAPE gradient g[m][n] (channels x segments).
///
/// Gate targets: Im{<U_F|U_{n+1:N} A_m U_{1:n}> <U_{1:N}|U_F>} / |<U_F|U_F>|^2.
/// Trace-fidelity state targets: -i <rho~_n | [A_m, rho_n]>, with rho_n
/// forward- and rho~_n backward-propagated.
///
/// Ensemble bins contribute p_l * s_l * g^(l) (s_l is the bin's amplitude
/// scale, so g is taken with respect to the nominal amplitude). The amplitude
/// penalty is folded in so that c * tau_n * g_mn estimates dPhi/domega_mn,
/// with c = 2 for gates and c = 1 for states.
///
/// Throws CapabilityError for other fidelity kinds or interleaved channels.
RealMatrix grape_gradient(const ControlProblem& problem, const ControlSequence& seq);

/// c * tau_n * grape_gradient: the first-order estimate of dPhi/domega.
RealMatrix objective_gradient(const ControlProblem& problem, const ControlSequence& seq);

// One GRAPE iteration at a time; shared by grape_run and the hybrid
// annealing schedule.
class GrapeStepper {
 public:
  GrapeStepper(const ControlProblem& problem, const GrapeConfig& config, ControlSequence start);

  /// One update. Returns false once the stall rule fires or the line search
  /// can make no progress.
  bool step();

  /// Restart from `start`, clearing quasi-Newton memory and stall counters.
  void reset(ControlSequence start);

  const ControlSequence& current() const { return current_; }
  double fidelity() const { return fidelity_; }
  double objective() const { return objective_; }
  const ControlSequence& best() const { return best_; }
  double best_objective() const { return best_objective_; }

 private:
  void evaluate_current();
  bool first_order_step();
  bool quasi_newton_step();
  void note_progress();

  const ControlProblem& problem_;
  GrapeConfig config_;
  ControlSequence current_;
  double fidelity_ = 0.0;
  double objective_ = 0.0;
  ControlSequence best_;
  double best_objective_ = 0.0;
  std::size_t since_improvement_ = 0;
  double reference_ = 0.0;

  RealVector gradient_;  // dPhi/domega, flattened column-major
  bool have_gradient_ = false;
  std::deque<RealVector> s_history_;
  std::deque<RealVector> y_history_;
};

/// Random start (seeded) followed by GRAPE iterations.
OptimizationResult grape_run(const ControlProblem& problem, const GrapeConfig& config,
                             const RunSettings& settings);

OptimizationResult grape_run(const ControlProblem& problem, const GrapeConfig& config,
                             const RunSettings& settings, const ControlSequence& initial);

}  // namespace qoc
