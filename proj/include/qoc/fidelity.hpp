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
#include <variant>
#include <vector>

#include "qoc/control.hpp"

namespace qoc {

// Amplitude-scaling distribution modelling control-field inhomogeneity.
// Each bin multiplies every channel's amplitude by `scale`.
class EnsembleDistribution {
 public:
  struct Bin {
    double scale = 1.0;
    double probability = 1.0;
    bool operator==(const Bin&) const = default;
  };

  /// Single nominal bin.
  EnsembleDistribution();
  explicit EnsembleDistribution(std::vector<Bin> bins);

  const std::vector<Bin>& bins() const { return bins_; }
  std::size_t size() const { return bins_.size(); }
  bool operator==(const EnsembleDistribution&) const = default;

 private:
  std::vector<Bin> bins_;
};

// Quadratic hinge on |omega| above soft_zone * max_amplitude.
struct PenaltyConfig {
  double soft_zone = 0.9;
  double weight = 1.0;
  bool operator==(const PenaltyConfig&) const = default;
};

enum class StateFidelity { uhlmann, trace, correlation, attenuated };

struct GateTarget {
  ComplexMatrix unitary;
};

// For the correlation kinds `initial` and `target` are traceless deviation
// operators rather than density matrices.
struct StateTarget {
  ComplexMatrix initial;
  ComplexMatrix target;
  StateFidelity kind = StateFidelity::uhlmann;
};

struct ControlProblem {
  ControlSystem system;
  std::variant<GateTarget, StateTarget> target;
  EnsembleDistribution ensemble;
  PenaltyConfig penalty;
  std::vector<QuantumChannel> channels;

  bool is_gate() const { return std::holds_alternative<GateTarget>(target); }
  const GateTarget& gate() const { return std::get<GateTarget>(target); }
  const StateTarget& state() const { return std::get<StateTarget>(target); }
};

/// Checks target/system consistency. Throws ValidationError or
/// DimensionError.
void validate_problem(const ControlProblem& problem);

ControlProblem make_gate_problem(ControlSystem system, ComplexMatrix target,
                                 EnsembleDistribution ensemble = {}, PenaltyConfig penalty = {});

ControlProblem make_state_problem(ControlSystem system, ComplexMatrix initial,
                                  ComplexMatrix target, StateFidelity kind,
                                  EnsembleDistribution ensemble = {}, PenaltyConfig penalty = {},
                                  std::vector<QuantumChannel> channels = {});

/// |Tr(U_F^dagger U)|^2 / |Tr(U_F^dagger U_F)|^2. Both inputs must be unitary
/// to 1e-6.
double gate_fidelity(const ComplexMatrix& u_target, const ComplexMatrix& u_actual);

/// (Tr sqrt(sqrt(rho_f) rho_n sqrt(rho_f)))^2
double uhlmann_fidelity(const QuantumState& rho_f, const QuantumState& rho_n);

/// Tr(rho_f^dagger rho_n); not clipped.
double trace_fidelity(const ComplexMatrix& rho_f, const ComplexMatrix& rho_n);

/// <f|n> / (sqrt Tr f^2 * sqrt Tr n^2) on traceless operators.
double correlation(const ComplexMatrix& rho_f, const ComplexMatrix& rho_n);

/// <f|n> / (sqrt Tr i^2 * sqrt Tr n^2) on traceless operators.
double attenuated_correlation(const ComplexMatrix& rho_i, const ComplexMatrix& rho_f,
                              const ComplexMatrix& rho_n);

/// rho - Tr(rho) I / d
ComplexMatrix traceless_part(const ComplexMatrix& rho);

/// The problem's fidelity for one amplitude-scaled copy of `seq`.
double bin_fidelity(const ControlProblem& problem, const ControlSequence& seq, double scale);

struct EnsemblePerformance {
  double mean = 0.0;
  std::vector<double> per_bin;
};

/// Per-bin fidelities and their probability-weighted mean. Bins may be
/// evaluated concurrently (capped by QOCTL_THREADS); the reduction always
/// runs in bin order.
EnsemblePerformance ensemble_performance(const ControlProblem& problem, const ControlSequence& seq,
                                         const EnsembleDistribution& dist);
EnsemblePerformance ensemble_performance(const ControlProblem& problem,
                                         const ControlSequence& seq);

double penalty_value(const ControlSystem& system, const ControlSequence& seq,
                     const PenaltyConfig& pen);

/// d(penalty)/d(omega_mn), channels x segments.
RealMatrix penalty_gradient(const ControlSystem& system, const ControlSequence& seq,
                            const PenaltyConfig& pen);

/// Mean ensemble fidelity minus the amplitude penalty.
double penalized_performance(const ControlProblem& problem, const ControlSequence& seq,
                             const EnsembleDistribution& dist, const PenaltyConfig& pen);
double penalized_performance(const ControlProblem& problem, const ControlSequence& seq);

/// Worker count for ensemble evaluation (QOCTL_THREADS, else hardware).
unsigned evaluation_threads();

}  // namespace qoc
