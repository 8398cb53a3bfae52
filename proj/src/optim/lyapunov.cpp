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

#include "qoc/optim/lyapunov.hpp"

#include <chrono>
#include <cmath>

#include "qoc/error.hpp"

namespace qoc {
namespace {

ComplexMatrix projector_complement(const ComplexVector& psi_f) {
  const auto d = psi_f.size();
  return ComplexMatrix::Identity(d, d) - psi_f * psi_f.adjoint();
}

ComplexVector dominant_vector(const ComplexMatrix& rho_f) {
  const Spectrum s = eig_hermitian(rho_f);
  const auto d = s.eigenvalues.size();
  if (std::abs(s.eigenvalues(d - 1) - 1.0) > 1e-8) {
    throw ValidationError("Lyapunov control needs a pure target state");
  }
  return s.eigenvectors.col(d - 1);
}

double state_fidelity(const StateTarget& st, const ComplexMatrix& rho) {
  switch (st.kind) {
    case StateFidelity::uhlmann:
      return uhlmann_fidelity(QuantumState::density(st.target), QuantumState::density(rho));
    case StateFidelity::trace:
      return trace_fidelity(st.target, rho);
    case StateFidelity::correlation:
      return correlation(st.target, traceless_part(rho));
    case StateFidelity::attenuated:
      return attenuated_correlation(st.initial, st.target, traceless_part(rho));
  }
  return 0.0;
}

}  // namespace

double lyapunov_v(const QuantumState& rho, const ComplexVector& psi_f) {
  if (psi_f.size() != rho.dim()) throw DimensionError("lyapunov_v: dimension mismatch");
  return 1.0 - (psi_f.adjoint() * rho.density_matrix() * psi_f)(0, 0).real();
}

RealVector lyapunov_gradient(const ControlSystem& system, const ComplexMatrix& rho,
                             const ComplexVector& psi_f) {
  if (rho.rows() != system.dim() || psi_f.size() != system.dim()) {
    throw DimensionError("lyapunov: dimension mismatch");
  }
  const ComplexMatrix p = projector_complement(psi_f);
  RealVector v(static_cast<Eigen::Index>(system.channel_count()));
  for (std::size_t m = 0; m < system.channel_count(); ++m) {
    const Complex tr = (rho * commutator(p, system.channels()[m].op)).trace();
    v(static_cast<Eigen::Index>(m)) = (Complex(0.0, -1.0) * tr).real();
  }
  return v;
}

RealVector lyapunov_control_law(const ControlSystem& system, const ComplexMatrix& rho,
                                const ComplexVector& psi_f, double dead_band) {
  const ComplexMatrix p = projector_complement(psi_f);
  const double scale = std::max(1.0, system.h_system().norm());
  if (commutator(p, system.h_system()).norm() > 1e-8 * scale) {
    throw ApplicabilityError("Lyapunov law needs the target to be an eigenstate of H^S");
  }
  const RealVector v = lyapunov_gradient(system, rho, psi_f);
  RealVector omega(v.size());
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    const double limit = system.channels()[static_cast<std::size_t>(m)].max_amplitude;
    if (std::abs(v(m)) <= dead_band * limit) {
      omega(m) = 0.0;
    } else {
      omega(m) = v(m) > 0.0 ? -limit : limit;
    }
  }
  return omega;
}

OptimizationResult lyapunov_run(const ControlProblem& problem, const LyapunovConfig& config,
                                const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  if (problem.is_gate()) throw CapabilityError("Lyapunov control supports state targets only");
  if (!problem.channels.empty()) throw CapabilityError("Lyapunov control does not support interleaved channels");
  if (!(config.dt > 0.0)) throw ValidationError("lyapunov dt must be > 0");
  if (!(config.max_time > 0.0)) throw ValidationError("lyapunov max_time must be > 0");
  if (config.kick < 0.0) throw ValidationError("lyapunov kick must be >= 0");

  const auto& sys = problem.system;
  const auto& st = problem.state();
  if (st.kind == StateFidelity::correlation || st.kind == StateFidelity::attenuated) {
    throw CapabilityError("Lyapunov control needs density-matrix targets");
  }
  const ComplexVector psi_f = dominant_vector(st.target);
  const std::size_t channels = sys.channel_count();
  const auto max_steps = static_cast<std::size_t>(std::llround(config.max_time / config.dt));

  Rng rng(settings.seed);
  std::bernoulli_distribution coin(0.5);

  ComplexMatrix rho = st.initial;
  std::vector<double> durations;
  std::vector<RealVector> columns;
  OptimizationResult result;
  double penalty = 0.0;  // accumulated over emitted slices
  auto record = [&](double f) {
    result.fidelity_trace.push_back(f);
    result.objective_trace.push_back(f - penalty);
  };
  double fidelity = state_fidelity(st, rho);
  record(fidelity);

  result.termination = Termination::max_iterations;
  std::size_t kicks = 0;
  if (fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
  } else {
    const std::size_t budget = std::min(settings.max_iterations, max_steps);
    for (std::size_t step = 0; step < budget; ++step) {
      RealVector omega = lyapunov_control_law(sys, rho, psi_f, config.dead_band);
      if (omega.isZero(0.0)) {
        if (config.kick == 0.0 || kicks >= config.max_kicks) {
          result.termination = Termination::stalled;
          break;
        }
        ++kicks;
        for (std::size_t m = 0; m < channels; ++m) {
          const double a = config.kick * sys.channels()[m].max_amplitude;
          omega(static_cast<Eigen::Index>(m)) = coin(rng) ? a : -a;
        }
      }
      const ComplexMatrix u = matrix_exp_i(sys.h_system() + sys.control_hamiltonian(omega), config.dt);
      rho = u * rho * u.adjoint();
      durations.push_back(config.dt);
      columns.push_back(omega);
      penalty += penalty_value(sys, ControlSequence({config.dt}, omega), problem.penalty);
      fidelity = state_fidelity(st, rho);
      record(fidelity);
      if (fidelity >= settings.fidelity_goal) {
        result.termination = Termination::goal_reached;
        break;
      }
    }
  }

  RealMatrix amps(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t n = 0; n < columns.size(); ++n) amps.col(static_cast<Eigen::Index>(n)) = columns[n];
  finalize_result(problem, ControlSequence(std::move(durations), std::move(amps)), result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
