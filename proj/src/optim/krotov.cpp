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

#include "qoc/optim/krotov.hpp"

#include <chrono>
#include <sstream>

#include "qoc/error.hpp"

namespace qoc {
namespace {

constexpr double kMonotonicTolerance = 1e-6;

void require_krotov_capability(const ControlProblem& problem) {
  if (!problem.channels.empty()) {
    throw CapabilityError("Krotov does not support interleaved channels");
  }
  if (!problem.is_gate() && problem.state().kind != StateFidelity::trace) {
    throw CapabilityError("Krotov supports gate targets and trace-fidelity states only");
  }
}

ComplexMatrix terminal_operator(const ControlProblem& problem, const ComplexMatrix& total,
                                double kappa) {
  if (problem.is_gate()) {
    const auto& u = problem.gate().unitary;
    return u * hs_inner(u, total);
  }
  const auto& st = problem.state();
  return st.target * total * st.initial + kappa * total;
}

ComplexMatrix scaled_propagator(const ControlSystem& sys, const RealVector& amplitudes,
                                double tau, double scale) {
  return matrix_exp_i(sys.h_system() + sys.control_hamiltonian(scale * amplitudes), tau);
}

class Sweeper {
 public:
  Sweeper(const ControlProblem& problem, const KrotovConfig& config)
      : problem_(problem), config_(config), bins_(problem.ensemble.bins()) {
    const auto& sys = problem.system;
    lambda_.assign(sys.channel_count(), config.lambda);
    if (!config.channel_lambda.empty()) {
      if (config.channel_lambda.size() != sys.channel_count()) {
        throw DimensionError("krotov channel_lambda needs one entry per channel");
      }
      lambda_ = config.channel_lambda;
    }
    for (double l : lambda_) {
      if (!(l > 0.0)) throw ValidationError("krotov lambda must be > 0");
    }
    if (config.delta < 0.0 || config.delta > 2.0) throw ValidationError("krotov delta must lie in [0, 2]");
    if (config.eta < 0.0 || config.eta > 2.0) throw ValidationError("krotov eta must lie in [0, 2]");
    if (!problem.is_gate() && !(config.kappa > 0.0)) throw ValidationError("krotov kappa must be > 0");
    // Gate overlaps scale with d^2; normalize so lambda is dimension-free.
    norm_ = 1.0;
    if (problem.is_gate()) {
      const double d = std::abs(hs_inner(problem.gate().unitary, problem.gate().unitary));
      norm_ = 1.0 / (d * d);
    }
    multipliers_.resize(bins_.size());
    forward_.resize(bins_.size());
  }

  // Multipliers of the starting point, where sequence and co-sequence agree.
  void initialize(const ControlSequence& seq) {
    for (std::size_t l = 0; l < bins_.size(); ++l) {
      forward_[l].clear();
      ComplexMatrix x = identity();
      std::vector<ComplexMatrix> props;
      for (std::size_t n = 0; n < seq.segment_count(); ++n) {
        props.push_back(scaled_propagator(problem_.system, seq.segment_amplitudes(n),
                                          seq.duration(n), bins_[l].scale));
        x = props.back() * x;
      }
      const ComplexMatrix t = terminal_operator(problem_, x, config_.kappa);
      multipliers_[l].assign(seq.segment_count(), ComplexMatrix());
      ComplexMatrix back = identity();
      for (std::size_t n = seq.segment_count(); n-- > 0;) {
        multipliers_[l][n] = back.adjoint() * t;
        back = back * props[n];
      }
    }
  }

  ControlSequence forward_sweep(const ControlSequence& co) {
    ControlSequence omega = co;
    std::vector<ComplexMatrix> x(bins_.size(), identity());
    for (auto& f : forward_) f.assign(co.segment_count(), ComplexMatrix());
    std::vector<ComplexMatrix> probe(bins_.size());
    for (std::size_t n = 0; n < co.segment_count(); ++n) {
      // Segment n enters the product with its co-sequence value; earlier
      // segments already carry their updated values.
      const RealVector old_amps = co.segment_amplitudes(n);
      for (std::size_t l = 0; l < bins_.size(); ++l) {
        probe[l] = scaled_propagator(problem_.system, old_amps, co.duration(n), bins_[l].scale) * x[l];
      }
      for (std::size_t m = 0; m < co.channel_count(); ++m) {
        double drive = 0.0;
        for (std::size_t l = 0; l < bins_.size(); ++l) {
          drive += bins_[l].probability * bins_[l].scale *
                   hs_inner(multipliers_[l][n], channel_op(m) * probe[l]).imag();
        }
        omega.set_amplitude(m, n, (1.0 - config_.delta) * co.amplitude(m, n) +
                                      config_.delta / lambda_[m] * norm_ * drive);
      }
      const RealVector amps = omega.segment_amplitudes(n);
      for (std::size_t l = 0; l < bins_.size(); ++l) {
        x[l] = scaled_propagator(problem_.system, amps, omega.duration(n), bins_[l].scale) * x[l];
        forward_[l][n] = x[l];
      }
    }
    return omega;
  }

  ControlSequence backward_sweep(const ControlSequence& omega) {
    ControlSequence co = omega;
    const std::size_t n_seg = omega.segment_count();
    std::vector<ComplexMatrix> t(bins_.size());
    std::vector<ComplexMatrix> back(bins_.size(), identity());
    for (std::size_t l = 0; l < bins_.size(); ++l) {
      t[l] = terminal_operator(problem_, forward_[l][n_seg - 1], config_.kappa);
    }
    for (std::size_t n = n_seg; n-- > 0;) {
      for (std::size_t l = 0; l < bins_.size(); ++l) multipliers_[l][n] = back[l].adjoint() * t[l];
      for (std::size_t m = 0; m < omega.channel_count(); ++m) {
        double drive = 0.0;
        for (std::size_t l = 0; l < bins_.size(); ++l) {
          drive += bins_[l].probability * bins_[l].scale *
                   hs_inner(multipliers_[l][n], channel_op(m) * forward_[l][n]).imag();
        }
        co.set_amplitude(m, n, (1.0 - config_.eta) * omega.amplitude(m, n) +
                                   config_.eta / lambda_[m] * norm_ * drive);
      }
      const RealVector amps = co.segment_amplitudes(n);
      for (std::size_t l = 0; l < bins_.size(); ++l) {
        back[l] = back[l] * scaled_propagator(problem_.system, amps, co.duration(n), bins_[l].scale);
      }
    }
    return co;
  }

 private:
  ComplexMatrix identity() const {
    return ComplexMatrix::Identity(problem_.system.dim(), problem_.system.dim());
  }
  const ComplexMatrix& channel_op(std::size_t m) const { return problem_.system.channels()[m].op; }

  const ControlProblem& problem_;
  KrotovConfig config_;
  std::vector<EnsembleDistribution::Bin> bins_;
  std::vector<double> lambda_;
  double norm_ = 1.0;
  std::vector<std::vector<ComplexMatrix>> multipliers_;  // [bin][segment]
  std::vector<std::vector<ComplexMatrix>> forward_;      // U_{1:n} per bin
};

}  // namespace

ComplexMatrix krotov_multiplier(const ControlProblem& problem, const ControlSequence& seq,
                                std::size_t n, double kappa, double scale) {
  check_compatible(problem.system, seq);
  if (n >= seq.segment_count()) throw DimensionError("krotov_multiplier: segment index out of range");
  const ControlSequence scaled = seq.scaled(scale);
  const auto props = segment_propagators(problem.system, scaled);
  ComplexMatrix total = ComplexMatrix::Identity(problem.system.dim(), problem.system.dim());
  for (const auto& u : props) total = u * total;
  ComplexMatrix back = ComplexMatrix::Identity(problem.system.dim(), problem.system.dim());
  for (std::size_t k = n + 1; k < props.size(); ++k) back = props[k] * back;
  return back.adjoint() * terminal_operator(problem, total, kappa);
}

OptimizationResult krotov_run(const ControlProblem& problem, const KrotovConfig& config,
                              const RunSettings& settings) {
  Rng rng(settings.seed);
  return krotov_run(problem, config, settings,
                    random_initial_sequence(problem.system, config.shape, rng));
}

OptimizationResult krotov_run(const ControlProblem& problem, const KrotovConfig& config,
                              const RunSettings& settings, const ControlSequence& initial) {
  const auto started = std::chrono::steady_clock::now();
  require_krotov_capability(problem);
  check_compatible(problem.system, initial);

  Sweeper sweeper(problem, config);
  OptimizationResult result;
  ControlSequence omega = initial;
  double fidelity = ensemble_performance(problem, omega).mean;
  auto record = [&] {
    result.fidelity_trace.push_back(fidelity);
    result.objective_trace.push_back(fidelity - penalty_value(problem.system, omega, problem.penalty));
  };
  record();

  result.termination = Termination::max_iterations;
  if (fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
  } else {
    sweeper.initialize(omega);
    ControlSequence co = omega;
    double reference = fidelity;
    std::size_t since_gain = 0;
    for (std::size_t it = 0; it < settings.max_iterations; ++it) {
      omega = sweeper.forward_sweep(co);
      const double next = ensemble_performance(problem, omega).mean;
      if (next < fidelity - kMonotonicTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "Krotov fidelity dropped from " << fidelity << " to " << next << " at iteration "
           << it + 1 << "; increase lambda or reduce delta/eta";
        throw MonotonicityError(os.str());
      }
      fidelity = next;
      record();
      if (fidelity >= settings.fidelity_goal) {
        result.termination = Termination::goal_reached;
        break;
      }
      if (fidelity > reference + config.stall_tolerance) {
        reference = fidelity;
        since_gain = 0;
      } else if (++since_gain >= config.stall_window) {
        result.termination = Termination::stalled;
        break;
      }
      co = sweeper.backward_sweep(omega);
    }
  }
  finalize_result(problem, omega, result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
