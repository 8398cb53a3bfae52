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

#include "qoc/optim/grape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qoc/error.hpp"

namespace qoc {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

void require_gradient_capability(const ControlProblem& problem) {
  if (!problem.channels.empty()) {
    throw CapabilityError("GRAPE gradient does not support interleaved channels");
  }
  if (!problem.is_gate() && problem.state().kind != StateFidelity::trace) {
    throw CapabilityError("GRAPE gradient supports gate targets and trace-fidelity states only");
  }
}

// Tr(q a) without forming the product.
Complex trace_of_product(const ComplexMatrix& q, const ComplexMatrix& a) {
  return q.cwiseProduct(a.transpose()).sum();
}

void accumulate_gate_bin(const ControlProblem& problem, const ControlSequence& scaled,
                         double weight, RealMatrix& g) {
  const auto& sys = problem.system;
  const auto& u_target = problem.gate().unitary;
  const std::size_t n_seg = scaled.segment_count();
  const auto props = segment_propagators(sys, scaled);

  std::vector<ComplexMatrix> forward(n_seg);  // U_{1:n}
  ComplexMatrix x = ComplexMatrix::Identity(sys.dim(), sys.dim());
  for (std::size_t n = 0; n < n_seg; ++n) {
    x = props[n] * x;
    forward[n] = x;
  }
  const Complex overlap = hs_inner(u_target, x);  // <U_F|U_{1:N}>
  const double norm = std::norm(hs_inner(u_target, u_target));
  const ComplexMatrix target_adj = u_target.adjoint();

  ComplexMatrix back = ComplexMatrix::Identity(sys.dim(), sys.dim());  // U_{n+1:N}
  for (std::size_t k = n_seg; k-- > 0;) {
    const ComplexMatrix q = forward[k] * target_adj * back;
    for (std::size_t m = 0; m < sys.channel_count(); ++m) {
      const Complex y = trace_of_product(q, sys.channels()[m].op);
      g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) +=
          weight * (y * std::conj(overlap)).imag() / norm;
    }
    back = back * props[k];
  }
}

void accumulate_state_bin(const ControlProblem& problem, const ControlSequence& scaled,
                          double weight, RealMatrix& g) {
  const auto& sys = problem.system;
  const auto& st = problem.state();
  const std::size_t n_seg = scaled.segment_count();
  const auto props = segment_propagators(sys, scaled);

  std::vector<ComplexMatrix> forward(n_seg);  // rho_n after segment n
  ComplexMatrix rho = st.initial;
  for (std::size_t n = 0; n < n_seg; ++n) {
    rho = props[n] * rho * props[n].adjoint();
    forward[n] = rho;
  }
  ComplexMatrix costate = st.target;  // rho~_n = U_{n+1:N}^dagger rho_F U_{n+1:N}
  for (std::size_t k = n_seg; k-- > 0;) {
    const ComplexMatrix c = forward[k] * costate.adjoint() - costate.adjoint() * forward[k];
    for (std::size_t m = 0; m < sys.channel_count(); ++m) {
      // -i Tr(rho~^dagger [A, rho]) = -i Tr([rho, rho~^dagger] A)
      const Complex y = trace_of_product(c, sys.channels()[m].op);
      g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) += weight * y.imag();
    }
    costate = props[k].adjoint() * costate * props[k];
  }
}

RealVector flatten(const RealMatrix& m) {
  return Eigen::Map<const RealVector>(m.data(), m.size());
}

RealMatrix unflatten(const RealVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const RealMatrix>(v.data(), rows, cols);
}

}  // namespace

RealMatrix grape_gradient(const ControlProblem& problem, const ControlSequence& seq) {
  require_gradient_capability(problem);
  check_compatible(problem.system, seq);
  RealMatrix g = RealMatrix::Zero(static_cast<Eigen::Index>(seq.channel_count()),
                                  static_cast<Eigen::Index>(seq.segment_count()));
  for (const auto& bin : problem.ensemble.bins()) {
    const ControlSequence scaled = seq.scaled(bin.scale);
    const double weight = bin.probability * bin.scale;
    if (problem.is_gate()) {
      accumulate_gate_bin(problem, scaled, weight, g);
    } else {
      accumulate_state_bin(problem, scaled, weight, g);
    }
  }
  const double c = problem.is_gate() ? 2.0 : 1.0;
  const RealMatrix pen = penalty_gradient(problem.system, seq, problem.penalty);
  for (Eigen::Index n = 0; n < g.cols(); ++n) {
    g.col(n) -= pen.col(n) / (c * seq.duration(static_cast<std::size_t>(n)));
  }
  return g;
}

RealMatrix objective_gradient(const ControlProblem& problem, const ControlSequence& seq) {
  RealMatrix g = grape_gradient(problem, seq);
  const double c = problem.is_gate() ? 2.0 : 1.0;
  for (Eigen::Index n = 0; n < g.cols(); ++n) {
    g.col(n) *= c * seq.duration(static_cast<std::size_t>(n));
  }
  return g;
}

// ---------------------------------------------------------------------------
// GrapeStepper

GrapeStepper::GrapeStepper(const ControlProblem& problem, const GrapeConfig& config,
                           ControlSequence start)
    : problem_(problem), config_(config) {
  require_gradient_capability(problem);
  if (!(config.step > 0.0)) throw ValidationError("grape step must be > 0");
  reference_ = problem.system.channels().front().max_amplitude;
  for (const auto& ch : problem.system.channels()) reference_ = std::min(reference_, ch.max_amplitude);
  reset(std::move(start));
}

void GrapeStepper::reset(ControlSequence start) {
  check_compatible(problem_.system, start);
  current_ = std::move(start);
  evaluate_current();
  best_ = current_;
  best_objective_ = objective_;
  since_improvement_ = 0;
  have_gradient_ = false;
  s_history_.clear();
  y_history_.clear();
}

void GrapeStepper::evaluate_current() {
  fidelity_ = ensemble_performance(problem_, current_).mean;
  objective_ = fidelity_ - penalty_value(problem_.system, current_, problem_.penalty);
}

void GrapeStepper::note_progress() {
  if (objective_ > best_objective_ + config_.stall_tolerance) {
    since_improvement_ = 0;
  } else {
    ++since_improvement_;
  }
  if (objective_ > best_objective_) {
    best_objective_ = objective_;
    best_ = current_;
  }
}

bool GrapeStepper::step() {
  const bool ok = config_.mode == GrapeMode::first_order ? first_order_step() : quasi_newton_step();
  if (!ok) return false;
  note_progress();
  return since_improvement_ < config_.stall_window;
}

bool GrapeStepper::first_order_step() {
  const RealMatrix g = grape_gradient(problem_, current_);
  RealMatrix amps = current_.amplitudes();
  for (Eigen::Index n = 0; n < amps.cols(); ++n) {
    amps.col(n) += config_.step * current_.duration(static_cast<std::size_t>(n)) * g.col(n);
  }
  current_.set_amplitudes(amps);
  evaluate_current();
  return true;
}

bool GrapeStepper::quasi_newton_step() {
  const Eigen::Index rows = static_cast<Eigen::Index>(current_.channel_count());
  const Eigen::Index cols = static_cast<Eigen::Index>(current_.segment_count());
  if (!have_gradient_) {
    gradient_ = flatten(objective_gradient(problem_, current_));
    have_gradient_ = true;
  }
  const RealVector x = flatten(current_.amplitudes());

  for (int attempt = 0; attempt < 2; ++attempt) {
    // Two-loop recursion on f = -Phi; the resulting ascent direction for Phi.
    RealVector q = -gradient_;
    const std::size_t k = s_history_.size();
    std::vector<double> alpha(k);
    for (std::size_t i = k; i-- > 0;) {
      const double rho = 1.0 / y_history_[i].dot(s_history_[i]);
      alpha[i] = rho * s_history_[i].dot(q);
      q -= alpha[i] * y_history_[i];
    }
    if (k > 0) {
      q *= s_history_.back().dot(y_history_.back()) / y_history_.back().squaredNorm();
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double rho = 1.0 / y_history_[i].dot(s_history_[i]);
      const double beta = rho * y_history_[i].dot(q);
      q += s_history_[i] * (alpha[i] - beta);
    }
    RealVector direction = -q;
    double slope = gradient_.dot(direction);
    if (!(slope > 0.0)) {
      s_history_.clear();
      y_history_.clear();
      direction = gradient_;
      slope = gradient_.squaredNorm();
    }
    if (!(slope > 0.0)) return false;

    const double max_move = direction.cwiseAbs().maxCoeff();
    double t = k == 0 ? std::min(1.0, 0.1 * reference_ / max_move) : 1.0;
    t = std::min(t, reference_ / max_move);

    for (int b = 0; b < kMaxBacktracks; ++b, t *= 0.5) {
      ControlSequence trial = current_;
      trial.set_amplitudes(unflatten(x + t * direction, rows, cols));
      const double f = ensemble_performance(problem_, trial).mean;
      const double phi = f - penalty_value(problem_.system, trial, problem_.penalty);
      if (phi >= objective_ + kArmijo * t * slope) {
        const RealVector new_gradient = flatten(objective_gradient(problem_, trial));
        const RealVector s = t * direction;
        const RealVector y = gradient_ - new_gradient;  // change in grad(-Phi)
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
          s_history_.push_back(s);
          y_history_.push_back(y);
          if (s_history_.size() > config_.lbfgs_memory) {
            s_history_.pop_front();
            y_history_.pop_front();
          }
        }
        current_ = std::move(trial);
        fidelity_ = f;
        objective_ = phi;
        gradient_ = new_gradient;
        return true;
      }
    }
    if (s_history_.empty()) return false;
    s_history_.clear();
    y_history_.clear();
  }
  return false;
}

// ---------------------------------------------------------------------------

OptimizationResult grape_run(const ControlProblem& problem, const GrapeConfig& config,
                             const RunSettings& settings) {
  Rng rng(settings.seed);
  return grape_run(problem, config, settings, random_initial_sequence(problem.system, config.shape, rng));
}

OptimizationResult grape_run(const ControlProblem& problem, const GrapeConfig& config,
                             const RunSettings& settings, const ControlSequence& initial) {
  const auto started = std::chrono::steady_clock::now();
  GrapeStepper stepper(problem, config, initial);
  OptimizationResult result;
  auto record = [&] {
    result.fidelity_trace.push_back(stepper.fidelity());
    result.objective_trace.push_back(stepper.objective());
  };
  record();

  ControlSequence final_seq = stepper.best();
  result.termination = Termination::max_iterations;
  if (stepper.fidelity() >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
    final_seq = stepper.current();
  } else {
    for (std::size_t it = 0; it < settings.max_iterations; ++it) {
      const bool ok = stepper.step();
      record();
      if (stepper.fidelity() >= settings.fidelity_goal) {
        result.termination = Termination::goal_reached;
        break;
      }
      if (!ok) {
        result.termination = Termination::stalled;
        break;
      }
    }
    final_seq = result.termination == Termination::goal_reached ? stepper.current() : stepper.best();
  }
  finalize_result(problem, final_seq, result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
