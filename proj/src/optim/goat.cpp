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

#include "qoc/optim/goat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "optim/ode.hpp"
#include "qoc/error.hpp"

namespace qoc {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

double max_step_for(const GoatControls& controls, double total_time) {
  double narrowest = total_time;
  for (const auto& ch : controls.pulses) {
    for (const auto& p : ch) narrowest = std::min(narrowest, p.width);
  }
  return std::clamp(narrowest / 2.0, total_time / 2000.0, total_time / 20.0);
}

void check_controls(const ControlSystem& system, const GoatControls& controls) {
  if (controls.pulses.size() != system.channel_count() || controls.scale.size() != system.channel_count()) {
    throw DimensionError("goat: controls need one pulse list and one scale per channel");
  }
  for (const auto& ch : controls.pulses) {
    for (const auto& p : ch) {
      if (!(p.width > 0.0)) throw ValidationError("goat: pulse width must be > 0");
    }
  }
}

}  // namespace

double goat_waveform(const std::vector<GaussianPulse>& pulses, double t) {
  double value = 0.0;
  for (const auto& p : pulses) {
    if (!(p.width > 0.0)) throw ValidationError("goat: pulse width must be > 0");
    const double u = (t - p.center) / p.width;
    value += std::exp(-u * u);
  }
  return value;
}

std::size_t GoatControls::parameter_count() const {
  std::size_t count = 0;
  for (const auto& ch : pulses) count += 2 * ch.size();
  return count;
}

RealVector GoatControls::parameters() const {
  RealVector alpha(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index i = 0;
  for (const auto& ch : pulses) {
    for (const auto& p : ch) {
      alpha(i++) = p.center;
      alpha(i++) = p.width;
    }
  }
  return alpha;
}

void GoatControls::set_parameters(const RealVector& alpha) {
  if (alpha.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw DimensionError("goat: parameter count mismatch");
  }
  Eigen::Index i = 0;
  for (auto& ch : pulses) {
    for (auto& p : ch) {
      p.center = alpha(i++);
      p.width = alpha(i++);
    }
  }
}

GoatPropagation goat_propagate_with_sensitivities(const ControlSystem& system,
                                                  const GoatControls& controls, double total_time,
                                                  const GoatIntegration& integration) {
  check_controls(system, controls);
  if (!(total_time > 0.0)) throw ValidationError("goat: total_time must be > 0");
  const Eigen::Index d = system.dim();
  const Eigen::Index block = d * d;
  const std::size_t params = controls.parameter_count();
  const std::size_t channels = system.channel_count();
  const Complex minus_i(0.0, -1.0);

  ComplexVector y = ComplexVector::Zero(block * static_cast<Eigen::Index>(params + 1));
  Eigen::Map<ComplexMatrix>(y.data(), d, d).setIdentity();

  std::vector<double> omega(channels);
  std::vector<double> d_omega(params);  // d omega_{m(p)} / d alpha_p
  std::vector<std::size_t> owner(params);
  {
    std::size_t p = 0;
    for (std::size_t m = 0; m < channels; ++m) {
      for (std::size_t k = 0; k < controls.pulses[m].size(); ++k) {
        owner[p++] = m;
        owner[p++] = m;
      }
    }
  }
  ComplexMatrix h(d, d);

  auto rhs = [&](double t, const ComplexVector& state, ComplexVector& out) {
    std::size_t p = 0;
    for (std::size_t m = 0; m < channels; ++m) {
      const double s = controls.scale[m];
      double w = 0.0;
      for (const auto& pulse : controls.pulses[m]) {
        const double diff = t - pulse.center;
        const double sig2 = pulse.width * pulse.width;
        const double g = std::exp(-diff * diff / sig2);
        w += g;
        d_omega[p++] = s * g * 2.0 * diff / sig2;
        d_omega[p++] = s * g * 2.0 * diff * diff / (sig2 * pulse.width);
      }
      omega[m] = s * w;
    }
    h = system.h_system();
    for (std::size_t m = 0; m < channels; ++m) h += omega[m] * system.channels()[m].op;

    out.resize(state.size());
    Eigen::Map<const ComplexMatrix> u(state.data(), d, d);
    Eigen::Map<ComplexMatrix>(out.data(), d, d).noalias() = minus_i * (h * u);
    for (std::size_t q = 0; q < params; ++q) {
      const Eigen::Index off = block * static_cast<Eigen::Index>(q + 1);
      Eigen::Map<const ComplexMatrix> du(state.data() + off, d, d);
      Eigen::Map<ComplexMatrix> dst(out.data() + off, d, d);
      dst.noalias() = minus_i * (h * du);
      dst.noalias() += (minus_i * d_omega[q]) * (system.channels()[owner[q]].op * u);
    }
  };

  detail::OdeTolerances tol{integration.rtol, integration.atol, max_step_for(controls, total_time)};
  detail::integrate_dopri5(rhs, 0.0, total_time, y, tol);

  GoatPropagation out;
  out.propagator = Eigen::Map<const ComplexMatrix>(y.data(), d, d);
  out.sensitivities.reserve(params);
  for (std::size_t q = 0; q < params; ++q) {
    out.sensitivities.emplace_back(
        Eigen::Map<const ComplexMatrix>(y.data() + block * static_cast<Eigen::Index>(q + 1), d, d));
  }
  return out;
}

ControlSequence goat_discretize(const ControlSystem& system, const GoatControls& controls,
                                double total_time, std::size_t segments) {
  check_controls(system, controls);
  if (segments == 0) throw ValidationError("goat: discretize_segments must be >= 1");
  ControlSequence seq = ControlSequence::uniform(segments, system.channel_count(), total_time);
  const double tau = total_time / static_cast<double>(segments);
  for (std::size_t n = 0; n < segments; ++n) {
    const double t = (static_cast<double>(n) + 0.5) * tau;
    for (std::size_t m = 0; m < system.channel_count(); ++m) {
      seq.set_amplitude(m, n, controls.scale[m] * goat_waveform(controls.pulses[m], t));
    }
  }
  return seq;
}

OptimizationResult goat_run(const ControlProblem& problem, const GoatConfig& config,
                            const RunSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  if (!problem.is_gate()) throw CapabilityError("GOAT supports gate targets only");
  if (!problem.channels.empty()) throw CapabilityError("GOAT does not support interleaved channels");
  if (config.pulses_per_channel == 0) throw ValidationError("goat: pulses_per_channel must be >= 1");
  if (!(config.total_time > 0.0)) throw ValidationError("goat: total_time must be > 0");
  if (!(config.amplitude_fraction >= 0.0)) throw ValidationError("goat: amplitude_fraction must be >= 0");

  const auto& sys = problem.system;
  const double big_t = config.total_time;
  const auto k_pulses = static_cast<double>(config.pulses_per_channel);
  Rng rng(settings.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  GoatControls controls;
  for (std::size_t m = 0; m < sys.channel_count(); ++m) {
    controls.scale.push_back(config.amplitude_fraction * sys.channels()[m].max_amplitude);
    std::vector<GaussianPulse> pulses;
    for (std::size_t k = 0; k < config.pulses_per_channel; ++k) {
      const double slot = big_t / k_pulses;
      const double center = (static_cast<double>(k) + 0.5 + 0.1 * jitter(rng)) * slot;
      const double width = 0.5 * slot * (1.0 + 0.2 * jitter(rng));
      pulses.push_back({center, width});
    }
    controls.pulses.push_back(std::move(pulses));
  }
  const GoatIntegration integration{config.rtol, config.atol};
  const auto& bins = problem.ensemble.bins();

  auto scaled_controls = [&](const GoatControls& c, double s) {
    GoatControls out = c;
    for (double& v : out.scale) v *= s;
    return out;
  };

  // Target phase: with traceless controls det U(T) is fixed, so only the
  // roots e^{i theta} U_F with matching determinant can be reached exactly.
  ComplexMatrix target = problem.gate().unitary;
  const Eigen::Index d = sys.dim();
  const double dd = static_cast<double>(d);
  bool traceless = true;
  for (const auto& ch : sys.channels()) {
    traceless = traceless && std::abs(ch.op.trace()) <= 1e-12 * std::max(1.0, ch.op.norm());
  }
  if (traceless) {
    const ComplexMatrix u0 = goat_propagate_with_sensitivities(sys, scaled_controls(controls, bins.front().scale), big_t, integration).propagator;
    const double base = (-sys.h_system().trace().real() * big_t - std::arg(target.determinant())) / dd;
    double best_overlap = -std::numeric_limits<double>::infinity();
    ComplexMatrix chosen = target;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double theta = base + 2.0 * std::numbers::pi * static_cast<double>(k) / dd;
      const ComplexMatrix candidate = std::polar(1.0, theta) * target;
      const double overlap = hs_inner(candidate, u0).real();
      if (overlap > best_overlap) {
        best_overlap = overlap;
        chosen = candidate;
      }
    }
    target = chosen;
  }
  const double norm = hs_inner(target, target).real();

  struct Evaluation {
    double objective = 0.0;  // sum_l p_l |f_l|
    double fidelity = 0.0;   // sum_l p_l F_G
    RealVector gradient;
  };
  auto evaluate = [&](const GoatControls& c, bool with_gradient) {
    Evaluation e;
    e.gradient = RealVector::Zero(static_cast<Eigen::Index>(c.parameter_count()));
    for (const auto& bin : bins) {
      const GoatPropagation prop = goat_propagate_with_sensitivities(sys, scaled_controls(c, bin.scale), big_t, integration);
      const Complex overlap = hs_inner(target, prop.propagator) / norm;
      const Complex f = 1.0 - overlap;
      const double af = std::abs(f);
      e.objective += bin.probability * af;
      e.fidelity += bin.probability * std::norm(overlap);
      if (with_gradient && af > 0.0) {
        for (std::size_t q = 0; q < prop.sensitivities.size(); ++q) {
          const Complex g = hs_inner(target, prop.sensitivities[q]) / norm;
          e.gradient(static_cast<Eigen::Index>(q)) -= bin.probability * (std::conj(f) / af * g).real();
        }
      }
    }
    return e;
  };

  OptimizationResult result;
  Evaluation current = evaluate(controls, true);
  auto record = [&] {
    result.fidelity_trace.push_back(current.fidelity);
    result.objective_trace.push_back(current.fidelity -
                                     penalty_value(sys, goat_discretize(sys, controls, big_t, config.discretize_segments), problem.penalty));
  };
  record();
  result.termination = Termination::max_iterations;
  const double min_width = 1e-3 * big_t;
  double step = 0.0;
  if (current.objective < 1e-15 || current.fidelity >= settings.fidelity_goal) {
    result.termination = Termination::goal_reached;
  } else {
    for (std::size_t it = 0; it < settings.max_iterations; ++it) {
      const RealVector x = controls.parameters();
      const RealVector& g = current.gradient;
      const double slope = g.squaredNorm();
      if (!(slope > 0.0)) {
        result.termination = Termination::stalled;
        break;
      }
      if (step == 0.0) step = 0.05 * big_t / g.cwiseAbs().maxCoeff();
      bool accepted = false;
      for (int b = 0; b < kMaxBacktracks; ++b, step *= 0.5) {
        const RealVector trial_x = x - step * g;
        bool valid = true;
        for (Eigen::Index i = 1; i < trial_x.size(); i += 2) valid = valid && trial_x(i) > min_width;
        if (!valid) continue;
        GoatControls trial = controls;
        trial.set_parameters(trial_x);
        Evaluation e = evaluate(trial, true);
        if (e.objective <= current.objective - kArmijo * step * slope) {
          controls = std::move(trial);
          current = std::move(e);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        result.termination = Termination::stalled;
        break;
      }
      step *= 2.0;
      record();
      if (current.objective < 1e-15 || current.fidelity >= settings.fidelity_goal) {
        result.termination = Termination::goal_reached;
        break;
      }
    }
  }
  finalize_result(problem, goat_discretize(sys, controls, big_t, config.discretize_segments), result);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace qoc
