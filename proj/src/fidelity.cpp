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

#include "qoc/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "qoc/error.hpp"

namespace qoc {
namespace {

constexpr double kUnitaryTolerance = 1e-6;
constexpr double kTracelessTolerance = 1e-8;
constexpr double kImagTolerance = 1e-10;

// Below this many flops per bin, spawning workers costs more than it saves.
constexpr double kParallelWorkThreshold = 2e5;

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((rho + rho.adjoint()) * 0.5);
  RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

double squared_norm(const ComplexMatrix& a) { return hs_inner(a, a).real(); }

void require_traceless(const ComplexMatrix& a, const char* name) {
  if (std::abs(a.trace()) >= kTracelessTolerance) {
    std::ostringstream os;
    os << name << " must be traceless (|Tr| = " << std::abs(a.trace()) << ")";
    throw ValidationError(os.str());
  }
}

void require_nonzero(double sq_norm, const char* name) {
  if (!(sq_norm > 1e-300)) {
    throw DegenerateInputError(std::string(name) + " has zero norm");
  }
}

void require_square_same(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionError("fidelity operands must be square and of the same shape");
  }
}

double hinge(double omega, double limit, double zone) {
  const double soft = zone * limit;
  const double excess = std::abs(omega) - soft;
  if (excess <= 0.0) return 0.0;
  return excess / ((1.0 - zone) * limit);
}

}  // namespace

EnsembleDistribution::EnsembleDistribution() : bins_{Bin{1.0, 1.0}} {}

EnsembleDistribution::EnsembleDistribution(std::vector<Bin> bins) : bins_(std::move(bins)) {
  if (bins_.empty()) throw ValidationError("ensemble.bins: at least one bin required");
  double total = 0.0;
  for (const auto& b : bins_) {
    if (!(b.scale > 0.0) || !std::isfinite(b.scale)) {
      throw ValidationError("ensemble.bins: scales must be positive");
    }
    if (!(b.probability >= 0.0) || !std::isfinite(b.probability)) {
      throw ValidationError("ensemble.bins: probabilities must be non-negative");
    }
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "ensemble.bins: probabilities sum to " << total << ", expected 1";
    throw ValidationError(os.str());
  }
}

void validate_problem(const ControlProblem& problem) {
  const Eigen::Index d = problem.system.dim();
  if (problem.penalty.soft_zone <= 0.0 || problem.penalty.soft_zone >= 1.0) {
    throw ValidationError("penalty.soft_zone must lie in (0, 1)");
  }
  if (!(problem.penalty.weight >= 0.0)) throw ValidationError("penalty.weight must be >= 0");
  for (const auto& ch : problem.channels) {
    if (ch.kraus_operators().front().rows() != d) {
      throw DimensionError("quantum channel dimension does not match system");
    }
  }
  if (problem.is_gate()) {
    const auto& u = problem.gate().unitary;
    if (u.rows() != d || u.cols() != d) throw DimensionError("target gate dimension mismatch");
    if (unitarity_deviation(u) > kUnitaryTolerance) {
      throw ValidationError("target gate is not unitary");
    }
    if (!problem.channels.empty()) {
      throw CapabilityError("interleaved channels are only supported for state targets");
    }
    return;
  }
  const auto& st = problem.state();
  if (st.initial.rows() != d || st.initial.cols() != d || st.target.rows() != d ||
      st.target.cols() != d) {
    throw DimensionError("target state dimension mismatch");
  }
  switch (st.kind) {
    case StateFidelity::uhlmann:
    case StateFidelity::trace:
      QuantumState::density(st.initial);
      QuantumState::density(st.target);
      break;
    case StateFidelity::correlation:
    case StateFidelity::attenuated:
      hermitian_part_checked(st.initial);
      hermitian_part_checked(st.target);
      require_traceless(st.initial, "initial operator");
      require_traceless(st.target, "target operator");
      require_nonzero(squared_norm(st.initial), "initial operator");
      require_nonzero(squared_norm(st.target), "target operator");
      break;
  }
}

ControlProblem make_gate_problem(ControlSystem system, ComplexMatrix target,
                                 EnsembleDistribution ensemble, PenaltyConfig penalty) {
  ControlProblem p{std::move(system), GateTarget{std::move(target)}, std::move(ensemble), penalty,
                   {}};
  validate_problem(p);
  return p;
}

ControlProblem make_state_problem(ControlSystem system, ComplexMatrix initial,
                                  ComplexMatrix target, StateFidelity kind,
                                  EnsembleDistribution ensemble, PenaltyConfig penalty,
                                  std::vector<QuantumChannel> channels) {
  ControlProblem p{std::move(system), StateTarget{std::move(initial), std::move(target), kind},
                   std::move(ensemble), penalty, std::move(channels)};
  validate_problem(p);
  return p;
}

double gate_fidelity(const ComplexMatrix& u_target, const ComplexMatrix& u_actual) {
  require_square_same(u_target, u_actual);
  if (unitarity_deviation(u_target) > kUnitaryTolerance ||
      unitarity_deviation(u_actual) > kUnitaryTolerance) {
    throw ValidationError("gate_fidelity: inputs must be unitary");
  }
  const double norm = std::norm(hs_inner(u_target, u_target));
  return std::norm(hs_inner(u_target, u_actual)) / norm;
}

double uhlmann_fidelity(const QuantumState& rho_f, const QuantumState& rho_n) {
  if (rho_f.dim() != rho_n.dim()) throw DimensionError("uhlmann_fidelity: dimension mismatch");
  if (rho_f.is_pure() && rho_n.is_pure()) {
    return std::min(1.0, std::norm(rho_f.vector().dot(rho_n.vector())));
  }
  const ComplexMatrix root = psd_sqrt(rho_f.density_matrix());
  const ComplexMatrix inner = root * rho_n.density_matrix() * root;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((inner + inner.adjoint()) * 0.5,
                                                      Eigen::EigenvaluesOnly);
  const double s = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(s * s, 0.0, 1.0);
}

double trace_fidelity(const ComplexMatrix& rho_f, const ComplexMatrix& rho_n) {
  require_square_same(rho_f, rho_n);
  const Complex v = hs_inner(rho_f, rho_n);
  if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, rho_f.norm() * rho_n.norm())) {
    throw ValidationError("trace_fidelity: overlap has a non-negligible imaginary part");
  }
  return v.real();
}

double correlation(const ComplexMatrix& rho_f, const ComplexMatrix& rho_n) {
  require_square_same(rho_f, rho_n);
  require_traceless(rho_f, "rho_f");
  require_traceless(rho_n, "rho_n");
  const double nf = squared_norm(rho_f);
  const double nn = squared_norm(rho_n);
  require_nonzero(nf, "rho_f");
  require_nonzero(nn, "rho_n");
  return hs_inner(rho_f, rho_n).real() / (std::sqrt(nf) * std::sqrt(nn));
}

double attenuated_correlation(const ComplexMatrix& rho_i, const ComplexMatrix& rho_f,
                              const ComplexMatrix& rho_n) {
  require_square_same(rho_f, rho_n);
  require_square_same(rho_i, rho_n);
  require_traceless(rho_i, "rho_i");
  require_traceless(rho_f, "rho_f");
  require_traceless(rho_n, "rho_n");
  const double ni = squared_norm(rho_i);
  const double nn = squared_norm(rho_n);
  require_nonzero(ni, "rho_i");
  require_nonzero(nn, "rho_n");
  return hs_inner(rho_f, rho_n).real() / (std::sqrt(ni) * std::sqrt(nn));
}

ComplexMatrix traceless_part(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("traceless_part: square matrix required");
  const Complex tr = rho.trace() / static_cast<double>(rho.rows());
  return rho - tr * ComplexMatrix::Identity(rho.rows(), rho.cols());
}

double bin_fidelity(const ControlProblem& problem, const ControlSequence& seq, double scale) {
  const ControlSequence scaled = seq.scaled(scale);
  if (problem.is_gate()) {
    return gate_fidelity(problem.gate().unitary, total_propagator(problem.system, scaled));
  }
  const auto& st = problem.state();
  const ComplexMatrix final_op =
      propagate_operator(problem.system, scaled, st.initial, problem.channels);
  switch (st.kind) {
    case StateFidelity::uhlmann:
      return uhlmann_fidelity(QuantumState::density(st.target), QuantumState::density(final_op));
    case StateFidelity::trace:
      return trace_fidelity(st.target, final_op);
    case StateFidelity::correlation:
      return correlation(st.target, final_op);
    case StateFidelity::attenuated:
      return attenuated_correlation(st.initial, st.target, final_op);
  }
  throw CapabilityError("unknown fidelity kind");
}

unsigned evaluation_threads() {
  static const unsigned threads = [] {
    if (const char* env = std::getenv("QOCTL_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }();
  return threads;
}

EnsemblePerformance ensemble_performance(const ControlProblem& problem, const ControlSequence& seq,
                                         const EnsembleDistribution& dist) {
  check_compatible(problem.system, seq);
  const auto& bins = dist.bins();
  EnsemblePerformance out;
  out.per_bin.assign(bins.size(), 0.0);

  const double d = static_cast<double>(problem.system.dim());
  const double work = static_cast<double>(seq.segment_count()) * d * d * d * 10.0;
  const unsigned workers =
      std::min<unsigned>(evaluation_threads(), static_cast<unsigned>(bins.size()));
  if (workers > 1 && work >= kParallelWorkThreshold) {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t l = w; l < bins.size(); l += workers) {
              out.per_bin[l] = bin_fidelity(problem, seq, bins[l].scale);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t l = 0; l < bins.size(); ++l) {
      out.per_bin[l] = bin_fidelity(problem, seq, bins[l].scale);
    }
  }
  for (std::size_t l = 0; l < bins.size(); ++l) out.mean += bins[l].probability * out.per_bin[l];
  return out;
}

EnsemblePerformance ensemble_performance(const ControlProblem& problem,
                                         const ControlSequence& seq) {
  return ensemble_performance(problem, seq, problem.ensemble);
}

double penalty_value(const ControlSystem& system, const ControlSequence& seq,
                     const PenaltyConfig& pen) {
  check_compatible(system, seq);
  if (pen.weight == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t m = 0; m < seq.channel_count(); ++m) {
    const double limit = system.channels()[m].max_amplitude;
    for (std::size_t n = 0; n < seq.segment_count(); ++n) {
      const double h = hinge(seq.amplitude(m, n), limit, pen.soft_zone);
      sum += h * h;
    }
  }
  return pen.weight * sum;
}

RealMatrix penalty_gradient(const ControlSystem& system, const ControlSequence& seq,
                            const PenaltyConfig& pen) {
  check_compatible(system, seq);
  RealMatrix g = RealMatrix::Zero(static_cast<Eigen::Index>(seq.channel_count()),
                                  static_cast<Eigen::Index>(seq.segment_count()));
  if (pen.weight == 0.0) return g;
  for (std::size_t m = 0; m < seq.channel_count(); ++m) {
    const double limit = system.channels()[m].max_amplitude;
    for (std::size_t n = 0; n < seq.segment_count(); ++n) {
      const double omega = seq.amplitude(m, n);
      const double h = hinge(omega, limit, pen.soft_zone);
      if (h > 0.0) {
        const double sign = omega > 0.0 ? 1.0 : -1.0;
        g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
            2.0 * pen.weight * h * sign / ((1.0 - pen.soft_zone) * limit);
      }
    }
  }
  return g;
}

double penalized_performance(const ControlProblem& problem, const ControlSequence& seq,
                             const EnsembleDistribution& dist, const PenaltyConfig& pen) {
  return ensemble_performance(problem, seq, dist).mean - penalty_value(problem.system, seq, pen);
}

double penalized_performance(const ControlProblem& problem, const ControlSequence& seq) {
  return penalized_performance(problem, seq, problem.ensemble, problem.penalty);
}

}  // namespace qoc
