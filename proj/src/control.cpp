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

#include "qoc/control.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qoc/error.hpp"

namespace qoc {
namespace {

constexpr double kStateTolerance = 1e-10;
constexpr double kDiagonalTolerance = 1e-8;

void check_segment_index(const ControlSequence& seq, std::size_t n) {
  if (n >= seq.segment_count()) {
    std::ostringstream os;
    os << "segment index " << n << " out of range [0, " << seq.segment_count() << ")";
    throw std::out_of_range(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ControlSystem

ControlSystem::ControlSystem(ComplexMatrix h_system, std::vector<ControlChannel> channels)
    : channels_(std::move(channels)) {
  h_system_ = hermitian_part_checked(h_system);
  if (channels_.empty()) throw ValidationError("control system needs at least one channel");
  for (auto& ch : channels_) {
    if (ch.op.rows() != h_system_.rows() || ch.op.cols() != h_system_.cols()) {
      throw DimensionError("channel '" + ch.label + "' operator does not match system dimension");
    }
    try {
      ch.op = hermitian_part_checked(ch.op);
    } catch (const ValidationError&) {
      throw ValidationError("channel '" + ch.label + "' operator is not Hermitian");
    }
    if (!(ch.max_amplitude > 0.0) || !std::isfinite(ch.max_amplitude)) {
      throw ValidationError("channel '" + ch.label + "' max_amplitude must be positive");
    }
  }
  drift_spectrum_ = eig_hermitian(h_system_);
}

ComplexMatrix ControlSystem::delay_propagator(double tau) const {
  return drift_spectrum_.exp_i(tau);
}

ComplexMatrix ControlSystem::control_hamiltonian(const RealVector& amplitudes) const {
  if (static_cast<std::size_t>(amplitudes.size()) != channels_.size()) {
    throw DimensionError("amplitude count does not match channel count");
  }
  ComplexMatrix h = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t m = 0; m < channels_.size(); ++m) {
    h += amplitudes(static_cast<Eigen::Index>(m)) * channels_[m].op;
  }
  return h;
}

// ---------------------------------------------------------------------------
// ControlSequence

ControlSequence::ControlSequence(std::vector<double> durations, RealMatrix amplitudes)
    : durations_(std::move(durations)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.cols()) != durations_.size()) {
    throw DimensionError("amplitude matrix must have one column per segment");
  }
  for (double tau : durations_) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw ValidationError("segment durations must be positive and finite");
    }
  }
  if (!amplitudes_.allFinite()) throw ValidationError("amplitudes must be finite");
}

ControlSequence ControlSequence::uniform(std::size_t segments, std::size_t channels,
                                         double total_time) {
  if (segments == 0) throw ValidationError("uniform sequence needs at least one segment");
  if (!(total_time > 0.0)) throw ValidationError("total time must be positive");
  return ControlSequence(
      std::vector<double>(segments, total_time / static_cast<double>(segments)),
      RealMatrix::Zero(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(segments)));
}

double ControlSequence::total_time() const {
  return std::accumulate(durations_.begin(), durations_.end(), 0.0);
}

double ControlSequence::amplitude(std::size_t m, std::size_t n) const {
  return amplitudes_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
}

void ControlSequence::set_amplitude(std::size_t m, std::size_t n, double value) {
  if (!std::isfinite(value)) throw ValidationError("amplitudes must be finite");
  amplitudes_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = value;
}

void ControlSequence::set_duration(std::size_t n, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("segment durations must be positive and finite");
  }
  durations_.at(n) = value;
}

void ControlSequence::set_amplitudes(const RealMatrix& amplitudes) {
  if (amplitudes.rows() != amplitudes_.rows() || amplitudes.cols() != amplitudes_.cols()) {
    throw DimensionError("amplitude matrix shape mismatch");
  }
  if (!amplitudes.allFinite()) throw ValidationError("amplitudes must be finite");
  amplitudes_ = amplitudes;
}

ControlSequence ControlSequence::scaled(double factor) const {
  ControlSequence out = *this;
  out.amplitudes_ *= factor;
  return out;
}

ControlSequence ControlSequence::split_halves() const {
  const Eigen::Index n = amplitudes_.cols();
  std::vector<double> durations;
  durations.reserve(2 * durations_.size());
  RealMatrix amps(amplitudes_.rows(), 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double half = durations_[static_cast<std::size_t>(k)] / 2.0;
    durations.push_back(half);
    durations.push_back(half);
    amps.col(2 * k) = amplitudes_.col(k);
    amps.col(2 * k + 1) = amplitudes_.col(k);
  }
  return ControlSequence(std::move(durations), std::move(amps));
}

bool ControlSequence::operator==(const ControlSequence& other) const {
  return durations_ == other.durations_ && amplitudes_.rows() == other.amplitudes_.rows() &&
         amplitudes_.cols() == other.amplitudes_.cols() && amplitudes_ == other.amplitudes_;
}

void check_compatible(const ControlSystem& sys, const ControlSequence& seq) {
  if (seq.channel_count() != sys.channel_count()) {
    std::ostringstream os;
    os << "sequence has " << seq.channel_count() << " channels, system has "
       << sys.channel_count();
    throw DimensionError(os.str());
  }
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState QuantumState::pure(ComplexVector psi) {
  if (psi.size() == 0) throw DimensionError("empty state vector");
  if (std::abs(psi.norm() - 1.0) > kStateTolerance) {
    throw ValidationError("pure state must have unit norm");
  }
  QuantumState s;
  s.pure_ = true;
  s.psi_ = std::move(psi);
  return s;
}

QuantumState QuantumState::density(ComplexMatrix rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw DimensionError("density matrix must be square");
  }
  if ((rho - rho.adjoint()).norm() > kStateTolerance) {
    throw ValidationError("density matrix must be Hermitian");
  }
  rho = (rho + rho.adjoint()) * 0.5;
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kStateTolerance) {
    throw ValidationError("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kStateTolerance) {
    throw ValidationError("density matrix must be positive semidefinite");
  }
  QuantumState s;
  s.pure_ = false;
  s.rho_ = std::move(rho);
  return s;
}

const ComplexVector& QuantumState::vector() const {
  if (!pure_) throw ValidationError("state is not stored as a pure vector");
  return psi_;
}

ComplexMatrix QuantumState::density_matrix() const {
  if (pure_) return psi_ * psi_.adjoint();
  return rho_;
}

double QuantumState::purity() const {
  if (pure_) return 1.0;
  return hs_inner(rho_, rho_).real();
}

// ---------------------------------------------------------------------------
// QuantumChannel

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus, std::size_t insert_after_segment)
    : kraus_(std::move(kraus)), insert_after_(insert_after_segment) {
  if (kraus_.empty()) throw ValidationError("quantum channel needs at least one Kraus operator");
  const Eigen::Index d = kraus_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators must be d x d");
    sum += k.adjoint() * k;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).norm() > kStateTolerance) {
    throw ValidationError("Kraus operators are not trace preserving (sum K^dagger K != I)");
  }
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

// ---------------------------------------------------------------------------
// Propagators

ComplexMatrix segment_hamiltonian(const ControlSystem& sys, const ControlSequence& seq,
                                  std::size_t n) {
  check_compatible(sys, seq);
  check_segment_index(seq, n);
  ComplexMatrix h = sys.h_system();
  for (std::size_t m = 0; m < sys.channel_count(); ++m) {
    h += seq.amplitude(m, n) * sys.channels()[m].op;
  }
  return h;
}

ComplexMatrix segment_propagator(const ControlSystem& sys, const ControlSequence& seq,
                                 std::size_t n) {
  return matrix_exp_i(segment_hamiltonian(sys, seq, n), seq.duration(n));
}

std::vector<ComplexMatrix> segment_propagators(const ControlSystem& sys,
                                               const ControlSequence& seq) {
  check_compatible(sys, seq);
  std::vector<ComplexMatrix> out;
  out.reserve(seq.segment_count());
  for (std::size_t n = 0; n < seq.segment_count(); ++n) {
    out.push_back(segment_propagator(sys, seq, n));
  }
  return out;
}

ComplexMatrix total_propagator(const ControlSystem& sys, const ControlSequence& seq) {
  check_compatible(sys, seq);
  ComplexMatrix u = ComplexMatrix::Identity(sys.dim(), sys.dim());
  for (std::size_t n = 0; n < seq.segment_count(); ++n) {
    u = segment_propagator(sys, seq, n) * u;
  }
  return u;
}

ComplexMatrix propagate_operator(const ControlSystem& sys, const ControlSequence& seq,
                                 const ComplexMatrix& op,
                                 std::span<const QuantumChannel> channels) {
  check_compatible(sys, seq);
  if (op.rows() != sys.dim() || op.cols() != sys.dim()) {
    throw DimensionError("operator does not match system dimension");
  }
  for (const auto& ch : channels) {
    if (ch.insert_after_segment() > seq.segment_count()) {
      throw ValidationError("channel insertion index beyond the last segment");
    }
    if (ch.kraus_operators().front().rows() != sys.dim()) {
      throw DimensionError("channel dimension does not match system");
    }
  }
  auto apply_channels_at = [&](std::size_t index, ComplexMatrix& rho) {
    for (const auto& ch : channels) {
      if (ch.insert_after_segment() == index) rho = ch.apply(rho);
    }
  };
  ComplexMatrix rho = op;
  apply_channels_at(0, rho);
  for (std::size_t n = 0; n < seq.segment_count(); ++n) {
    const ComplexMatrix u = segment_propagator(sys, seq, n);
    rho = u * rho * u.adjoint();
    apply_channels_at(n + 1, rho);
  }
  return rho;
}

QuantumState propagate_state(const ControlSystem& sys, const ControlSequence& seq,
                             const QuantumState& rho, std::span<const QuantumChannel> channels) {
  if (rho.dim() != sys.dim()) throw DimensionError("state does not match system dimension");
  if (channels.empty() && rho.is_pure()) {
    ComplexVector psi = total_propagator(sys, seq) * rho.vector();
    psi.normalize();
    return QuantumState::pure(std::move(psi));
  }
  return QuantumState::density(propagate_operator(sys, seq, rho.density_matrix(), channels));
}

ComplexMatrix trotter_propagator(const ControlSystem& sys, const ControlSequence& seq,
                                 std::size_t n) {
  check_compatible(sys, seq);
  check_segment_index(seq, n);
  const double tau = seq.duration(n);
  const ComplexMatrix half = sys.delay_propagator(tau / 2.0);
  const ComplexMatrix central =
      matrix_exp_i(sys.control_hamiltonian(seq.segment_amplitudes(n)), tau);
  return half * central * half;
}

ComplexMatrix diagonalized_control_propagator(const ControlSystem& sys,
                                              const ControlSequence& seq, std::size_t n,
                                              const ComplexMatrix& w1, const ComplexMatrix& w2) {
  check_compatible(sys, seq);
  check_segment_index(seq, n);
  const Eigen::Index d = sys.dim();
  if (w1.rows() != d || w1.cols() != d || w2.rows() != d || w2.cols() != d) {
    throw DimensionError("W1/W2 must match the system dimension");
  }
  if ((w2 * w1 - ComplexMatrix::Identity(d, d)).norm() > kDiagonalTolerance) {
    throw ApplicabilityError("W2 W1 != I: the pair does not define a basis change");
  }
  const ComplexMatrix h_control = sys.control_hamiltonian(seq.segment_amplitudes(n));
  const ComplexMatrix rotated = w2 * h_control * w1;
  const ComplexMatrix off = rotated - ComplexMatrix(rotated.diagonal().asDiagonal());
  const double scale = std::max(1.0, h_control.norm());
  if (off.norm() > kDiagonalTolerance * scale) {
    throw ApplicabilityError("W2 H^Omega W1 is not diagonal for this segment");
  }
  const double tau = seq.duration(n);
  ComplexVector phases(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    phases(k) = std::polar(1.0, -rotated(k, k).real() * tau);
  }
  const ComplexMatrix half = sys.delay_propagator(tau / 2.0);
  return half * (w1 * phases.asDiagonal() * w2) * half;
}

BangBangCache::BangBangCache(const ControlSystem& sys, std::span<const double> durations) {
  RealVector full(static_cast<Eigen::Index>(sys.channel_count()));
  for (std::size_t m = 0; m < sys.channel_count(); ++m) {
    full(static_cast<Eigen::Index>(m)) = sys.channels()[m].max_amplitude;
  }
  const ComplexMatrix h_full = sys.h_system() + sys.control_hamiltonian(full);
  const Spectrum full_spectrum = eig_hermitian(h_full);
  for (double tau : durations) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw ValidationError("bang-bang durations must be positive");
    }
    delay_.try_emplace(tau, sys.delay_propagator(tau));
    full_.try_emplace(tau, full_spectrum.exp_i(tau));
  }
}

const ComplexMatrix& BangBangCache::propagator(SegmentKind kind, double tau) const {
  const auto& table = kind == SegmentKind::delay ? delay_ : full_;
  auto it = table.find(tau);
  if (it == table.end()) {
    std::ostringstream os;
    os.precision(17);
    os << "bang-bang cache has no entry for duration " << tau;
    throw CacheMissError(os.str());
  }
  return it->second;
}

}  // namespace qoc
