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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoc/linalg.hpp"

namespace qoc {

// One control knob: H_m = omega * op, with |omega| nominally bounded by
// max_amplitude (rad/s).
struct ControlChannel {
  ComplexMatrix op;
  double max_amplitude = 1.0;
  std::string label;
};

// Static drift Hamiltonian H^S plus the control channels. Immutable after
// construction; the drift spectrum is computed once and reused for every
// delay propagator.
class ControlSystem {
 public:
  ControlSystem(ComplexMatrix h_system, std::vector<ControlChannel> channels);

  Eigen::Index dim() const { return h_system_.rows(); }
  const ComplexMatrix& h_system() const { return h_system_; }
  const std::vector<ControlChannel>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  const Spectrum& drift_spectrum() const { return drift_spectrum_; }

  /// U_d(tau) = sum_s exp(-i s tau)|s><s| in the eigenbasis of H^S.
  ComplexMatrix delay_propagator(double tau) const;

  /// sum_m omega_m A_m for one segment's amplitudes.
  ComplexMatrix control_hamiltonian(const RealVector& amplitudes) const;

 private:
  ComplexMatrix h_system_;
  std::vector<ControlChannel> channels_;
  Spectrum drift_spectrum_;
};

// Piecewise-constant control sequence. Segment 0 is applied first.
// Amplitudes are stored channels x segments.
class ControlSequence {
 public:
  ControlSequence() = default;
  ControlSequence(std::vector<double> durations, RealMatrix amplitudes);

  /// N equal segments of duration total_time/N with all amplitudes zero.
  static ControlSequence uniform(std::size_t segments, std::size_t channels, double total_time);

  std::size_t segment_count() const { return durations_.size(); }
  std::size_t channel_count() const { return static_cast<std::size_t>(amplitudes_.rows()); }
  double duration(std::size_t n) const { return durations_.at(n); }
  const std::vector<double>& durations() const { return durations_; }
  double total_time() const;

  double amplitude(std::size_t m, std::size_t n) const;
  void set_amplitude(std::size_t m, std::size_t n, double value);
  void set_duration(std::size_t n, double value);
  const RealMatrix& amplitudes() const { return amplitudes_; }
  void set_amplitudes(const RealMatrix& amplitudes);
  RealVector segment_amplitudes(std::size_t n) const { return amplitudes_.col(static_cast<Eigen::Index>(n)); }

  /// Copy with every amplitude multiplied by `factor`.
  ControlSequence scaled(double factor) const;

  /// Every segment replaced by two copies of half its duration.
  ControlSequence split_halves() const;

  bool operator==(const ControlSequence& other) const;

 private:
  std::vector<double> durations_;
  RealMatrix amplitudes_;
};

/// Throws DimensionError when the sequence's channel count differs from
/// the system's.
void check_compatible(const ControlSystem& sys, const ControlSequence& seq);

// Pure ket or density matrix.
class QuantumState {
 public:
  static QuantumState pure(ComplexVector psi);
  static QuantumState density(ComplexMatrix rho);

  bool is_pure() const { return pure_; }
  Eigen::Index dim() const { return pure_ ? psi_.size() : rho_.rows(); }
  const ComplexVector& vector() const;
  ComplexMatrix density_matrix() const;
  double purity() const;

 private:
  QuantumState() = default;
  bool pure_ = false;
  ComplexVector psi_;
  ComplexMatrix rho_;
};

/// Non-unitary map rho -> sum_j K_j rho K_j^dagger applied after segment
/// `insert_after_segment` (0 = before the first segment).
class QuantumChannel {
 public:
  QuantumChannel(std::vector<ComplexMatrix> kraus, std::size_t insert_after_segment);

  const std::vector<ComplexMatrix>& kraus_operators() const { return kraus_; }
  std::size_t insert_after_segment() const { return insert_after_; }
  ComplexMatrix apply(const ComplexMatrix& rho) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t insert_after_;
};

ComplexMatrix segment_hamiltonian(const ControlSystem& sys, const ControlSequence& seq,
                                  std::size_t n);

/// exp(-i H_n tau_n).
ComplexMatrix segment_propagator(const ControlSystem& sys, const ControlSequence& seq,
                                 std::size_t n);

/// All segment propagators, segment 0 first.
std::vector<ComplexMatrix> segment_propagators(const ControlSystem& sys,
                                               const ControlSequence& seq);

/// U_N ... U_2 U_1 (later segments multiply on the left).
ComplexMatrix total_propagator(const ControlSystem& sys, const ControlSequence& seq);

/// Evolves `rho` through the sequence, applying the interleaved channels at
/// their insertion points. Any channel forces a density-matrix result.
QuantumState propagate_state(const ControlSystem& sys, const ControlSequence& seq,
                             const QuantumState& rho,
                             std::span<const QuantumChannel> channels = {});

/// Same evolution for an arbitrary operator (e.g. a traceless deviation
/// density matrix). No state validation is performed on `op`.
ComplexMatrix propagate_operator(const ControlSystem& sys, const ControlSequence& seq,
                                 const ComplexMatrix& op,
                                 std::span<const QuantumChannel> channels = {});

/// Symmetric split U_d(tau/2) exp(-i H^Omega tau) U_d(tau/2).
ComplexMatrix trotter_propagator(const ControlSystem& sys, const ControlSequence& seq,
                                 std::size_t n);

/// Trotter split with the control exponential evaluated as
/// w1 diag(exp(-i d tau)) w2, where d = diag(w2 H^Omega w1). Throws
/// ApplicabilityError unless w2 w1 = I and w2 H^Omega w1 is diagonal (1e-8).
ComplexMatrix diagonalized_control_propagator(const ControlSystem& sys,
                                              const ControlSequence& seq, std::size_t n,
                                              const ComplexMatrix& w1, const ComplexMatrix& w2);

enum class SegmentKind { delay, full_power };

// Precomputed propagators for bang-bang sequences: delays (all amplitudes
// zero) and full-power pulses (every channel at its max_amplitude). Built
// once; lookups never compute.
class BangBangCache {
 public:
  BangBangCache(const ControlSystem& sys, std::span<const double> durations);

  const ComplexMatrix& propagator(SegmentKind kind, double tau) const;
  std::size_t size() const { return delay_.size() + full_.size(); }

 private:
  std::map<double, ComplexMatrix> delay_;
  std::map<double, ComplexMatrix> full_;
};

}  // namespace qoc
