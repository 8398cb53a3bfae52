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
#include <string>
#include <string_view>
#include <vector>

#include "qoc/control.hpp"
#include "qoc/fidelity.hpp"

namespace qoc {

// Weakly coupled spin-1/2 register. All frequencies in Hz; they are
// converted to angular frequency once, in build_spin_system. Qubit 0 is the
// leftmost tensor factor.
struct SpinSystemSpec {
  std::size_t qubits = 1;
  std::vector<double> detunings_hz;  // empty means all zero
  RealMatrix coupling_hz;            // zz couplings; empty means none
  std::vector<std::string> axes;     // per qubit, subset of "xy"; empty means "xy"
  double max_amplitude_hz = 10.0;

  bool operator==(const SpinSystemSpec& o) const {
    return qubits == o.qubits && detunings_hz == o.detunings_hz &&
           coupling_hz.rows() == o.coupling_hz.rows() &&
           coupling_hz.cols() == o.coupling_hz.cols() && coupling_hz == o.coupling_hz &&
           axes == o.axes && max_amplitude_hz == o.max_amplitude_hz;
  }
};

/// H^S = sum_i 2 pi delta_i Z_i/2 + sum_{i<j} 2 pi J_ij Z_i Z_j / 2 with
/// X_i/2 and Y_i/2 channels labelled "x1", "y1", ...
ControlSystem build_spin_system(const SpinSystemSpec& spec);

/// `op` acting on `qubit` of an n-qubit register.
ComplexMatrix embed_single_qubit(const ComplexMatrix& op, std::size_t qubit, std::size_t qubits);

/// hadamard, pauli-x, pauli-y, pauli-z, rx, ry, rz (single qubit) and cnot,
/// iswap (two qubits). Rotations are exp(-i theta sigma / 2).
ComplexMatrix standard_gate(std::string_view name, std::size_t qubits = 1, double theta = 0.0);

/// Computational basis ket |bits> for a string such as "01".
ComplexVector basis_ket(std::string_view bits);

enum class DistributionKind { uniform, triangular, gaussian_truncated };

/// L bins with scales equally spaced in [1 - half_width, 1 + half_width].
EnsembleDistribution standard_distribution(DistributionKind kind, double half_width,
                                           std::size_t bins);

}  // namespace qoc
