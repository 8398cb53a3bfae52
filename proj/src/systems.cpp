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

#include "qoc/systems.hpp"

#include <cmath>
#include <numbers>

#include "qoc/error.hpp"

namespace qoc {

ComplexMatrix embed_single_qubit(const ComplexMatrix& op, std::size_t qubit, std::size_t qubits) {
  if (qubit >= qubits) throw DimensionError("qubit index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < qubits; ++q) {
    out = kron(out, q == qubit ? op : pauli::identity());
  }
  return out;
}

ControlSystem build_spin_system(const SpinSystemSpec& spec) {
  const std::size_t n = spec.qubits;
  if (n == 0 || n > 12) throw ValidationError("system.qubits must be in [1, 12]");
  if (!spec.detunings_hz.empty() && spec.detunings_hz.size() != n) {
    throw ValidationError("system.detunings_hz must have one entry per qubit");
  }
  const bool has_coupling = spec.coupling_hz.size() > 0;
  if (has_coupling) {
    if (spec.coupling_hz.rows() != static_cast<Eigen::Index>(n) ||
        spec.coupling_hz.cols() != static_cast<Eigen::Index>(n)) {
      throw ValidationError("system.coupling_hz must be qubits x qubits");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (spec.coupling_hz(i, i) != 0.0) {
        throw ValidationError("system.coupling_hz must have a zero diagonal");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (spec.coupling_hz(i, j) != spec.coupling_hz(j, i)) {
          throw ValidationError("system.coupling_hz must be symmetric");
        }
      }
    }
  }
  if (!spec.axes.empty() && spec.axes.size() != n) {
    throw ValidationError("system.axes must have one entry per qubit");
  }
  if (!(spec.max_amplitude_hz > 0.0)) throw ValidationError("system.max_amplitude_hz must be > 0");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = spec.detunings_hz.empty() ? 0.0 : spec.detunings_hz[i];
    if (delta != 0.0) h += (two_pi * delta / 2.0) * embed_single_qubit(pauli::z(), i, n);
  }
  if (has_coupling) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double j_ij = spec.coupling_hz(i, j);
        if (j_ij == 0.0) continue;
        h += (two_pi * j_ij / 2.0) *
             (embed_single_qubit(pauli::z(), i, n) * embed_single_qubit(pauli::z(), j, n));
      }
    }
  }

  std::vector<ControlChannel> channels;
  const double max_amp = two_pi * spec.max_amplitude_hz;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string axes = spec.axes.empty() ? "xy" : spec.axes[i];
    if (axes.empty()) continue;
    for (char axis : axes) {
      if (axis != 'x' && axis != 'y') {
        throw ValidationError("system.axes entries may only contain 'x' and 'y'");
      }
    }
    for (char axis : std::string("xy")) {
      if (axes.find(axis) == std::string::npos) continue;
      const ComplexMatrix sigma = axis == 'x' ? pauli::x() : pauli::y();
      channels.push_back(ControlChannel{embed_single_qubit(sigma * 0.5, i, n), max_amp,
                                        std::string(1, axis) + std::to_string(i + 1)});
    }
  }
  return ControlSystem(std::move(h), std::move(channels));
}

ComplexMatrix standard_gate(std::string_view name, std::size_t qubits, double theta) {
  const Complex i(0.0, 1.0);
  auto single = [&](ComplexMatrix m) {
    if (qubits != 1) {
      throw ValidationError("gate '" + std::string(name) + "' is defined for one qubit");
    }
    return m;
  };
  auto rotation = [&](const ComplexMatrix& sigma) {
    return single(std::cos(theta / 2.0) * pauli::identity() - i * std::sin(theta / 2.0) * sigma);
  };
  if (name == "hadamard") {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return single(h / std::sqrt(2.0));
  }
  if (name == "pauli-x") return single(pauli::x());
  if (name == "pauli-y") return single(pauli::y());
  if (name == "pauli-z") return single(pauli::z());
  if (name == "rx") return rotation(pauli::x());
  if (name == "ry") return rotation(pauli::y());
  if (name == "rz") return rotation(pauli::z());
  if (name == "cnot" || name == "iswap") {
    if (qubits != 2) {
      throw ValidationError("gate '" + std::string(name) + "' is defined for two qubits");
    }
    ComplexMatrix g = ComplexMatrix::Zero(4, 4);
    if (name == "cnot") {
      g(0, 0) = g(1, 1) = 1.0;
      g(2, 3) = g(3, 2) = 1.0;
    } else {
      g(0, 0) = g(3, 3) = 1.0;
      g(1, 2) = g(2, 1) = i;
    }
    return g;
  }
  throw ValidationError("unknown gate '" + std::string(name) + "'");
}

ComplexVector basis_ket(std::string_view bits) {
  if (bits.empty() || bits.size() > 12) throw ValidationError("basis label must have 1-12 bits");
  std::size_t index = 0;
  for (char b : bits) {
    if (b != '0' && b != '1') throw ValidationError("basis label may only contain 0 and 1");
    index = index * 2 + static_cast<std::size_t>(b - '0');
  }
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << bits.size());
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return psi;
}

EnsembleDistribution standard_distribution(DistributionKind kind, double half_width,
                                           std::size_t bins) {
  if (bins == 0) throw ValidationError("distribution needs at least one bin");
  if (!(half_width >= 0.0 && half_width < 0.5)) {
    throw ValidationError("distribution half_width must lie in [0, 0.5)");
  }
  if (bins == 1) return EnsembleDistribution({{1.0, 1.0}});

  const double centre = static_cast<double>(bins - 1) / 2.0;
  std::vector<double> scales(bins);
  std::vector<double> weights(bins);
  for (std::size_t l = 0; l < bins; ++l) {
    const double x = (static_cast<double>(l) - centre) / centre;  // in [-1, 1]
    scales[l] = 1.0 + half_width * x;
    switch (kind) {
      case DistributionKind::uniform:
        weights[l] = 1.0;
        break;
      case DistributionKind::triangular:
        weights[l] = centre + 1.0 - std::abs(static_cast<double>(l) - centre);
        break;
      case DistributionKind::gaussian_truncated:
        // sigma is half the half-width, so the edges sit at two sigma
        weights[l] = std::exp(-2.0 * x * x);
        break;
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<EnsembleDistribution::Bin> out(bins);
  double assigned = 0.0;
  for (std::size_t l = 0; l < bins; ++l) {
    out[l] = {scales[l], weights[l] / total};
    assigned += out[l].probability;
  }
  // absorb the rounding residue so the sum is 1 to within an ulp or two
  out[bins / 2].probability += 1.0 - assigned;
  return EnsembleDistribution(std::move(out));
}

}  // namespace qoc
