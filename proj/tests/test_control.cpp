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

#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qoc/control.hpp"
#include "qoc/error.hpp"
#include "qoc/fidelity.hpp"
#include "qoc/systems.hpp"

using namespace qoc;

namespace {

constexpr double kPi = std::numbers::pi;

ControlSystem qubit_system(ComplexMatrix h, std::vector<ComplexMatrix> ops) {
  std::vector<ControlChannel> ch;
  for (std::size_t m = 0; m < ops.size(); ++m) ch.push_back({ops[m], 10.0, "c" + std::to_string(m + 1)});
  return ControlSystem(std::move(h), std::move(ch));
}

ControlSequence random_sequence(std::size_t channels, std::size_t segments, std::mt19937_64& rng,
                                double amp = 3.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::uniform_real_distribution<double> d(0.05, 0.4);
  std::vector<double> tau(segments);
  RealMatrix a(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(segments));
  for (auto& t : tau) t = d(rng);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng);
  return ControlSequence(tau, a);
}

}  // namespace

TEST_CASE("control_hamiltonian") {
  std::mt19937_64 rng(1);
  const ComplexMatrix hs = oracle::random_hermitian(2, rng);
  const ControlSystem sys = qubit_system(hs, {pauli::x() / 2.0, pauli::y() / 2.0});
  ControlSequence seq = ControlSequence::uniform(1, 2, 1.0);
  CHECK((segment_hamiltonian(sys, seq, 0) - hs).norm() < 1e-15);

  const ControlSystem one(ComplexMatrix::Zero(2, 2), {{pauli::x() / 2.0, 10.0, "x"}});
  ControlSequence s1 = ControlSequence::uniform(1, 1, 1.0);
  s1.set_amplitude(0, 0, kPi);
  CHECK((segment_hamiltonian(one, s1, 0) - kPi / 2.0 * pauli::x()).norm() < 1e-15);

  const ControlSequence r = random_sequence(2, 3, rng);
  for (std::size_t n = 0; n < 3; ++n) {
    const ComplexMatrix expect =
        hs + r.amplitude(0, n) * pauli::x() / 2.0 + r.amplitude(1, n) * pauli::y() / 2.0;
    CHECK((segment_hamiltonian(sys, r, n) - expect).norm() < 1e-14);
  }
}

TEST_CASE("segment and total propagators") {
  const ControlSystem zero(ComplexMatrix::Zero(2, 2), {{pauli::y() / 2.0, 10.0, "y"}});
  ControlSequence seq = ControlSequence::uniform(1, 1, 1.0);
  CHECK((segment_propagator(zero, seq, 0) - ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
  seq.set_amplitude(0, 0, kPi / 2.0);
  CHECK((segment_propagator(zero, seq, 0) - standard_gate("ry", 1, kPi / 2.0)).norm() < 1e-14);
  CHECK((total_propagator(zero, seq) - segment_propagator(zero, seq, 0)).norm() < 1e-15);

  std::mt19937_64 rng(2);
  const ControlSystem sys =
      qubit_system(oracle::random_hermitian(2, rng), {pauli::x() / 2.0, pauli::y() / 2.0});
  const ControlSequence r = random_sequence(2, 3, rng);
  ComplexMatrix fold = ComplexMatrix::Identity(2, 2);
  for (std::size_t n = 0; n < 3; ++n) {
    const ComplexMatrix u = oracle::taylor_exp(segment_hamiltonian(sys, r, n), r.duration(n));
    CHECK((segment_propagator(sys, r, n) - u).norm() < 1e-12);
    fold = u * fold;
  }
  CHECK((total_propagator(sys, r) - fold).norm() < 1e-12);
}

TEST_CASE("R_y(pi/2) then R_x(pi) maps |0> to |+>") {
  const ControlSystem sys(ComplexMatrix::Zero(2, 2),
                          {{pauli::x() / 2.0, 10.0, "x"}, {pauli::y() / 2.0, 10.0, "y"}});
  RealMatrix a(2, 2);
  a << 0.0, kPi, kPi / 2.0, 0.0;
  const ControlSequence seq({1.0, 1.0}, a);
  const QuantumState out = propagate_state(sys, seq, QuantumState::pure(basis_ket("0")));
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(plus.dot(out.vector())) - 1.0) < 1e-12);
}

TEST_CASE("propagate_state with interleaved channels") {
  const ControlSystem sys = qubit_system(ComplexMatrix::Zero(2, 2), {pauli::x() / 2.0});
  const ControlSequence seq = ControlSequence::uniform(1, 1, 1.0);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  std::vector<QuantumChannel> deph{QuantumChannel({k0, k1}, 1)};
  const ComplexMatrix out = propagate_state(sys, seq, QuantumState::density(plus), deph).density_matrix();
  CHECK((out - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-14);

  std::mt19937_64 rng(4);
  const ControlSystem s2 = qubit_system(oracle::random_hermitian(2, rng), {pauli::x() / 2.0});
  const ControlSequence r2 = random_sequence(1, 4, rng);
  const ComplexVector psi = basis_ket("1");
  const QuantumState p = propagate_state(s2, r2, QuantumState::pure(psi));
  CHECK((p.vector() - total_propagator(s2, r2) * psi).norm() < 1e-12);

  // two qubits, phase flip on qubit 0 after segment 2 of 4, against a 16x16 superoperator
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  std::vector<ControlChannel> ch{{kron(pauli::x(), i2) / 2.0, 10.0, "x1"},
                                 {kron(i2, pauli::y()) / 2.0, 10.0, "y2"}};
  const ControlSystem sys4(oracle::random_hermitian(4, rng), ch);
  const ControlSequence r4 = random_sequence(2, 4, rng);
  const double p_flip = 0.3;
  const std::vector<ComplexMatrix> kraus{std::sqrt(1.0 - p_flip) * ComplexMatrix::Identity(4, 4),
                                         std::sqrt(p_flip) * kron(pauli::z(), i2)};
  std::vector<QuantumChannel> mid{QuantumChannel(kraus, 2)};
  const ComplexMatrix rho0 = oracle::random_density(4, rng);
  const ComplexMatrix got = propagate_state(sys4, r4, QuantumState::density(rho0), mid).density_matrix();

  ComplexMatrix super = ComplexMatrix::Identity(16, 16);
  for (std::size_t n = 0; n < 4; ++n) {
    super = oracle::unitary_superop(oracle::taylor_exp(segment_hamiltonian(sys4, r4, n), r4.duration(n))) * super;
    if (n == 1) super = oracle::kraus_superop(kraus) * super;
  }
  const ComplexMatrix expect = oracle::unvec(super * oracle::vec(rho0), 4);
  CHECK((got - expect).norm() < 1e-12);
}

TEST_CASE("trotter propagator") {
  const ControlSystem diag(pauli::z(), {{pauli::z() / 2.0, 10.0, "z"}});
  ControlSequence seq = ControlSequence::uniform(1, 1, 0.7);
  seq.set_amplitude(0, 0, 1.3);
  CHECK((trotter_propagator(diag, seq, 0) - segment_propagator(diag, seq, 0)).norm() < 1e-14);

  std::mt19937_64 rng(9);
  const ControlSystem sys = qubit_system(oracle::random_hermitian(2, rng), {pauli::x() / 2.0});
  ControlSequence zero = ControlSequence::uniform(1, 1, 0.4);
  CHECK((trotter_propagator(sys, zero, 0) - sys.delay_propagator(0.4)).norm() < 1e-14);

  for (int trial = 0; trial < 5; ++trial) {
    const ControlSystem s = qubit_system(oracle::random_hermitian(2, rng), {pauli::x() / 2.0, pauli::y() / 2.0});
    RealMatrix a(2, 1);
    a << 1.7, -0.9;
    auto err = [&](double tau) {
      const ControlSequence q({tau}, a);
      return (trotter_propagator(s, q, 0) - oracle::taylor_exp(segment_hamiltonian(s, q, 0), tau)).norm();
    };
    CHECK(err(0.05) / err(0.025) >= 6.0);
  }
}

TEST_CASE("diagonalized control propagator") {
  std::mt19937_64 rng(12);
  const ComplexMatrix hs = oracle::random_hermitian(2, rng);
  const ControlSystem sys = qubit_system(hs, {pauli::x() / 2.0});
  const ComplexMatrix h = standard_gate("hadamard");
  ControlSequence seq = ControlSequence::uniform(1, 1, 0.3);
  seq.set_amplitude(0, 0, 2.1);
  const ComplexMatrix d = diagonalized_control_propagator(sys, seq, 0, h, h.adjoint());
  CHECK((d - trotter_propagator(sys, seq, 0)).norm() < 1e-12);

  const ControlSystem zsys = qubit_system(hs, {pauli::z() / 2.0});
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK((diagonalized_control_propagator(zsys, seq, 0, i2, i2) - trotter_propagator(zsys, seq, 0)).norm() < 1e-12);

  seq.set_amplitude(0, 0, 0.0);
  CHECK((diagonalized_control_propagator(sys, seq, 0, h, h.adjoint()) - sys.delay_propagator(0.3)).norm() < 1e-12);
  seq.set_amplitude(0, 0, 1.0);
  CHECK_THROWS_AS(diagonalized_control_propagator(sys, seq, 0, i2, i2), ApplicabilityError);
}

TEST_CASE("bang-bang cache") {
  std::mt19937_64 rng(13);
  const ComplexMatrix hs = oracle::random_hermitian(2, rng);
  const ControlSystem sys(hs, {{pauli::x() / 2.0, 6.0, "x"}, {pauli::y() / 2.0, 4.0, "y"}});
  const std::vector<double> taus{0.01, 0.05, 0.2};
  const BangBangCache cache(sys, taus);
  RealVector full(2);
  full << 6.0, 4.0;
  const ComplexMatrix hf = hs + sys.control_hamiltonian(full);
  for (double t : taus) {
    CHECK((cache.propagator(SegmentKind::delay, t) - oracle::taylor_exp(hs, t)).norm() < 1e-12);
    CHECK((cache.propagator(SegmentKind::full_power, t) - oracle::taylor_exp(hf, t)).norm() < 1e-12);
    CHECK(&cache.propagator(SegmentKind::full_power, t) == &cache.propagator(SegmentKind::full_power, t));
  }
  CHECK_THROWS_AS(cache.propagator(SegmentKind::delay, 0.3), CacheMissError);
}

TEST_CASE("sequence operations") {
  std::mt19937_64 rng(14);
  const ControlSystem sys = qubit_system(oracle::random_hermitian(2, rng), {pauli::x() / 2.0, pauli::y() / 2.0});
  const ControlSequence r = random_sequence(2, 3, rng);
  const ControlSequence split = r.split_halves();
  CHECK(split.segment_count() == 6);
  CHECK((total_propagator(sys, split) - total_propagator(sys, r)).norm() < 1e-12);
  CHECK(std::abs(split.total_time() - r.total_time()) < 1e-15);
  CHECK(r.scaled(2.0).amplitude(1, 2) == 2.0 * r.amplitude(1, 2));
  CHECK_THROWS_AS(ControlSequence({1.0, -1.0}, RealMatrix::Zero(1, 2)), ValidationError);
  CHECK_THROWS_AS(ControlSequence({1.0}, RealMatrix::Zero(1, 2)), DimensionError);
  CHECK_THROWS_AS(check_compatible(sys, ControlSequence::uniform(2, 3, 1.0)), DimensionError);
}
