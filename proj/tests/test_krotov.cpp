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

#include "oracles.hpp"
#include "qoc/error.hpp"
#include "qoc/optim/krotov.hpp"
#include "qoc/systems.hpp"

using namespace qoc;

namespace {

ControlProblem transfer_problem(double detuning_hz = 0.0) {
  SpinSystemSpec spec;
  spec.detunings_hz = {detuning_hz};
  spec.axes = {"x"};
  const ComplexVector k0 = basis_ket("0"), k1 = basis_ket("1");
  return make_state_problem(build_spin_system(spec), k0 * k0.adjoint(), k1 * k1.adjoint(), StateFidelity::trace);
}

void check_monotone(const OptimizationResult& r) {
  for (std::size_t k = 1; k < r.fidelity_trace.size(); ++k) {
    CHECK(r.fidelity_trace[k] >= r.fidelity_trace[k - 1] - 1e-9);
  }
}

}  // namespace

TEST_CASE("Krotov multiplier") {
  std::mt19937_64 rng(41);
  SpinSystemSpec spec;
  spec.detunings_hz = {0.4};
  const ControlProblem p = make_gate_problem(build_spin_system(spec), standard_gate("hadamard"));
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  RealMatrix a(2, 5);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng);
  const ControlSequence seq(std::vector<double>(5, 0.1), a);

  std::vector<ComplexMatrix> us;
  for (std::size_t n = 0; n < 5; ++n) {
    us.push_back(oracle::taylor_exp(segment_hamiltonian(p.system, seq, n), 0.1));
  }
  ComplexMatrix total = ComplexMatrix::Identity(2, 2);
  for (const auto& u1 : us) total = u1 * total;
  const ComplexMatrix uf = p.gate().unitary;
  const Complex overlap = oracle::loop_inner(uf, total);

  // last segment: empty back product
  CHECK((krotov_multiplier(p, seq, 4, 1.0) - uf * overlap).norm() < 1e-12);
  for (std::size_t n = 0; n < 5; ++n) {
    ComplexMatrix back = ComplexMatrix::Identity(2, 2);
    for (std::size_t k = n + 1; k < 5; ++k) back = us[k] * back;
    CHECK((krotov_multiplier(p, seq, n, 1.0) - back.adjoint() * uf * overlap).norm() < 1e-12);
  }

  // exact realization: B_n = U_{n+1:N}^dagger U_F d with d = <U_F|U_F>
  const ControlProblem exact = make_gate_problem(p.system, total);
  ComplexMatrix back = us[4] * us[3];
  CHECK((krotov_multiplier(exact, seq, 2, 1.0) - back.adjoint() * total * Complex(2.0, 0.0)).norm() < 1e-11);
}

TEST_CASE("zero mixing leaves the sequence unchanged") {
  const ControlProblem p = transfer_problem();
  KrotovConfig cfg;
  cfg.shape = {10, 1.0, 0.1};
  cfg.delta = 0.0;
  cfg.eta = 0.0;
  Rng rng(1);
  const ControlSequence start = random_initial_sequence(p.system, cfg.shape, rng);
  const auto r = krotov_run(p, cfg, {5, 0.999, 1}, start);
  CHECK(r.sequence == start);
}

TEST_CASE("state transfer converges monotonically") {
  KrotovConfig cfg;
  cfg.shape = {10, 1.0, 0.1};
  const auto r = krotov_run(transfer_problem(), cfg, {2000, 0.999, 2});
  check_monotone(r);
  CHECK(r.final_fidelity >= 0.999);
}

TEST_CASE("Hadamard gate converges monotonically") {
  SpinSystemSpec spec;
  spec.detunings_hz = {0.5};
  const ControlProblem p = make_gate_problem(build_spin_system(spec), standard_gate("hadamard"));
  KrotovConfig cfg;
  cfg.shape = {20, 1.0, 0.1};
  const auto r = krotov_run(p, cfg, {2000, 0.99, 3});
  check_monotone(r);
  CHECK(r.final_fidelity >= 0.99);
}

TEST_CASE("Krotov capability checks") {
  const ComplexVector k0 = basis_ket("0"), k1 = basis_ket("1");
  const ControlProblem p =
      make_state_problem(build_spin_system({}), k0 * k0.adjoint(), k1 * k1.adjoint(), StateFidelity::uhlmann);
  CHECK_THROWS_AS(krotov_run(p, {}, {10, 0.99, 0}), CapabilityError);
}
