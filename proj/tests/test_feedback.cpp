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

#include <cmath>
#include <numbers>

#include "qoc/error.hpp"
#include "qoc/optim/adiabatic.hpp"
#include "qoc/optim/lyapunov.hpp"
#include "qoc/systems.hpp"

using namespace qoc;

namespace {
constexpr double kPi = std::numbers::pi;

ComplexVector plus_ket() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

ControlProblem y_transfer(const ComplexVector& from, const ComplexVector& to) {
  SpinSystemSpec spec;
  spec.axes = {"y"};
  return make_state_problem(build_spin_system(spec), from * from.adjoint(), to * to.adjoint(), StateFidelity::uhlmann);
}
}  // namespace

TEST_CASE("Lyapunov function") {
  const ComplexVector k0 = basis_ket("0");
  CHECK(lyapunov_v(QuantumState::pure(k0), k0) == doctest::Approx(0.0));
  CHECK(lyapunov_v(QuantumState::pure(basis_ket("1")), k0) == doctest::Approx(1.0));
  CHECK(lyapunov_v(QuantumState::density(ComplexMatrix::Identity(2, 2) / 2.0), k0) == doctest::Approx(0.5));
}

TEST_CASE("Lyapunov control law") {
  const ComplexVector k0 = basis_ket("0");
  const ControlSystem sys(ComplexMatrix::Zero(2, 2), {{pauli::y() / 2.0, 5.0, "y"}});
  CHECK(lyapunov_control_law(sys, k0 * k0.adjoint(), k0).norm() == 0.0);

  const ComplexMatrix rho = plus_ket() * plus_ket().adjoint();
  CHECK(lyapunov_gradient(sys, rho, k0)(0) == doctest::Approx(0.5));
  CHECK(lyapunov_control_law(sys, rho, k0)(0) == doctest::Approx(-5.0));

  const ControlSystem flipped(ComplexMatrix::Zero(2, 2), {{-pauli::y() / 2.0, 5.0, "y"}});
  CHECK(lyapunov_gradient(flipped, rho, k0)(0) == doctest::Approx(-0.5));
  CHECK(lyapunov_control_law(flipped, rho, k0)(0) == doctest::Approx(5.0));

  const ControlSystem tilted(pauli::x(), {{pauli::y() / 2.0, 5.0, "y"}});
  CHECK_THROWS_AS(lyapunov_control_law(tilted, rho, k0), ApplicabilityError);
}

TEST_CASE("Lyapunov transfers") {
  const ComplexVector k0 = basis_ket("0");
  const auto at_target = lyapunov_run(y_transfer(k0, k0), {}, {100000, 0.999, 0});
  CHECK(at_target.termination == Termination::goal_reached);
  CHECK(at_target.iterations_used == 1);

  const auto r = lyapunov_run(y_transfer(plus_ket(), k0), {}, {100000, 0.99, 0});
  CHECK(r.final_fidelity >= 0.99);
  for (std::size_t k = 1; k < r.fidelity_trace.size(); ++k) {
    CHECK(r.fidelity_trace[k] >= r.fidelity_trace[k - 1] - 2e-2 * 1e-3 * 2.0 * kPi * 10.0);
  }

  // |1> is a critical point of the law: nothing moves without a kick.
  LyapunovConfig no_kick;
  no_kick.kick = 0.0;
  const auto stuck = lyapunov_run(y_transfer(basis_ket("1"), k0), no_kick, {100000, 0.99, 0});
  CHECK(stuck.termination == Termination::stalled);
  CHECK(stuck.final_fidelity < 0.01);
  const auto kicked = lyapunov_run(y_transfer(basis_ket("1"), k0), {}, {100000, 0.99, 0});
  CHECK(kicked.final_fidelity >= 0.99);
}

TEST_CASE("sweep profile") {
  AdiabaticConfig cfg;
  CHECK(sweep_frequency(cfg, 0.0) == doctest::Approx(cfg.nu_start_hz));
  CHECK(sweep_frequency(cfg, cfg.total_time) == doctest::Approx(cfg.nu_end_hz));
  cfg.profile = SweepProfile::tanh;
  CHECK(sweep_frequency(cfg, 0.0) == doctest::Approx(cfg.nu_start_hz));
  CHECK(sweep_frequency(cfg, cfg.total_time) == doctest::Approx(cfg.nu_end_hz));

  AdiabaticConfig one;
  one.segments = 1;
  const ControlSequence s = adiabatic_sweep(one);
  REQUIRE(s.segment_count() == 1);
  CHECK(s.amplitude(0, 0) == doctest::Approx(2.0 * kPi * sweep_frequency(one, one.total_time / 2.0)));

  AdiabaticConfig bad;
  bad.detunings_hz = {25.0};
  CHECK_THROWS_AS(adiabatic_sweep(bad), ValidationError);
  AdiabaticConfig near;
  near.detunings_hz = {-19.5};
  CHECK(!adiabatic_warnings(near).empty());
  CHECK(adiabatic_warnings(AdiabaticConfig{}).empty());
}

TEST_CASE("adiabatic inversion tolerates drive miscalibration") {
  const AdiabaticConfig cfg;
  const ControlSequence seq = adiabatic_sweep(cfg);
  const ComplexVector k0 = basis_ket("0"), k1 = basis_ket("1");
  const ControlProblem p =
      make_state_problem(adiabatic_system(cfg), k0 * k0.adjoint(), k1 * k1.adjoint(), StateFidelity::uhlmann);
  for (double scale : {0.8, 1.0, 1.2}) {
    RealMatrix a = seq.amplitudes();
    a.row(1) *= scale;
    CHECK(ensemble_performance(p, ControlSequence(seq.durations(), a)).mean >= 0.99);
  }
  const auto r = adiabatic_run(p, cfg, {1, 0.99, 0});
  CHECK(r.termination == Termination::goal_reached);
  CHECK(r.fidelity_trace.size() == 1);
}
