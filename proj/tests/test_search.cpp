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

#include "qoc/error.hpp"
#include "qoc/optim/annealing.hpp"
#include "qoc/optim/grape.hpp"
#include "qoc/optim/nelder_mead.hpp"
#include "qoc/optim/sagrape.hpp"
#include "qoc/systems.hpp"

using namespace qoc;

TEST_CASE("Nelder-Mead on smooth functions") {
  RealVector x0(2);
  x0 << 1.0, 1.0;
  auto bowl = nelder_mead_minimize([](const RealVector& x) { return x.squaredNorm(); }, x0, {});
  CHECK(bowl.f < 1e-8);

  auto quad = nelder_mead_minimize(
      [](const RealVector& x) { return std::pow(x(0) - 3.0, 2) + 10.0 * std::pow(x(1) + 2.0, 2); }, x0, {});
  CHECK(quad.x(0) == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(quad.x(1) == doctest::Approx(-2.0).epsilon(1e-4));

  RealVector r0(2);
  r0 << -1.2, 1.0;
  auto rosen = nelder_mead_minimize(
      [](const RealVector& x) { return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2); }, r0, {});
  CHECK(rosen.f < 1e-6);
  CHECK(rosen.x(0) == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_AS(nelder_mead_minimize([](const RealVector&) { return std::nan(""); }, x0, {}), NonFiniteError);
}

TEST_CASE("annealing threshold") {
  CHECK(sa_threshold(1.0, 0.0) == 1.0);
  CHECK(sa_threshold(2.0, -1.0) == 1.0);
  CHECK(sa_threshold(0.1, 0.5) == doctest::Approx(6.7379e-4).epsilon(1e-4));
  CHECK_THROWS_AS(sa_threshold(0.0, 1.0), ValidationError);
}

TEST_CASE("improving moves are always kept near zero temperature") {
  Rng rng(1);
  RealVector x0(1), s(1);
  x0 << 3.0;
  s << 0.5;
  std::vector<double> seen;
  Annealer a([](const RealVector& x) { return -x(0) * x(0); }, x0, s, 1e-300, 0.9, 200, rng);
  a.run_block();
  CHECK(a.current_value() > -9.0);
  CHECK(a.best_value() == a.current_value());
}

namespace {
// Narrow local peak at -1 (0.6) and broad global peak at 1.5 (1.0).
double trap(const RealVector& x) {
  const double v = x(0);
  return 0.6 * std::exp(-(v + 1.0) * (v + 1.0) / 0.5) + std::exp(-(v - 1.5) * (v - 1.5) / 2.0);
}

// Minimum between the peaks by exhaustive grid.
double trap_valley() {
  double best = 1e9, at = 0.0;
  for (int i = 0; i <= 25000; ++i) {
    RealVector p(1);
    p << -1.0 + 1e-4 * i;
    if (trap(p) < best) {
      best = trap(p);
      at = p(0);
    }
  }
  return at;
}

int trap_escapes(double t0) {
  const double valley = trap_valley();
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    RealVector x0(1), s(1);
    x0 << -1.0;
    s << 0.3;
    Annealer a(trap, x0, s, t0, 0.97, 50, rng);
    for (int b = 0; b < 200; ++b) a.run_block();
    if (a.best()(0) > valley) ++ok;
  }
  return ok;
}
}  // namespace

TEST_CASE("annealing escapes a one-dimensional trap") {
  CHECK(trap_valley() == doctest::Approx(-0.1116).epsilon(1e-3));
  CHECK(trap_escapes(0.3) >= 95);
  CHECK(trap_escapes(1e-12) <= 5);
}

TEST_CASE("annealing on a Hadamard gate") {
  SpinSystemSpec spec;
  spec.detunings_hz = {0.5};
  const ControlProblem p = make_gate_problem(build_spin_system(spec), standard_gate("hadamard"));
  AnnealingConfig cfg;
  cfg.shape = {10, 1.0, 0.1};
  const auto r = sa_run(p, cfg, {2000, 0.99, 4});
  CHECK(r.final_fidelity >= 0.99);
  CHECK(r.termination == Termination::goal_reached);
  for (std::size_t k = 1; k < r.fidelity_trace.size(); ++k) {
    CHECK(r.objective_trace[k] >= r.objective_trace[k - 1]);
  }
}

namespace {
ControlProblem trap_gate() {
  SpinSystemSpec spec;
  spec.detunings_hz = {1.0};
  spec.axes = {"x"};
  spec.max_amplitude_hz = 5.0;
  return make_gate_problem(build_spin_system(spec), standard_gate("hadamard"));
}

SagrapeConfig trap_config() {
  SagrapeConfig c;
  c.grape.shape = {3, 1.0, 0.5};
  c.grape.mode = GrapeMode::quasi_newton;
  c.sa.shape = c.grape.shape;
  c.sa.initial_temperature = 0.05;
  return c;
}
}  // namespace

TEST_CASE("hybrid schedule degenerates to its components") {
  SpinSystemSpec spec;
  spec.detunings_hz = {0.5};
  const ControlProblem p = make_gate_problem(build_spin_system(spec), standard_gate("hadamard"));
  SagrapeConfig c;
  c.grape.shape = {10, 1.0, 0.1};
  c.sa.shape = c.grape.shape;
  const RunSettings run{60, 0.9999, 8};

  c.sa_blocks_per_cycle = 0;
  const auto only_grape = sagrape_run(p, c, run);
  const auto grape = grape_run(p, c.grape, run);
  CHECK(only_grape.fidelity_trace == grape.fidelity_trace);
  CHECK(only_grape.sequence == grape.sequence);

  c.sa_blocks_per_cycle = 5;
  c.grape_iterations_per_cycle = 0;
  const auto only_sa = sagrape_run(p, c, run);
  const auto sa = sa_run(p, c.sa, run);
  CHECK(only_sa.fidelity_trace == sa.fidelity_trace);
  CHECK(only_sa.sequence == sa.sequence);

  c.sa_blocks_per_cycle = 0;
  CHECK_THROWS_AS(sagrape_run(p, c, run), ValidationError);
}

TEST_CASE("hybrid schedule leaves a gradient trap") {
  const ControlProblem p = trap_gate();
  const SagrapeConfig c = trap_config();
  const RunSettings run{2000, 0.99, 1};
  const auto plain = grape_run(p, c.grape, run);
  const auto hybrid = sagrape_run(p, c, run);
  CHECK(plain.final_fidelity < 0.9);
  CHECK(hybrid.final_fidelity > 0.99);
}
