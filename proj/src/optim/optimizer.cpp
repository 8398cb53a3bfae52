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

#include "qoc/optim/optimizer.hpp"

namespace qoc {
namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

}  // namespace

std::string_view algorithm_name(const AlgorithmConfig& config) {
  return std::visit(Overloaded{
                        [](const GrapeConfig&) { return std::string_view("grape"); },
                        [](const KrotovConfig&) { return std::string_view("krotov"); },
                        [](const AnnealingConfig&) { return std::string_view("sa"); },
                        [](const SagrapeConfig&) { return std::string_view("sagrape"); },
                        [](const CrabConfig&) { return std::string_view("crab"); },
                        [](const GoatConfig&) { return std::string_view("goat"); },
                        [](const SmpConfig&) { return std::string_view("smp"); },
                        [](const LyapunovConfig&) { return std::string_view("lyapunov"); },
                        [](const AdiabaticConfig&) { return std::string_view("adiabatic"); },
                    },
                    config);
}

OptimizationResult optimize(const ControlProblem& problem, const OptimizerConfig& config) {
  const RunSettings& run = config.run;
  return std::visit(
      Overloaded{
          [&](const GrapeConfig& c) { return grape_run(problem, c, run); },
          [&](const KrotovConfig& c) { return krotov_run(problem, c, run); },
          [&](const AnnealingConfig& c) { return sa_run(problem, c, run); },
          [&](const SagrapeConfig& c) { return sagrape_run(problem, c, run); },
          [&](const CrabConfig& c) { return crab_run(problem, c, run); },
          [&](const GoatConfig& c) { return goat_run(problem, c, run); },
          [&](const SmpConfig& c) { return smp_run(problem, c, run); },
          [&](const LyapunovConfig& c) { return lyapunov_run(problem, c, run); },
          [&](const AdiabaticConfig& c) { return adiabatic_run(problem, c, run); },
      },
      config.algorithm);
}

}  // namespace qoc
