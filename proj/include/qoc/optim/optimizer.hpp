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

#include <string_view>
#include <variant>

#include "qoc/optim/adiabatic.hpp"
#include "qoc/optim/annealing.hpp"
#include "qoc/optim/common.hpp"
#include "qoc/optim/crab.hpp"
#include "qoc/optim/goat.hpp"
#include "qoc/optim/grape.hpp"
#include "qoc/optim/krotov.hpp"
#include "qoc/optim/lyapunov.hpp"
#include "qoc/optim/sagrape.hpp"
#include "qoc/optim/smp.hpp"

namespace qoc {

using AlgorithmConfig = std::variant<GrapeConfig, KrotovConfig, AnnealingConfig, SagrapeConfig,
                                     CrabConfig, GoatConfig, SmpConfig, LyapunovConfig,
                                     AdiabaticConfig>;

struct OptimizerConfig {
  AlgorithmConfig algorithm;
  RunSettings run;
  bool operator==(const OptimizerConfig&) const = default;
};

/// "grape", "krotov", "sa", "sagrape", "crab", "goat", "smp", "lyapunov" or
/// "adiabatic".
std::string_view algorithm_name(const AlgorithmConfig& config);

OptimizationResult optimize(const ControlProblem& problem, const OptimizerConfig& config);

}  // namespace qoc
