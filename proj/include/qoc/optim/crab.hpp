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
#include <vector>

#include "qoc/optim/common.hpp"
#include "qoc/optim/nelder_mead.hpp"

namespace qoc {

// One channel's chopped-random-basis waveform. K = alpha.size().
struct CrabChannel {
  double mean = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> r;  // frequency randomization, in [-0.5, 0.5]
};

/// mean + sum_k alpha_k cos(phi_k) + beta_k sin(phi_k), with
/// phi_k = 2 pi k t (1 + r_k) / T (k = 1..K).
double crab_waveform(const CrabChannel& params, double total_time, double t);

/// Midpoint samples of every channel's waveform on `segments` equal slices.
ControlSequence crab_discretize(const std::vector<CrabChannel>& channels, double total_time,
                                std::size_t segments);

struct CrabConfig {
  std::size_t harmonics = 3;  // K
  std::size_t discretize_segments = 200;
  double total_time = 1.0;
  // Initial simplex offset as a fraction of each channel's max_amplitude.
  double initial_step = 0.1;
  std::size_t max_evaluations = 200000;
  bool operator==(const CrabConfig&) const = default;
};

/// Draws r once from the seed, then Nelder-Mead over (mean, alpha, beta)
/// of every channel on the negated penalized objective. One iteration is
/// one simplex iteration.
OptimizationResult crab_run(const ControlProblem& problem, const CrabConfig& config,
                            const RunSettings& settings);

}  // namespace qoc
