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

#include "qoc/optim/common.hpp"

namespace qoc {

// Split-and-search: stage k optimizes 2^(k-1) segments, each carrying its
// own duration and amplitudes, then every segment is halved to seed the
// next stage.
struct SmpConfig {
  double initial_duration = 1.0;
  std::size_t max_segments = 8;
  std::size_t stage_evaluations = 4000;  // simplex budget per search
  std::size_t restarts = 2;              // jittered searches after the first
  double min_duration = 1e-6;            // durations are max(|x|, min_duration)
  bool operator==(const SmpConfig&) const = default;
};

/// One iteration is one simplex iteration; the trace is the best so far.
OptimizationResult smp_run(const ControlProblem& problem, const SmpConfig& config,
                           const RunSettings& settings);

}  // namespace qoc
