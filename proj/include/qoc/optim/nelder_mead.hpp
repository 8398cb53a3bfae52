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
#include <functional>

#include "qoc/linalg.hpp"

namespace qoc {

struct NelderMeadConfig {
  double x_tolerance = 1e-8;   // simplex diameter (max-norm) at convergence
  double f_tolerance = 1e-10;  // spread of vertex values at convergence
  std::size_t max_evaluations = 20000;
  // Per-coordinate offsets for the initial simplex. Empty: 5% of each
  // coordinate, or 2.5e-4 for zero coordinates.
  RealVector initial_step;
};

struct NelderMeadResult {
  RealVector x;
  double f = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool stopped_by_callback = false;
};

/// Called once per simplex iteration with the best value so far; returning
/// false stops the search.
using NelderMeadCallback = std::function<bool(std::size_t iteration, double best)>;

/// Reflect/expand/contract/shrink simplex search (coefficients 1, 2, 1/2,
/// 1/2). Deterministic for a given start and config. Throws NonFiniteError
/// when the objective returns NaN or inf.
NelderMeadResult nelder_mead_minimize(const std::function<double(const RealVector&)>& objective,
                                      const RealVector& x0, const NelderMeadConfig& config,
                                      const NelderMeadCallback& on_iteration = {});

}  // namespace qoc
