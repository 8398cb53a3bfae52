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

namespace qoc::detail {

struct OdeTolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;  // 0: no cap
};

using OdeRhs = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;

/// Dormand-Prince 5(4) with an RMS error norm over real and imaginary
/// parts. Integrates from t0 to t1 in place. Throws IntegrationError when the
/// step size underflows 1e-14 * (t1 - t0).
void integrate_dopri5(const OdeRhs& rhs, double t0, double t1, ComplexVector& y,
                      const OdeTolerances& tol);

}  // namespace qoc::detail
