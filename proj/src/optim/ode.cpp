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

#include "optim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qoc/error.hpp"

namespace qoc::detail {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double rms_error(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                 const OdeTolerances& tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sr = tol.atol + tol.rtol * std::max(std::abs(y0(i).real()), std::abs(y1(i).real()));
    const double si = tol.atol + tol.rtol * std::max(std::abs(y0(i).imag()), std::abs(y1(i).imag()));
    sum += std::pow(err(i).real() / sr, 2) + std::pow(err(i).imag() / si, 2);
  }
  return std::sqrt(sum / (2.0 * static_cast<double>(err.size())));
}

}  // namespace

void integrate_dopri5(const OdeRhs& rhs, double t0, double t1, ComplexVector& y,
                      const OdeTolerances& tol) {
  const double span = t1 - t0;
  if (!(span > 0.0)) throw ValidationError("ode: integration interval must be positive");
  const double h_min = 1e-14 * span;
  const double h_max = tol.max_step > 0.0 ? tol.max_step : span;
  double h = std::min(h_max, span * 1e-3);
  double t = t0;

  const Eigen::Index n = y.size();
  ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);
  rhs(t, y, k1);
  while (t1 - t > h_min) {
    if (t + h > t1) h = t1 - t;
    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y_new, k7);
    const ComplexVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double norm = rms_error(err, y, y_new, tol);
    if (!std::isfinite(norm)) throw IntegrationError("ode: non-finite error estimate");
    if (norm <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;  // first-same-as-last
      const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      h = std::min(h * grow, h_max);
    } else {
      h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
      if (h < h_min) {
        std::ostringstream os;
        os << "ode: step size underflow at t = " << t;
        throw IntegrationError(os.str());
      }
    }
  }
}

}  // namespace qoc::detail
