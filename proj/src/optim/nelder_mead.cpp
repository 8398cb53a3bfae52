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

#include "qoc/optim/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qoc/error.hpp"

namespace qoc {

NelderMeadResult nelder_mead_minimize(const std::function<double(const RealVector&)>& objective,
                                      const RealVector& x0, const NelderMeadConfig& config,
                                      const NelderMeadCallback& on_iteration) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty parameter vector");
  if (config.initial_step.size() != 0 && config.initial_step.size() != n) {
    throw DimensionError("nelder_mead: initial_step size mismatch");
  }

  NelderMeadResult result;
  auto eval = [&](const RealVector& x) {
    const double f = objective(x);
    ++result.evaluations;
    if (!std::isfinite(f)) {
      std::ostringstream os;
      os << "nelder_mead: objective returned " << f << " at evaluation " << result.evaluations;
      throw NonFiniteError(os.str());
    }
    return f;
  };

  std::vector<RealVector> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  values[0] = eval(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double step;
    if (config.initial_step.size() == n) {
      step = config.initial_step(i);
    } else {
      step = x0(i) != 0.0 ? 0.05 * x0(i) : 0.00025;
    }
    simplex[static_cast<std::size_t>(i + 1)](i) += step;
    values[static_cast<std::size_t>(i + 1)] = eval(simplex[static_cast<std::size_t>(i + 1)]);
  }

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<RealVector> s2;
    std::vector<double> v2;
    s2.reserve(order.size());
    v2.reserve(order.size());
    for (std::size_t k : order) {
      s2.push_back(std::move(simplex[k]));
      v2.push_back(values[k]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  sort_simplex();

  const std::size_t worst = static_cast<std::size_t>(n);
  while (result.evaluations < config.max_evaluations) {
    double f_spread = 0.0;
    double x_spread = 0.0;
    for (std::size_t k = 1; k <= worst; ++k) {
      f_spread = std::max(f_spread, std::abs(values[k] - values[0]));
      x_spread = std::max(x_spread, (simplex[k] - simplex[0]).cwiseAbs().maxCoeff());
    }
    if (f_spread <= config.f_tolerance && x_spread <= config.x_tolerance) {
      result.converged = true;
      break;
    }

    RealVector centroid = RealVector::Zero(n);
    for (std::size_t k = 0; k < worst; ++k) centroid += simplex[k];
    centroid /= static_cast<double>(n);

    const RealVector reflected = centroid + (centroid - simplex[worst]);
    const double f_r = eval(reflected);
    if (f_r < values[0]) {
      const RealVector expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_e = eval(expanded);
      if (f_e < f_r) {
        simplex[worst] = expanded;
        values[worst] = f_e;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_r;
      }
    } else if (f_r < values[worst - 1]) {
      simplex[worst] = reflected;
      values[worst] = f_r;
    } else {
      bool shrink = false;
      if (f_r < values[worst]) {
        const RealVector outside = centroid + 0.5 * (reflected - centroid);
        const double f_c = eval(outside);
        if (f_c <= f_r) {
          simplex[worst] = outside;
          values[worst] = f_c;
        } else {
          shrink = true;
        }
      } else {
        const RealVector inside = centroid + 0.5 * (simplex[worst] - centroid);
        const double f_cc = eval(inside);
        if (f_cc < values[worst]) {
          simplex[worst] = inside;
          values[worst] = f_cc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t k = 1; k <= worst; ++k) {
          simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
          values[k] = eval(simplex[k]);
        }
      }
    }
    sort_simplex();
    ++result.iterations;
    if (on_iteration && !on_iteration(result.iterations, values[0])) {
      result.stopped_by_callback = true;
      break;
    }
  }

  result.x = simplex[0];
  result.f = values[0];
  return result;
}

}  // namespace qoc
