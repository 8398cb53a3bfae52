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

#include "qoc/optim/common.hpp"

#include "qoc/error.hpp"

namespace qoc {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::goal_reached:
      return "goal-reached";
    case Termination::max_iterations:
      return "max-iter";
    case Termination::stalled:
      return "stalled";
  }
  return "unknown";
}

ControlSequence random_initial_sequence(const ControlSystem& system, const SequenceShape& shape,
                                        Rng& rng) {
  if (shape.segments == 0) throw ValidationError("segments must be >= 1");
  if (!(shape.total_time > 0.0)) throw ValidationError("total_time must be > 0");
  ControlSequence seq =
      ControlSequence::uniform(shape.segments, system.channel_count(), shape.total_time);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t n = 0; n < shape.segments; ++n) {
    for (std::size_t m = 0; m < system.channel_count(); ++m) {
      const double limit = shape.initial_fraction * system.channels()[m].max_amplitude;
      seq.set_amplitude(m, n, limit * unit(rng));
    }
  }
  return seq;
}

void finalize_result(const ControlProblem& problem, const ControlSequence& best,
                     OptimizationResult& result) {
  const EnsemblePerformance perf = ensemble_performance(problem, best);
  result.sequence = best;
  result.final_fidelity = perf.mean;
  result.final_objective = perf.mean - penalty_value(problem.system, best, problem.penalty);
  result.per_bin_profile = perf.per_bin;
  result.iterations_used = result.fidelity_trace.size();
}

}  // namespace qoc
