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

#include "qoc/io/runner.hpp"

#include <fstream>
#include <ostream>

#include "qoc/error.hpp"
#include "qoc/fidelity.hpp"
#include "qoc/io/pulse_file.hpp"
#include "qoc/optim/optimizer.hpp"

namespace qoc::io {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  f.close();
  if (!f) throw Error("cannot write " + path.string());
}

void print_warnings(const LoadedProblem& loaded, std::ostream& err) {
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
}

}  // namespace

int exit_code(Termination t) {
  switch (t) {
    case Termination::goal_reached:
      return kExitGoal;
    case Termination::max_iterations:
      return kExitMaxIterations;
    case Termination::stalled:
      return kExitStalled;
  }
  return kExitError;
}

void apply_overrides(LoadedProblem& loaded, const RunOverrides& overrides) {
  if (overrides.seed) {
    loaded.optimizer.run.seed = *overrides.seed;
    loaded.resolved["seed"] = *overrides.seed;
  }
  if (overrides.max_iterations) {
    loaded.optimizer.run.max_iterations = *overrides.max_iterations;
    loaded.resolved["optimizer"]["max_iterations"] = *overrides.max_iterations;
  }
}

std::vector<std::string> channel_labels(const ControlSystem& system) {
  std::vector<std::string> labels;
  for (std::size_t m = 0; m < system.channel_count(); ++m) {
    const std::string& l = system.channels()[m].label;
    labels.push_back(l.empty() ? "c" + std::to_string(m + 1) : l);
  }
  return labels;
}

std::string trace_csv(const OptimizationResult& result) {
  std::string out = "iteration,objective,fidelity\n";
  for (std::size_t k = 0; k < result.fidelity_trace.size(); ++k) {
    out += std::to_string(k) + "," + format_number(result.objective_trace.at(k)) + "," +
           format_number(result.fidelity_trace[k]) + "\n";
  }
  return out;
}

std::string profile_csv(const ControlProblem& problem, const OptimizationResult& result) {
  std::string out = "scale,probability,fidelity\n";
  const auto& bins = problem.ensemble.bins();
  for (std::size_t l = 0; l < bins.size(); ++l) {
    out += format_number(bins[l].scale) + "," + format_number(bins[l].probability) + "," +
           format_number(result.per_bin_profile.at(l)) + "\n";
  }
  return out;
}

nlohmann::json run_manifest(const LoadedProblem& loaded, const OptimizationResult& result) {
  nlohmann::json m;
  m["seed"] = loaded.optimizer.run.seed;
  m["algorithm"] = std::string(algorithm_name(loaded.optimizer.algorithm));
  m["termination"] = std::string(to_string(result.termination));
  m["exit_code"] = exit_code(result.termination);
  m["final_fidelity"] = result.final_fidelity;
  m["final_objective"] = result.final_objective;
  m["iterations_used"] = result.iterations_used;
  m["segments"] = result.sequence.segment_count();
  m["wall_time_seconds"] = result.wall_time_seconds;
  m["warnings"] = loaded.warnings;
  m["config"] = loaded.resolved;
  return m;
}

int run_command(const std::filesystem::path& problem_path, const std::filesystem::path& out_dir,
                const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    LoadedProblem loaded = load_problem_file(problem_path);
    apply_overrides(loaded, overrides);
    print_warnings(loaded, err);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
      throw Error("cannot create output directory " + out_dir.string());
    }
    // Fail before optimizing if the directory is not writable.
    write_text(out_dir / "manifest.json", "{}\n");

    const OptimizationResult result = optimize(loaded.problem, loaded.optimizer);

    PulseFile pulse{channel_labels(loaded.problem.system), result.sequence, result.final_fidelity};
    write_pulse_file(out_dir / "pulse.csv", pulse);
    write_text(out_dir / "trace.csv", trace_csv(result));
    write_text(out_dir / "profile.csv", profile_csv(loaded.problem, result));
    write_text(out_dir / "manifest.json", run_manifest(loaded, result).dump(2) + "\n");

    out << "algorithm: " << algorithm_name(loaded.optimizer.algorithm) << "\n"
        << "termination: " << to_string(result.termination) << "\n"
        << "iterations: " << result.iterations_used << "\n"
        << "fidelity: " << format_number(result.final_fidelity) << "\n"
        << "objective: " << format_number(result.final_objective) << "\n"
        << "wall time: " << result.wall_time_seconds << " s\n"
        << "output: " << out_dir.string() << "\n";
    return exit_code(result.termination);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int evaluate_command(const std::filesystem::path& pulse_path, const std::filesystem::path& problem_path,
                     std::ostream& out, std::ostream& err) {
  try {
    const LoadedProblem loaded = load_problem_file(problem_path);
    const PulseFile pulse = read_pulse_file(pulse_path);
    const ControlProblem& problem = loaded.problem;
    const auto labels = channel_labels(problem.system);
    if (pulse.labels.size() != labels.size()) {
      throw DimensionError("pulse has " + std::to_string(pulse.labels.size()) + " channels, system has " +
                           std::to_string(labels.size()));
    }
    for (std::size_t m = 0; m < labels.size(); ++m) {
      if (pulse.labels[m] != labels[m]) {
        throw DimensionError("pulse channel \"" + pulse.labels[m] + "\" does not match system channel \"" +
                             labels[m] + "\"");
      }
    }
    check_compatible(problem.system, pulse.sequence);

    const EnsemblePerformance perf = ensemble_performance(problem, pulse.sequence);
    const double pen = penalty_value(problem.system, pulse.sequence, problem.penalty);
    out << "fidelity: " << format_number(perf.mean) << "\n";
    for (std::size_t l = 0; l < perf.per_bin.size(); ++l) {
      const auto& bin = problem.ensemble.bins()[l];
      out << "bin " << l + 1 << " scale " << format_number(bin.scale) << " probability "
          << format_number(bin.probability) << " fidelity " << format_number(perf.per_bin[l]) << "\n";
    }
    out << "penalty: " << format_number(pen) << "\n";
    if (pulse.fidelity) out << "recorded fidelity: " << format_number(*pulse.fidelity) << "\n";
    return kExitGoal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int validate_command(const std::filesystem::path& problem_path, std::ostream& out, std::ostream& err) {
  try {
    const LoadedProblem loaded = load_problem_file(problem_path);
    print_warnings(loaded, err);
    out << serialize_problem(loaded.resolved);
    return kExitGoal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace qoc::io
