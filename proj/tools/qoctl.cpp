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

#include <CLI11.hpp>
#include <iostream>

#include "qoc/io/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qoctl: piecewise-constant quantum control pulse design"};
  app.require_subcommand(1);

  std::string problem;
  std::string out_dir;
  std::string pulse;
  std::uint64_t seed = 0;
  std::size_t max_iter = 0;

  auto* run = app.add_subcommand("run", "optimize a problem file and write results");
  run->add_option("problem", problem, "problem file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the problem seed");
  auto* iter_opt = run->add_option("--max-iter", max_iter, "override optimizer.max_iterations");

  auto* evaluate = app.add_subcommand("evaluate", "report the fidelity of a pulse file");
  evaluate->add_option("pulse", pulse, "pulse file (CSV)")->required();
  evaluate->add_option("problem", problem, "problem file (JSON)")->required();

  auto* validate = app.add_subcommand("validate", "check a problem file and print it with defaults");
  validate->add_option("problem", problem, "problem file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qoc::io::kExitError;
  }

  if (run->parsed()) {
    qoc::io::RunOverrides o;
    if (seed_opt->count() > 0) o.seed = seed;
    if (iter_opt->count() > 0) o.max_iterations = max_iter;
    return qoc::io::run_command(problem, out_dir, o, std::cout, std::cerr);
  }
  if (evaluate->parsed()) return qoc::io::evaluate_command(pulse, problem, std::cout, std::cerr);
  return qoc::io::validate_command(problem, std::cout, std::cerr);
}
