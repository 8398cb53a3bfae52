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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qoc/error.hpp"
#include "qoc/io/problem_file.hpp"
#include "qoc/io/pulse_file.hpp"
#include "qoc/io/runner.hpp"
#include "qoc/optim/grape.hpp"
#include "qoc/optim/optimizer.hpp"

using namespace qoc;
using namespace qoc::io;
namespace fs = std::filesystem;

namespace {

const fs::path kData = QOC_TEST_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qoc_io_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(const std::string& text) {
  try {
    load_problem_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "system": {},
  "target": {"kind": "gate", "gate": "hadamard"},
  "optimizer": {"algorithm": "grape"}
})";

}  // namespace

TEST_CASE("golden problem loads with documented defaults") {
  const LoadedProblem lp = load_problem_file(kData / "hadamard_grape.json");
  CHECK(lp.problem.is_gate());
  CHECK(lp.problem.system.channel_count() == 2);
  CHECK(lp.optimizer.run.seed == 7);
  const auto& g = std::get<GrapeConfig>(lp.optimizer.algorithm);
  CHECK(g.shape.segments == 20);
  CHECK(g.step == GrapeConfig{}.step);
  CHECK(g.mode == GrapeMode::first_order);
  CHECK(lp.problem.ensemble.size() == 1);
  CHECK(lp.problem.penalty == PenaltyConfig{});
  CHECK(lp.resolved["optimizer"]["stall_window"] == 200);
}

TEST_CASE("defaults-resolved documents are a fixed point") {
  for (const char* text : {kMinimal,
                           R"({"system": {"kind": "raw", "h_system": {"re": [[0.5, 0], [0, -0.5]]},
                               "channels": [{"operator": {"re": [[0, 0.5], [0.5, 0]]}, "max_amplitude": 20}]},
                               "target": {"kind": "state", "initial": {"basis": "0"},
                                          "target": {"vector": {"re": [0, 0], "im": [0, 1]}}},
                               "ensemble": {"kind": "triangular", "half_width": 0.1, "bins": 3},
                               "optimizer": {"algorithm": "sagrape", "sa": {"cooling": 0.9}}, "seed": 3})",
                           R"({"system": {"kind": "sweep", "detunings_hz": [-5, 0, 5]},
                               "target": {"kind": "state", "initial": {"basis": "000"}, "target": {"basis": "111"}},
                               "optimizer": {"algorithm": "adiabatic", "profile": "tanh"}})"}) {
    const LoadedProblem a = load_problem_text(text);
    const std::string once = serialize_problem(a.resolved);
    const LoadedProblem b = load_problem_text(once);
    CHECK(serialize_problem(b.resolved) == once);
    CHECK(a.resolved == b.resolved);
    CHECK(a.optimizer == b.optimizer);
    CHECK(a.problem.system.h_system() == b.problem.system.h_system());
    CHECK(a.problem.ensemble == b.problem.ensemble);
  }
}

TEST_CASE("schema errors name the key") {
  CHECK(error_of(R"({"system": {}, "target": {"kind": "gate", "gate": "hadamard"},
                     "ensemble": {"kind": "explicit", "bins": [{"scale": 1, "probability": 0.5},
                                                              {"scale": 0.9, "probability": 0.4}]},
                     "optimizer": {"algorithm": "grape"}})")
            .find("ensemble.bins") != std::string::npos);
  CHECK(error_of(R"({"system": {"spin": 1}, "target": {"kind": "gate", "gate": "hadamard"},
                     "optimizer": {"algorithm": "grape"}})")
            .rfind("system.spin", 0) == 0);
  CHECK(error_of(R"({"system": {}, "target": {"kind": "gate", "gate": "hadamard"},
                     "optimizer": {"algorithm": "grape", "step": "big"}})")
            .rfind("optimizer.step", 0) == 0);
  CHECK(error_of(R"({"system": {}, "target": {"kind": "gate", "gate": "hadamard"},
                     "optimizer": {"algorithm": "bfgs"}})")
            .rfind("optimizer.algorithm", 0) == 0);
  CHECK(error_of(R"({"system": {}, "optimizer": {"algorithm": "grape"}})").rfind("target", 0) == 0);
  CHECK(error_of(R"({"system": {"kind": "raw", "h_system": {"re": [[0, 1], [0, 0]]},
                     "channels": [{"operator": {"re": [[0, 1], [1, 0]]}, "max_amplitude": 1}]},
                     "target": {"kind": "gate", "gate": "hadamard"}, "optimizer": {"algorithm": "grape"}})")
            .find("Hermitian") != std::string::npos);
  CHECK(error_of(R"({"system": {}, "target": {"kind": "gate", "matrix": {"re": [[1, 1], [0, 1]]}},
                     "optimizer": {"algorithm": "grape"}})")
            .rfind("target", 0) == 0);
  CHECK_THROWS_AS(load_problem_text(R"({"version": 2, "system": {}, "target": {"kind": "gate", "gate": "hadamard"},
                                       "optimizer": {"algorithm": "grape"}})"),
                  ValidationError);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "{\n  \"system\": {},\n  \"target\": [1,,2]\n}";
  try {
    parse_json_text(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("numbers survive text round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK_THROWS_AS(parse_number("1,5"), ParseError);
  CHECK_THROWS_AS(parse_number("nan"), ParseError);
}

TEST_CASE("pulse files round trip exactly") {
  RealMatrix a(2, 3);
  a << 1.0 / 3.0, -2.0, 1e-17, 5.5, 0.0, -7.25;
  PulseFile p{{"x1", "y1"}, ControlSequence({0.1, 0.2, 0.3}, a), 0.98765432109876543};
  const std::string text = write_pulse_text(p);
  const PulseFile q = read_pulse_text(text);
  CHECK(q.labels == p.labels);
  CHECK(q.sequence == p.sequence);
  CHECK(*q.fidelity == *p.fidelity);
  CHECK(text.find("segment,duration,x1,y1\n1,") != std::string::npos);

  CHECK_THROWS_AS(read_pulse_text("segment,duration,x\n1,0.1\n"), ParseError);
  CHECK_THROWS_AS(read_pulse_text("segment,duration,x\n2,0.1,3\n"), ParseError);
  CHECK_THROWS_AS(read_pulse_text("1,0.1,3\n"), ParseError);
}

TEST_CASE("run, evaluate and validate commands") {
  const fs::path problem = kData / "hadamard_grape.json";
  const fs::path out1 = scratch("run1"), out2 = scratch("run2");
  std::ostringstream o, e;
  CHECK(run_command(problem, out1, {}, o, e) == kExitGoal);
  for (const char* f : {"pulse.csv", "trace.csv", "profile.csv", "manifest.json"}) CHECK(fs::exists(out1 / f));
  CHECK(run_command(problem, out2, {}, o, e) == kExitGoal);
  CHECK(slurp(out1 / "trace.csv") == slurp(out2 / "trace.csv"));

  const auto manifest = nlohmann::json::parse(slurp(out1 / "manifest.json"));
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["termination"] == "goal-reached");
  const LoadedProblem lp = load_problem_file(problem);
  const PulseFile pulse = read_pulse_file(out1 / "pulse.csv");
  CHECK(std::abs(ensemble_performance(lp.problem, pulse.sequence).mean - manifest["final_fidelity"].get<double>()) <=
        1e-12);

  std::ostringstream eo, ee;
  CHECK(evaluate_command(out1 / "pulse.csv", problem, eo, ee) == kExitGoal);
  CHECK(eo.str().find("fidelity: ") == 0);

  const fs::path out3 = scratch("run3");
  CHECK(run_command(problem, out3, {std::nullopt, 0}, o, e) == kExitMaxIterations);
  CHECK(slurp(out3 / "trace.csv").find("0,") != std::string::npos);
  const std::string trace = slurp(out3 / "trace.csv");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);

  const fs::path out4 = scratch("run4");
  CHECK(run_command(problem, out4, {99, std::nullopt}, o, e) == kExitGoal);
  CHECK(nlohmann::json::parse(slurp(out4 / "manifest.json"))["seed"] == 99);
  CHECK(slurp(out4 / "trace.csv") != slurp(out1 / "trace.csv"));

  std::ostringstream vo, ve;
  CHECK(validate_command(problem, vo, ve) == kExitGoal);
  CHECK(nlohmann::json::parse(vo.str())["optimizer"]["segments"] == 20);

  // unwritable destination: a path below a regular file
  std::ostringstream xo, xe;
  CHECK(run_command(problem, out1 / "pulse.csv" / "sub", {}, xo, xe) == kExitError);
  CHECK(!xe.str().empty());

  // channel mismatch on evaluate
  const fs::path one_channel = scratch("mismatch");
  fs::create_directories(one_channel);
  std::ofstream(one_channel / "pulse.csv") << "segment,duration,x1\n1,0.5,1\n";
  CHECK(evaluate_command(one_channel / "pulse.csv", problem, xo, xe) == kExitError);
  CHECK(validate_command(one_channel / "missing.json", xo, xe) == kExitError);
}
