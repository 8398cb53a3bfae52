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

#include "qoc/io/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qoc/error.hpp"
#include "qoc/systems.hpp"

namespace qoc::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Strict object reader: every key must be consumed before finish().
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "document" : path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }

  const json& raw(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(join(path_, key), "missing required key");
    return j_.at(key);
  }

  double number(const char* key, std::optional<double> def = std::nullopt) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (!def) fail(join(path_, key), "missing required key");
      return *def;
    }
    const json& v = j_.at(key);
    if (!v.is_number()) fail(join(path_, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(join(path_, key), "expected a finite number");
    return x;
  }

  std::uint64_t integer(const char* key, std::optional<std::uint64_t> def = std::nullopt) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (!def) fail(join(path_, key), "missing required key");
      return *def;
    }
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) fail(join(path_, key), "expected a non-negative integer");
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 9.0e15) return static_cast<std::uint64_t>(x);
    }
    fail(join(path_, key), "expected a non-negative integer");
  }

  std::string text(const char* key, std::optional<std::string> def = std::nullopt) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (!def) fail(join(path_, key), "missing required key");
      return *def;
    }
    const json& v = j_.at(key);
    if (!v.is_string()) fail(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::string choice(const char* key, const std::vector<std::string>& options,
                     std::optional<std::string> def = std::nullopt) {
    const std::string v = text(key, std::move(def));
    for (const auto& o : options) {
      if (o == v) return v;
    }
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    fail(join(path_, key), "unknown value \"" + v + "\" (expected one of " + list + ")");
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double positive(double x, const std::string& path) {
  if (!(x > 0.0)) fail(path, "must be > 0");
  return x;
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(indexed(path, i), "expected a number");
    out.push_back(v[i].get<double>());
    if (!std::isfinite(out.back())) fail(indexed(path, i), "expected a finite number");
  }
  return out;
}

std::vector<std::vector<double>> number_table(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(number_array(v[i], indexed(path, i)));
    if (rows.back().size() != rows.front().size() || rows.back().empty()) {
      fail(indexed(path, i), "rows must be non-empty and of equal length");
    }
  }
  return rows;
}

// {"re": [[...]], "im": [[...]]}; im defaults to zeros.
json resolve_matrix(const json& v, const std::string& path) {
  Obj o(v, path);
  const auto re = number_table(o.raw("re"), join(path, "re"));
  std::vector<std::vector<double>> im;
  if (o.has("im")) {
    im = number_table(o.raw("im"), join(path, "im"));
    if (im.size() != re.size() || im.front().size() != re.front().size()) {
      fail(join(path, "im"), "shape differs from re");
    }
  } else {
    im.assign(re.size(), std::vector<double>(re.front().size(), 0.0));
  }
  o.finish();
  return json{{"re", re}, {"im", im}};
}

ComplexMatrix to_matrix(const json& v) {
  const auto re = v.at("re").get<std::vector<std::vector<double>>>();
  const auto im = v.at("im").get<std::vector<std::vector<double>>>();
  ComplexMatrix m(static_cast<Eigen::Index>(re.size()), static_cast<Eigen::Index>(re.front().size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    for (std::size_t k = 0; k < re[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = Complex(re[i][k], im[i][k]);
    }
  }
  return m;
}

json resolve_vector(const json& v, const std::string& path) {
  Obj o(v, path);
  const auto re = number_array(o.raw("re"), join(path, "re"));
  if (re.empty()) fail(join(path, "re"), "expected a non-empty array");
  std::vector<double> im(re.size(), 0.0);
  if (o.has("im")) {
    im = number_array(o.raw("im"), join(path, "im"));
    if (im.size() != re.size()) fail(join(path, "im"), "length differs from re");
  }
  o.finish();
  return json{{"re", re}, {"im", im}};
}

ComplexVector to_vector(const json& v) {
  const auto re = v.at("re").get<std::vector<double>>();
  const auto im = v.at("im").get<std::vector<double>>();
  ComplexVector out(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) out(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Blocks

json resolve_system(const json& v) {
  Obj o(v, "system");
  const std::string kind = o.choice("kind", {"spin", "raw", "sweep"}, "spin");
  json out{{"kind", kind}};
  if (kind == "spin") {
    const std::uint64_t n = o.integer("qubits", 1);
    if (n < 1 || n > 12) fail("system.qubits", "must lie in [1, 12]");
    std::vector<double> det(n, 0.0);
    if (o.has("detunings_hz")) det = number_array(o.raw("detunings_hz"), "system.detunings_hz");
    if (det.size() != n) fail("system.detunings_hz", "needs one entry per qubit");
    std::vector<std::vector<double>> j(n, std::vector<double>(n, 0.0));
    if (o.has("coupling_hz")) {
      if (n == 1 && o.raw("coupling_hz").is_array() && o.raw("coupling_hz").empty()) {
        // [] is accepted as "no coupling" for one qubit
      } else {
        j = number_table(o.raw("coupling_hz"), "system.coupling_hz");
      }
      if (j.size() != n || j.front().size() != n) fail("system.coupling_hz", "must be qubits x qubits");
    }
    std::vector<std::string> axes(n, "xy");
    if (o.has("axes")) {
      const json& a = o.raw("axes");
      if (!a.is_array() || a.size() != n) fail("system.axes", "needs one string per qubit");
      for (std::size_t i = 0; i < n; ++i) {
        if (!a[i].is_string()) fail(indexed("system.axes", i), "expected a string");
        axes[i] = a[i].get<std::string>();
      }
    }
    const double max_hz = positive(o.number("max_amplitude_hz", 10.0), "system.max_amplitude_hz");
    out["qubits"] = n;
    out["detunings_hz"] = det;
    out["coupling_hz"] = j;
    out["axes"] = axes;
    out["max_amplitude_hz"] = max_hz;
  } else if (kind == "raw") {
    out["h_system"] = resolve_matrix(o.raw("h_system"), "system.h_system");
    const json& chans = o.raw("channels");
    if (!chans.is_array() || chans.empty()) fail("system.channels", "expected a non-empty array");
    json list = json::array();
    for (std::size_t i = 0; i < chans.size(); ++i) {
      const std::string p = indexed("system.channels", i);
      Obj c(chans[i], p);
      json ch;
      ch["label"] = c.text("label", "c" + std::to_string(i + 1));
      ch["operator"] = resolve_matrix(c.raw("operator"), join(p, "operator"));
      ch["max_amplitude"] = positive(c.number("max_amplitude"), join(p, "max_amplitude"));
      c.finish();
      list.push_back(ch);
    }
    out["channels"] = list;
  } else {
    const json& det = o.raw("detunings_hz");
    out["detunings_hz"] = number_array(det, "system.detunings_hz");
    if (out["detunings_hz"].empty()) fail("system.detunings_hz", "expected a non-empty array");
    out["drive_amplitude"] =
        positive(o.number("drive_amplitude", 2.0 * 3.141592653589793), "system.drive_amplitude");
  }
  o.finish();
  return out;
}

json resolve_state_spec(const json& v, const std::string& path) {
  Obj o(v, path);
  int forms = o.has("basis") + o.has("vector") + o.has("density");
  if (forms != 1) fail(path, "give exactly one of basis, vector, density");
  json out;
  if (o.has("basis")) {
    const std::string bits = o.text("basis");
    if (bits.empty() || bits.find_first_not_of("01") != std::string::npos) {
      fail(join(path, "basis"), "expected a string of 0 and 1");
    }
    out["basis"] = bits;
  } else if (o.has("vector")) {
    out["vector"] = resolve_vector(o.raw("vector"), join(path, "vector"));
  } else {
    out["density"] = resolve_matrix(o.raw("density"), join(path, "density"));
  }
  o.finish();
  return out;
}

json resolve_target(const json& v) {
  Obj o(v, "target");
  const std::string kind = o.choice("kind", {"gate", "state"});
  json out{{"kind", kind}};
  if (kind == "gate") {
    if (o.has("gate") == o.has("matrix")) fail("target", "give exactly one of gate, matrix");
    if (o.has("gate")) {
      out["gate"] = o.choice("gate", {"hadamard", "pauli-x", "pauli-y", "pauli-z", "rx", "ry", "rz",
                                      "cnot", "iswap"});
      out["theta"] = o.number("theta", 0.0);
    } else {
      out["matrix"] = resolve_matrix(o.raw("matrix"), "target.matrix");
    }
  } else {
    out["initial"] = resolve_state_spec(o.raw("initial"), "target.initial");
    out["target"] = resolve_state_spec(o.raw("target"), "target.target");
    out["fidelity"] = o.choice("fidelity", {"uhlmann", "trace", "correlation", "attenuated"}, "uhlmann");
  }
  o.finish();
  return out;
}

json resolve_ensemble(const json* v) {
  if (v == nullptr) return json{{"kind", "uniform"}, {"half_width", 0.0}, {"bins", 1}};
  Obj o(*v, "ensemble");
  const std::string kind =
      o.choice("kind", {"uniform", "triangular", "gaussian-truncated", "explicit"}, "uniform");
  json out{{"kind", kind}};
  if (kind == "explicit") {
    const json& bins = o.raw("bins");
    if (!bins.is_array() || bins.empty()) fail("ensemble.bins", "expected a non-empty array");
    json list = json::array();
    for (std::size_t i = 0; i < bins.size(); ++i) {
      Obj b(bins[i], indexed("ensemble.bins", i));
      list.push_back(json{{"scale", b.number("scale")}, {"probability", b.number("probability")}});
      b.finish();
    }
    out["bins"] = list;
  } else {
    out["half_width"] = o.number("half_width", 0.0);
    out["bins"] = o.integer("bins", 1);
  }
  o.finish();
  return out;
}

json resolve_penalty(const json* v) {
  if (v == nullptr) return json{{"soft_zone", 0.9}, {"weight", 1.0}};
  Obj o(*v, "penalty");
  json out{{"soft_zone", o.number("soft_zone", 0.9)}, {"weight", o.number("weight", 1.0)}};
  o.finish();
  return out;
}

json resolve_channels(const json* v) {
  json list = json::array();
  if (v == nullptr) return list;
  if (!v->is_array()) fail("interleaved_channels", "expected an array");
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string p = indexed("interleaved_channels", i);
    Obj o((*v)[i], p);
    json ch;
    ch["after_segment"] = o.integer("after_segment");
    const json& k = o.raw("kraus");
    if (!k.is_array() || k.empty()) fail(join(p, "kraus"), "expected a non-empty array of matrices");
    json ks = json::array();
    for (std::size_t j = 0; j < k.size(); ++j) ks.push_back(resolve_matrix(k[j], indexed(join(p, "kraus"), j)));
    ch["kraus"] = ks;
    o.finish();
    list.push_back(ch);
  }
  return list;
}

void shape_keys(Obj& o, json& out, std::size_t segments, double total_time) {
  out["segments"] = o.integer("segments", segments);
  out["total_time"] = o.number("total_time", total_time);
  out["initial_fraction"] = o.number("initial_fraction", 0.1);
}

void grape_keys(Obj& o, json& out) {
  const GrapeConfig d;
  out["step"] = o.number("step", d.step);
  out["mode"] = o.choice("mode", {"first-order", "quasi-newton"}, "first-order");
  out["lbfgs_memory"] = o.integer("lbfgs_memory", d.lbfgs_memory);
  out["stall_window"] = o.integer("stall_window", d.stall_window);
  out["stall_tolerance"] = o.number("stall_tolerance", d.stall_tolerance);
}

void sa_keys(Obj& o, json& out) {
  const AnnealingConfig d;
  out["initial_temperature"] = o.number("initial_temperature", d.initial_temperature);
  out["cooling"] = o.number("cooling", d.cooling);
  out["neighborhood"] = o.number("neighborhood", d.neighborhood);
  out["moves_per_block"] = o.integer("moves_per_block", d.moves_per_block);
  out["stall_blocks"] = o.integer("stall_blocks", d.stall_blocks);
}

json resolve_optimizer(const json& v) {
  Obj o(v, "optimizer");
  const std::string alg = o.choice(
      "algorithm", {"grape", "krotov", "sa", "sagrape", "crab", "goat", "smp", "lyapunov", "adiabatic"});
  json out{{"algorithm", alg}};
  const RunSettings run;
  out["max_iterations"] = o.integer("max_iterations", run.max_iterations);
  out["fidelity_goal"] = o.number("fidelity_goal", run.fidelity_goal);
  const double goal = out["fidelity_goal"].get<double>();
  if (!(goal > 0.0 && goal <= 1.0)) fail("optimizer.fidelity_goal", "must lie in (0, 1]");

  if (alg == "grape") {
    shape_keys(o, out, 20, 1.0);
    grape_keys(o, out);
  } else if (alg == "krotov") {
    const KrotovConfig d;
    shape_keys(o, out, 20, 1.0);
    out["delta"] = o.number("delta", d.delta);
    out["eta"] = o.number("eta", d.eta);
    out["lambda"] = o.number("lambda", d.lambda);
    out["channel_lambda"] = o.has("channel_lambda")
                                ? number_array(o.raw("channel_lambda"), "optimizer.channel_lambda")
                                : std::vector<double>{};
    out["kappa"] = o.number("kappa", d.kappa);
    out["stall_window"] = o.integer("stall_window", d.stall_window);
    out["stall_tolerance"] = o.number("stall_tolerance", d.stall_tolerance);
  } else if (alg == "sa") {
    shape_keys(o, out, 20, 1.0);
    sa_keys(o, out);
  } else if (alg == "sagrape") {
    const SagrapeConfig d;
    shape_keys(o, out, 20, 1.0);
    out["sa_blocks_per_cycle"] = o.integer("sa_blocks_per_cycle", d.sa_blocks_per_cycle);
    out["grape_iterations_per_cycle"] = o.integer("grape_iterations_per_cycle", d.grape_iterations_per_cycle);
    json sa = json::object();
    json gr = json::object();
    if (o.has("sa")) {
      Obj s(o.raw("sa"), "optimizer.sa");
      sa_keys(s, sa);
      s.finish();
    } else {
      Obj s(json::object(), "optimizer.sa");
      sa_keys(s, sa);
    }
    if (o.has("grape")) {
      Obj g(o.raw("grape"), "optimizer.grape");
      grape_keys(g, gr);
      g.finish();
    } else {
      Obj g(json::object(), "optimizer.grape");
      grape_keys(g, gr);
    }
    out["sa"] = sa;
    out["grape"] = gr;
  } else if (alg == "crab") {
    const CrabConfig d;
    out["harmonics"] = o.integer("harmonics", d.harmonics);
    out["discretize_segments"] = o.integer("discretize_segments", d.discretize_segments);
    out["total_time"] = o.number("total_time", d.total_time);
    out["initial_step"] = o.number("initial_step", d.initial_step);
    out["max_evaluations"] = o.integer("max_evaluations", d.max_evaluations);
  } else if (alg == "goat") {
    const GoatConfig d;
    out["pulses_per_channel"] = o.integer("pulses_per_channel", d.pulses_per_channel);
    out["total_time"] = o.number("total_time", d.total_time);
    out["amplitude_fraction"] = o.number("amplitude_fraction", d.amplitude_fraction);
    out["discretize_segments"] = o.integer("discretize_segments", d.discretize_segments);
    out["rtol"] = o.number("rtol", d.rtol);
    out["atol"] = o.number("atol", d.atol);
  } else if (alg == "smp") {
    const SmpConfig d;
    out["initial_duration"] = o.number("initial_duration", d.initial_duration);
    out["max_segments"] = o.integer("max_segments", d.max_segments);
    out["stage_evaluations"] = o.integer("stage_evaluations", d.stage_evaluations);
    out["restarts"] = o.integer("restarts", d.restarts);
    out["min_duration"] = o.number("min_duration", d.min_duration);
  } else if (alg == "lyapunov") {
    const LyapunovConfig d;
    out["dt"] = o.number("dt", d.dt);
    out["max_time"] = o.number("max_time", d.max_time);
    out["dead_band"] = o.number("dead_band", d.dead_band);
    out["kick"] = o.number("kick", d.kick);
    out["max_kicks"] = o.integer("max_kicks", d.max_kicks);
  } else {
    const AdiabaticConfig d;
    out["nu_start_hz"] = o.number("nu_start_hz", d.nu_start_hz);
    out["nu_end_hz"] = o.number("nu_end_hz", d.nu_end_hz);
    out["total_time"] = o.number("total_time", d.total_time);
    out["segments"] = o.integer("segments", d.segments);
    out["profile"] = o.choice("profile", {"linear", "tanh"}, "linear");
    out["steepness"] = o.number("steepness", d.steepness);
  }
  o.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Construction from a resolved document

ControlSystem make_system(const json& s) {
  const std::string kind = s.at("kind");
  if (kind == "spin") {
    SpinSystemSpec spec;
    spec.qubits = s.at("qubits").get<std::size_t>();
    spec.detunings_hz = s.at("detunings_hz").get<std::vector<double>>();
    const auto j = s.at("coupling_hz").get<std::vector<std::vector<double>>>();
    spec.coupling_hz = RealMatrix::Zero(static_cast<Eigen::Index>(spec.qubits), static_cast<Eigen::Index>(spec.qubits));
    for (std::size_t a = 0; a < j.size(); ++a) {
      for (std::size_t b = 0; b < j[a].size(); ++b) {
        spec.coupling_hz(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = j[a][b];
      }
    }
    spec.axes = s.at("axes").get<std::vector<std::string>>();
    spec.max_amplitude_hz = s.at("max_amplitude_hz");
    return build_spin_system(spec);
  }
  if (kind == "raw") {
    std::vector<ControlChannel> channels;
    for (const auto& c : s.at("channels")) {
      channels.push_back({to_matrix(c.at("operator")), c.at("max_amplitude").get<double>(),
                          c.at("label").get<std::string>()});
    }
    return ControlSystem(to_matrix(s.at("h_system")), std::move(channels));
  }
  AdiabaticConfig cfg;
  cfg.detunings_hz = s.at("detunings_hz").get<std::vector<double>>();
  cfg.amplitude = s.at("drive_amplitude");
  return adiabatic_system(cfg);
}

std::size_t qubits_of(Eigen::Index dim, const char* path) {
  std::size_t n = 0;
  while ((static_cast<Eigen::Index>(1) << n) < dim) ++n;
  if ((static_cast<Eigen::Index>(1) << n) != dim) fail(path, "named gates need a qubit register");
  return n;
}

ComplexMatrix make_state(const json& spec, Eigen::Index dim, const std::string& path) {
  if (spec.contains("basis")) {
    const ComplexVector k = basis_ket(spec.at("basis").get<std::string>());
    if (k.size() != dim) fail(join(path, "basis"), "length does not match the system");
    return k * k.adjoint();
  }
  if (spec.contains("vector")) {
    const ComplexVector v = to_vector(spec.at("vector"));
    if (v.size() != dim) fail(join(path, "vector"), "length does not match the system");
    try {
      return QuantumState::pure(v).density_matrix();
    } catch (const Error& e) {
      fail(join(path, "vector"), e.what());
    }
  }
  const ComplexMatrix rho = to_matrix(spec.at("density"));
  if (rho.rows() != dim || rho.cols() != dim) fail(join(path, "density"), "shape does not match the system");
  return rho;
}

EnsembleDistribution make_ensemble(const json& e) {
  const std::string kind = e.at("kind");
  if (kind == "explicit") {
    std::vector<EnsembleDistribution::Bin> bins;
    for (const auto& b : e.at("bins")) bins.push_back({b.at("scale"), b.at("probability")});
    return EnsembleDistribution(std::move(bins));
  }
  const DistributionKind k = kind == "uniform"      ? DistributionKind::uniform
                             : kind == "triangular" ? DistributionKind::triangular
                                                    : DistributionKind::gaussian_truncated;
  try {
    return standard_distribution(k, e.at("half_width"), e.at("bins").get<std::size_t>());
  } catch (const Error& err) {
    fail("ensemble", err.what());
  }
}

SequenceShape make_shape(const json& o) {
  return SequenceShape{o.at("segments").get<std::size_t>(), o.at("total_time").get<double>(),
                       o.at("initial_fraction").get<double>()};
}

GrapeConfig make_grape(const json& o, const SequenceShape& shape) {
  GrapeConfig c;
  c.shape = shape;
  c.step = o.at("step");
  c.mode = o.at("mode") == "quasi-newton" ? GrapeMode::quasi_newton : GrapeMode::first_order;
  c.lbfgs_memory = o.at("lbfgs_memory");
  c.stall_window = o.at("stall_window");
  c.stall_tolerance = o.at("stall_tolerance");
  return c;
}

AnnealingConfig make_sa(const json& o, const SequenceShape& shape) {
  AnnealingConfig c;
  c.shape = shape;
  c.initial_temperature = o.at("initial_temperature");
  c.cooling = o.at("cooling");
  c.neighborhood = o.at("neighborhood");
  c.moves_per_block = o.at("moves_per_block");
  c.stall_blocks = o.at("stall_blocks");
  return c;
}

OptimizerConfig make_optimizer(const json& o, const json& system, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.run.max_iterations = o.at("max_iterations");
  cfg.run.fidelity_goal = o.at("fidelity_goal");
  cfg.run.seed = seed;
  const std::string alg = o.at("algorithm");
  if (alg == "grape") {
    cfg.algorithm = make_grape(o, make_shape(o));
  } else if (alg == "krotov") {
    KrotovConfig c;
    c.shape = make_shape(o);
    c.delta = o.at("delta");
    c.eta = o.at("eta");
    c.lambda = o.at("lambda");
    c.channel_lambda = o.at("channel_lambda").get<std::vector<double>>();
    c.kappa = o.at("kappa");
    c.stall_window = o.at("stall_window");
    c.stall_tolerance = o.at("stall_tolerance");
    cfg.algorithm = c;
  } else if (alg == "sa") {
    cfg.algorithm = make_sa(o, make_shape(o));
  } else if (alg == "sagrape") {
    SagrapeConfig c;
    const SequenceShape shape = make_shape(o);
    c.sa = make_sa(o.at("sa"), shape);
    c.grape = make_grape(o.at("grape"), shape);
    c.sa_blocks_per_cycle = o.at("sa_blocks_per_cycle");
    c.grape_iterations_per_cycle = o.at("grape_iterations_per_cycle");
    cfg.algorithm = c;
  } else if (alg == "crab") {
    CrabConfig c;
    c.harmonics = o.at("harmonics");
    c.discretize_segments = o.at("discretize_segments");
    c.total_time = o.at("total_time");
    c.initial_step = o.at("initial_step");
    c.max_evaluations = o.at("max_evaluations");
    cfg.algorithm = c;
  } else if (alg == "goat") {
    GoatConfig c;
    c.pulses_per_channel = o.at("pulses_per_channel");
    c.total_time = o.at("total_time");
    c.amplitude_fraction = o.at("amplitude_fraction");
    c.discretize_segments = o.at("discretize_segments");
    c.rtol = o.at("rtol");
    c.atol = o.at("atol");
    cfg.algorithm = c;
  } else if (alg == "smp") {
    SmpConfig c;
    c.initial_duration = o.at("initial_duration");
    c.max_segments = o.at("max_segments");
    c.stage_evaluations = o.at("stage_evaluations");
    c.restarts = o.at("restarts");
    c.min_duration = o.at("min_duration");
    cfg.algorithm = c;
  } else if (alg == "lyapunov") {
    LyapunovConfig c;
    c.dt = o.at("dt");
    c.max_time = o.at("max_time");
    c.dead_band = o.at("dead_band");
    c.kick = o.at("kick");
    c.max_kicks = o.at("max_kicks");
    cfg.algorithm = c;
  } else {
    if (system.at("kind") != "sweep") fail("optimizer.algorithm", "adiabatic needs a sweep system");
    AdiabaticConfig c;
    c.detunings_hz = system.at("detunings_hz").get<std::vector<double>>();
    c.amplitude = system.at("drive_amplitude");
    c.nu_start_hz = o.at("nu_start_hz");
    c.nu_end_hz = o.at("nu_end_hz");
    c.total_time = o.at("total_time");
    c.segments = o.at("segments");
    c.profile = o.at("profile") == "tanh" ? SweepProfile::tanh : SweepProfile::linear;
    c.steepness = o.at("steepness");
    cfg.algorithm = c;
  }
  return cfg;
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

nlohmann::json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte is the 1-based position of the offending character.
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    std::string detail = e.what();
    if (const auto at = detail.find(", column "); at != std::string::npos) {
      if (const auto colon = detail.find(": ", at); colon != std::string::npos) detail = detail.substr(colon + 2);
    }
    os << "syntax error at line " << line << ", column " << col << ": " << detail;
    throw ParseError(os.str());
  }
}

nlohmann::json resolve_problem(const nlohmann::json& document) {
  Obj o(document, "");
  const std::uint64_t version = o.integer("version", kProblemFileVersion);
  if (version != kProblemFileVersion) fail("version", "unsupported version " + std::to_string(version));
  json out;
  out["version"] = version;
  out["system"] = resolve_system(o.raw("system"));
  out["target"] = resolve_target(o.raw("target"));
  out["ensemble"] = resolve_ensemble(o.has("ensemble") ? &o.raw("ensemble") : nullptr);
  out["penalty"] = resolve_penalty(o.has("penalty") ? &o.raw("penalty") : nullptr);
  out["interleaved_channels"] =
      resolve_channels(o.has("interleaved_channels") ? &o.raw("interleaved_channels") : nullptr);
  out["optimizer"] = resolve_optimizer(o.raw("optimizer"));
  out["seed"] = o.integer("seed", 0);
  o.finish();
  return out;
}

LoadedProblem build_problem(const nlohmann::json& document) {
  const json r = resolve_problem(document);

  auto guard = [](const char* block, auto&& fn) {
    try {
      return fn();
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      if (msg.rfind(block, 0) == 0) throw;
      throw ValidationError(std::string(block) + ": " + msg);
    } catch (const DimensionError& e) {
      throw DimensionError(std::string(block) + ": " + e.what());
    }
  };

  ControlSystem system = guard("system", [&] { return make_system(r.at("system")); });
  const Eigen::Index dim = system.dim();
  EnsembleDistribution ensemble = guard("ensemble", [&] { return make_ensemble(r.at("ensemble")); });
  PenaltyConfig penalty{r.at("penalty").at("soft_zone"), r.at("penalty").at("weight")};

  std::vector<QuantumChannel> channels = guard("interleaved_channels", [&] {
    std::vector<QuantumChannel> out;
    for (const auto& c : r.at("interleaved_channels")) {
      std::vector<ComplexMatrix> kraus;
      for (const auto& k : c.at("kraus")) kraus.push_back(to_matrix(k));
      out.emplace_back(std::move(kraus), c.at("after_segment").get<std::size_t>());
    }
    return out;
  });

  const json& t = r.at("target");
  const auto build = [&]() -> ControlProblem {
    if (t.at("kind") == "gate") {
      ComplexMatrix u;
      if (t.contains("gate")) {
        u = standard_gate(t.at("gate").get<std::string>(), qubits_of(dim, "target.gate"), t.at("theta"));
      } else {
        u = to_matrix(t.at("matrix"));
      }
      if (!channels.empty()) {
        throw CapabilityError("interleaved_channels: gate targets cannot use interleaved channels");
      }
      return make_gate_problem(std::move(system), std::move(u), std::move(ensemble), penalty);
    }
    const ComplexMatrix initial = make_state(t.at("initial"), dim, "target.initial");
    const ComplexMatrix target = make_state(t.at("target"), dim, "target.target");
    const std::string f = t.at("fidelity");
    const StateFidelity kind = f == "uhlmann"   ? StateFidelity::uhlmann
                               : f == "trace"   ? StateFidelity::trace
                               : f == "correlation" ? StateFidelity::correlation
                                                    : StateFidelity::attenuated;
    return make_state_problem(std::move(system), initial, target, kind, std::move(ensemble), penalty,
                              std::move(channels));
  };
  ControlProblem problem = guard("target", build);
  OptimizerConfig optimizer = guard("optimizer", [&] {
    return make_optimizer(r.at("optimizer"), r.at("system"), r.at("seed").get<std::uint64_t>());
  });
  std::vector<std::string> warnings;
  if (const auto* a = std::get_if<AdiabaticConfig>(&optimizer.algorithm)) {
    guard("optimizer", [&] { return adiabatic_sweep(*a); });
    warnings = adiabatic_warnings(*a);
  }
  return LoadedProblem{std::move(problem), std::move(optimizer), r, std::move(warnings)};
}

LoadedProblem load_problem_text(std::string_view text) { return build_problem(parse_json_text(text)); }

LoadedProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem_text(buf.str());
}

std::string serialize_problem(const nlohmann::json& resolved) { return resolved.dump(2) + "\n"; }

}  // namespace qoc::io
