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

#include "qoc/io/pulse_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qoc/error.hpp"

namespace qoc::io {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw ParseError("pulse file line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw ParseError("not a number: \"" + std::string(text) + "\"");
  }
  return x;
}

std::string write_pulse_text(const PulseFile& pulse) {
  const ControlSequence& seq = pulse.sequence;
  if (pulse.labels.size() != seq.channel_count()) {
    throw DimensionError("pulse labels do not match the channel count");
  }
  std::string out;
  out += "# units: duration s, amplitude rad/s\n";
  out += "# total_time: " + format_number(seq.total_time()) + "\n";
  if (pulse.fidelity) out += "# fidelity: " + format_number(*pulse.fidelity) + "\n";
  out += "segment,duration";
  for (const auto& l : pulse.labels) out += "," + l;
  out += "\n";
  for (std::size_t n = 0; n < seq.segment_count(); ++n) {
    out += std::to_string(n + 1) + "," + format_number(seq.duration(n));
    for (std::size_t m = 0; m < seq.channel_count(); ++m) out += "," + format_number(seq.amplitude(m, n));
    out += "\n";
  }
  return out;
}

PulseFile read_pulse_text(std::string_view text) {
  PulseFile pulse;
  bool have_header = false;
  std::optional<double> total_time;
  std::vector<double> durations;
  std::vector<std::vector<double>> columns;

  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(line.substr(1, colon - 1));
      const std::string_view value = trim(line.substr(colon + 1));
      try {
        if (key == "fidelity") pulse.fidelity = parse_number(value);
        if (key == "total_time") total_time = parse_number(value);
      } catch (const ParseError& e) {
        bad_line(line_no, e.what());
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.size() < 2 || trim(fields[0]) != "segment" || trim(fields[1]) != "duration") {
        bad_line(line_no, "expected header \"segment,duration,<channels>\"");
      }
      for (std::size_t i = 2; i < fields.size(); ++i) {
        const std::string_view label = trim(fields[i]);
        if (label.empty()) bad_line(line_no, "empty channel label");
        pulse.labels.emplace_back(label);
      }
      columns.resize(pulse.labels.size());
      have_header = true;
      continue;
    }
    if (fields.size() != pulse.labels.size() + 2) {
      bad_line(line_no, "expected " + std::to_string(pulse.labels.size() + 2) + " fields");
    }
    try {
      const double index = parse_number(fields[0]);
      if (index != static_cast<double>(durations.size() + 1)) bad_line(line_no, "segments must be numbered 1, 2, ...");
      durations.push_back(parse_number(fields[1]));
      for (std::size_t m = 0; m < columns.size(); ++m) columns[m].push_back(parse_number(fields[m + 2]));
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      if (msg.rfind("pulse file", 0) == 0) throw;
      bad_line(line_no, msg);
    }
  }
  if (!have_header) throw ParseError("pulse file: missing header row");

  RealMatrix amps(static_cast<Eigen::Index>(columns.size()), static_cast<Eigen::Index>(durations.size()));
  for (std::size_t m = 0; m < columns.size(); ++m) {
    for (std::size_t n = 0; n < durations.size(); ++n) {
      amps(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = columns[m][n];
    }
  }
  try {
    pulse.sequence = ControlSequence(std::move(durations), std::move(amps));
  } catch (const Error& e) {
    throw ParseError(std::string("pulse file: ") + e.what());
  }
  if (total_time && std::abs(*total_time - pulse.sequence.total_time()) > 1e-9 * std::max(1.0, *total_time)) {
    throw ParseError("pulse file: total_time metadata disagrees with the segment durations");
  }
  return pulse;
}

void write_pulse_file(const std::filesystem::path& path, const PulseFile& pulse) {
  const std::string text = write_pulse_text(pulse);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

PulseFile read_pulse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open pulse file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_pulse_text(buf.str());
}

}  // namespace qoc::io
