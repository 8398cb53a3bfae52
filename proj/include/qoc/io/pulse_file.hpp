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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qoc/control.hpp"

namespace qoc::io {

// Durations in seconds, amplitudes in rad/s, one row per segment.
struct PulseFile {
  std::vector<std::string> labels;
  ControlSequence sequence;
  std::optional<double> fidelity;
};

/// Shortest round-trip-safe decimal text (17 significant digits, '.' always).
std::string format_number(double x);
/// Locale-independent strict parse; throws ParseError.
double parse_number(std::string_view text);

std::string write_pulse_text(const PulseFile& pulse);
PulseFile read_pulse_text(std::string_view text);

void write_pulse_file(const std::filesystem::path& path, const PulseFile& pulse);
PulseFile read_pulse_file(const std::filesystem::path& path);

}  // namespace qoc::io
