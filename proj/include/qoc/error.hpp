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

#include <stdexcept>
#include <string>

namespace qoc {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not match the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a physical or structural invariant (Hermiticity,
// unitarity, normalization, positivity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A fast path or control law was asked to run outside the regime it is
// defined for.
class ApplicabilityError : public Error {
 public:
  using Error::Error;
};

// The algorithm does not support the requested problem kind.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class CacheMissError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Krotov sweep lost fidelity beyond tolerance.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// Objective returned NaN or inf.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; the message carries line and column.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qoc
