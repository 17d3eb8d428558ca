// Copyright 2026 The flexsched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLEXSCHED_ERRORS_HPP_
#define FLEXSCHED_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace flexsched {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a model map (e.g. an operating
// point outside the state's bounds).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller broke a precondition that is not a data problem (wrong vector
// length, binaries passed to the LP solver, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A time series does not cover the requested horizon.
class CoverageError : public Error {
 public:
  CoverageError(std::string message, int timestep)
      : Error(std::move(message)), timestep_(timestep) {}
  int timestep() const { return timestep_; }

 private:
  int timestep_;
};

// Malformed text input. `line` is 1-based and counts the header line.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line)
      : Error(std::move(message)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A configuration document failed validation. `pointer` is a JSON pointer
// to the offending value ("" for the document root).
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : Error(pointer.empty() ? message : pointer + ": " + message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// A metric is undefined for the given input (e.g. NRMSE of a flat plan).
class MetricError : public Error {
 public:
  using Error::Error;
};

// A solver assignment that cannot be decoded (non-integral binaries, a cost
// that disagrees with the reported objective).
class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexsched

#endif  // FLEXSCHED_ERRORS_HPP_
