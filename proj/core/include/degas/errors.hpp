// Copyright 2026 The degas Authors
//
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degas {

/// Bad argument to a public entry point (range, shape, or domain violation).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A convergence result was evaluated outside the hypotheses it is stated for.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A trace-driven delay model was queried past its recorded length.
class ExhaustedTrace : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An internal contract was broken (e.g. a delay model returned tau(k) > k).
class InternalInvariant : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class WorkerFailure : public std::runtime_error {
 public:
  WorkerFailure(std::size_t worker, const std::string& what)
      : std::runtime_error("worker " + std::to_string(worker) + " failed: " + what), worker_(worker) {}
  std::size_t worker() const noexcept { return worker_; }

 private:
  std::size_t worker_;
};

class EmptyTrace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Labels outside {-1, +1} handed to a classification loss.
class LabelDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace degas
