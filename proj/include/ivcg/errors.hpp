// Copyright 2026 The ivcg Authors
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

namespace ivcg {

// Malformed or inconsistent input (bad ids, out-of-range parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text that could not be parsed. Carries the file and 1-based line.
class ParseError : public InputError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : InputError(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// A loaded value violates a domain invariant (negative budget, alpha > 1).
class InvariantError : public InputError {
 public:
  using InputError::InputError;
};

// A record refers to an id that was never declared.
class DanglingReferenceError : public InputError {
 public:
  using InputError::InputError;
};

// A quantity is undefined for the query, e.g. region share without a rail
// path, or mode split with every mode unreachable.
class UndefinedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed while simulating.
class RuntimeInvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ivcg
