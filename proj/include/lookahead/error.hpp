// Copyright 2026 The lookahead Authors
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

#include <stdexcept>
#include <string>

namespace lookahead {

/// Process exit codes shared by every CLI command.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kGenerationExhausted = 3,
  kReconciliation = 4,
  kNetwork = 5,
};

/// Base class for all library errors. Each subclass maps to one exit code.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ExitCode::kValidation, what) {}
};

/// Raised by rejection samplers that hit their attempt cap.
class GenerationExhaustedError : public Error {
 public:
  explicit GenerationExhaustedError(const std::string& what)
      : Error(ExitCode::kGenerationExhausted, what) {}
};

/// Malformed input file. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ExitCode::kValidation,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Analytic predictions are only defined while c_max(k) < base.
class UnsupportedRegimeError : public Error {
 public:
  explicit UnsupportedRegimeError(const std::string& what)
      : Error(ExitCode::kValidation, what) {}
};

class ReconciliationError : public Error {
 public:
  explicit ReconciliationError(const std::string& what)
      : Error(ExitCode::kReconciliation, what) {}
};

class NetworkError : public Error {
 public:
  explicit NetworkError(const std::string& what)
      : Error(ExitCode::kNetwork, what) {}
};

}  // namespace lookahead
