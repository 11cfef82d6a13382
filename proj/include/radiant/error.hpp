// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace radiant {

/// Process exit codes used by the command-line tools.
enum class ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kDivergence = 3,
  kRemoteFailure = 4,
};

/// Base of every error raised by the library. Carries the exit code the CLI
/// reports when the error escapes to `main`.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::kInputError)
      : std::runtime_error(what), code_(code) {}

  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Malformed, missing, or inconsistent input (files, configs, arguments).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, ExitCode::kInputError) {}
};

/// Non-finite loss or gradient during training.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what = "divergence")
      : Error(what, ExitCode::kDivergence) {}
};

}  // namespace radiant
