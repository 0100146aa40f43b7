// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deconv {

/// Base error. Carries the qualified name of the failing operation
/// (e.g. "tail_profile.s_epsilon") so front ends can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string operation, const std::string& message)
      : std::runtime_error(message), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

/// A precondition or hypothesis was violated by the caller.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Recoverable conditions noticed while an operation still produced a result.
using Warnings = std::vector<std::string>;

}  // namespace deconv
