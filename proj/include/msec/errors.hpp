// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace msec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ConfigIssue {
  NonPositiveCount,
  UsersNotBelowAntennas,
  RhoOutOfRange,
  PhiOutOfRange,
  NonPositivePower,
  PilotTooShort,
  CoherenceTooShort,
  PathLossOutOfRange,
  Parse,
  Io,
};

struct ConfigError : Error {
  ConfigError(ConfigIssue issue, const std::string& what) : Error(what), issue(issue) {}
  ConfigIssue issue;
};

// Quantity is well defined as a concept but not at this parameter point
// (no AN power, bound precondition violated, alpha above threshold).
struct NotApplicable : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

}  // namespace msec
