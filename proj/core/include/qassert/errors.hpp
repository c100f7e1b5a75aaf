#pragma once

#include <stdexcept>
#include <string>

namespace qassert {

/// Caller violated a documented precondition (bad index, bad operand, ...).
class UsageError : public std::invalid_argument {
  public:
    explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Request exceeds a configured resource limit (e.g. qubit count).
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Internal consistency check failed (e.g. state norm drifted).
class InternalError : public std::logic_error {
  public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace qassert
