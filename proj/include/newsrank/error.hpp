#pragma once

#include <stdexcept>
#include <string>

namespace newsrank {

// Bad input data (corpus files, sidecars, model files). CLI maps this to
// exit code 2.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad invocation: malformed config values, unknown variants, missing flags.
// CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition was violated by the caller.
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace newsrank
