#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ncwass {

// Base for all errors thrown by the library. code() is a stable
// machine-readable identifier (e.g. "NonUnitaryFrame", "ArityMismatch");
// the CLI maps error categories to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed inputs or violated construction invariants. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failures of the numerical machinery itself (pivot limit, metric
// violation beyond certified gaps, ...). CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncwass
