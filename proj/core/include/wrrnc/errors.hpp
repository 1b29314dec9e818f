#pragma once

#include <stdexcept>
#include <string>

namespace wrrnc {

// Base of every error raised by the library. `code()` is a stable
// identifier (E_...) suitable for scripts and tests.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Argument outside the mathematical domain of an operation (negative time,
// nonpositive capacity, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::string code = "E_DOMAIN")
      : Error(std::move(code), message) {}
};

// Sustained rate is not below the service rate; no bound exists.
class UnstableError : public Error {
 public:
  explicit UnstableError(const std::string& message) : Error("E_UNSTABLE", message) {}
};

// Allocated service never catches up with arrivals. `where` names the
// port (or hop) concerned, empty if not applicable.
class SaturationError : public Error {
 public:
  SaturationError(const std::string& message, std::string where = {});

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message, std::string code = "E_INFEASIBLE")
      : Error(std::move(code), message) {}
};

}  // namespace wrrnc
