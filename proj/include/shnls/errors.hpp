#pragma once

#include <stdexcept>
#include <string>

namespace shnls {

// Common base so callers can catch any library failure in one clause.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BracketError : Error {
  explicit BracketError(const std::string& msg) : Error(msg) {}
};
struct NoConvergenceError : Error {
  explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};
struct GridError : Error {
  explicit GridError(const std::string& msg) : Error(msg) {}
};
struct IdentityViolation : Error {
  explicit IdentityViolation(const std::string& msg) : Error(msg) {}
};
struct SingularSystem : Error {
  explicit SingularSystem(const std::string& msg) : Error(msg) {}
};
struct EpsOutOfRange : Error {
  explicit EpsOutOfRange(const std::string& msg) : Error(msg) {}
};
struct QuadratureBudgetExceeded : Error {
  explicit QuadratureBudgetExceeded(const std::string& msg) : Error(msg) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};
struct StepUnderflow : Error {
  explicit StepUnderflow(const std::string& msg) : Error(msg) {}
};
struct UnsupportedOrder : Error {
  explicit UnsupportedOrder(const std::string& msg) : Error(msg) {}
};
struct DegenerateData : Error {
  explicit DegenerateData(const std::string& msg) : Error(msg) {}
};

}  // namespace shnls
