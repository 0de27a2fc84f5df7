#pragma once

#include <stdexcept>
#include <string>

namespace paclab {

// Raised when a configuration document fails schema validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a computed object breaks one of its structural guarantees
// (masses not summing to one, a witness that does not verify, ...).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised by operations that refuse work above a configured cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace paclab
