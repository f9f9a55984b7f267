#pragma once

#include <stdexcept>

namespace dioph {

// Bad input or violated precondition. CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact arithmetic left its representable range. Never silent.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A configured work or memory budget was exceeded. CLI exit code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A floating-point consistency check failed. CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dioph
