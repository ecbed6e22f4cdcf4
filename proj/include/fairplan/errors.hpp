#ifndef FAIRPLAN_ERRORS_HPP
#define FAIRPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairplan {

// Bad user-supplied data: malformed files, invalid parameters, incompatible
// oracle/instance combinations. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed the configured cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative method exhausted its iteration budget. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

// Floating-point breakdown (cycling guard, loss of positive-definiteness).
// CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// A condition that indicates a bug rather than bad input (e.g. an infeasible
// master problem, which cannot happen with singleton columns present).
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fairplan

#endif  // FAIRPLAN_ERRORS_HPP
