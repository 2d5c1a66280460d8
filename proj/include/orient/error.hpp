#pragma once

#include <stdexcept>
#include <string>

namespace orient {

/// Base for failures of a well-formed computation (as opposed to
/// std::invalid_argument, used for rejected inputs).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No half-maximum crossing inside the search window.
class PeakNotResolved : public Error {
 public:
  using Error::Error;
};

/// The time-update rule drove t_f below its floor.
class TimeCollapsed : public Error {
 public:
  using Error::Error;
};

/// Propagation or update failure tagged with the iteration it happened in.
class IterationError : public Error {
 public:
  IterationError(int iteration, const std::string& what)
      : Error("iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace orient
