#pragma once

#include <stdexcept>
#include <string>

namespace purify {

// Invalid parameters or preconditions. CLI exit code 2.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Requested size exceeds what the dense backend can hold. CLI exit code 2.
class ResourceError : public std::runtime_error {
  public:
    ResourceError(const std::string &what, double required_bytes)
        : std::runtime_error(what), required_bytes_(required_bytes) {}
    double required_bytes() const { return required_bytes_; }

  private:
    double required_bytes_;
};

// Eigensolver failure, overflow, zero norm, singular configuration. CLI exit code 3.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Least-squares fit refused (too few points, degenerate or sign-flipping data).
class FitError : public NumericError {
  public:
    using NumericError::NumericError;
};

} // namespace purify
