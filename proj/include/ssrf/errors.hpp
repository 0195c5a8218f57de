// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ssrf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A model or configuration parameter is non-finite, out of range or
/// incompatible with the requested method.
class InvalidParameter : public Error {
  public:
    InvalidParameter(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Method preconditions (dimension, curvature, sign of eta1) not met.
class WrongMethod : public InvalidParameter {
  public:
    WrongMethod(std::string method, const std::string& what)
        : InvalidParameter(std::move(method), what) {}
};

/// Argument outside the domain of a special function.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// The requested quantity is infinite (zero-lag divergence of the
/// curvature-free model in d = 2, 3).
class SingularityError : public Error {
  public:
    using Error::Error;
};

/// A numerical procedure did not reach its accuracy target.
class AccuracyError : public Error {
  public:
    AccuracyError(const std::string& what, double partial)
        : Error(what), partial_(partial) {}
    double partial_value() const noexcept { return partial_; }

  private:
    double partial_;
};

/// Not enough samples for a Monte-Carlo estimate.
class EstimationError : public Error {
  public:
    using Error::Error;
};

} // namespace ssrf
