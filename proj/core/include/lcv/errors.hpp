#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lcv {

/// Base class for all structured errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A jet variable would exceed the configured derivative-order cap.
class OrderCapError : public Error {
  public:
    OrderCapError(std::string monomial, int cap)
        : Error("order cap " + std::to_string(cap) + " exceeded in monomial " + monomial),
          monomial(std::move(monomial)) {}
    std::string monomial;
};

/// Operation applied to input outside its contract (e.g. nonlocal terms
/// where only local ones are supported).
class UnsupportedInputError : public Error {
  public:
    using Error::Error;
};

/// An antiderivative or x-mean inversion was requested for data with
/// energy on the kernel of the operator.
class SolvabilityError : public Error {
  public:
    SolvabilityError(const std::string& what, double offending_magnitude)
        : Error(what), offending_magnitude(offending_magnitude) {}
    double offending_magnitude = 0.0;
};

/// Lambda inversion hit resonant modes carrying energy.
class ResonanceError : public Error {
  public:
    ResonanceError(const std::string& what, std::vector<std::pair<int, int>> modes)
        : Error(what), modes(std::move(modes)) {}
    std::vector<std::pair<int, int>> modes;
};

class GridMismatchError : public Error {
  public:
    using Error::Error;
};

/// Time integration produced a non-finite field.
class BlowUpError : public Error {
  public:
    BlowUpError(const std::string& what, double last_good_t)
        : Error(what), last_good_t(last_good_t) {}
    double last_good_t = 0.0;
};

/// A quadrature or validation accuracy requirement was not met.
class AccuracyError : public Error {
  public:
    using Error::Error;
};

/// Internal consistency check failed (e.g. neither coadjoint sign works).
class StructuralBugError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace lcv
