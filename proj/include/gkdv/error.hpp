#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gkdv {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameters, grid specs or argument ranges.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A spectral multiplier would be evaluated at k*h beyond the configured limit.
class BandLimitError : public Error {
 public:
  BandLimitError(std::size_t mode, double k, double kh, double limit)
      : Error("band limit exceeded: mode " + std::to_string(mode) + " (k=" + std::to_string(k) +
              ", k*h=" + std::to_string(kh) + ") is above the limit k*h <= " + std::to_string(limit)),
        mode_(mode),
        kh_(kh) {}

  std::size_t mode() const noexcept { return mode_; }
  double kh() const noexcept { return kh_; }

 private:
  std::size_t mode_;
  double kh_;
};

/// A recursion denominator (or the envelope velocity) vanishes.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, int order) : Error(what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// No real root of the derivative-continuity condition in the search interval.
class NoSmoothMatchingError : public Error {
 public:
  using Error::Error;
};

/// Series evaluation did not converge (outside the disk and the rational
/// continuation is not stable across approximant orders).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, std::size_t step, double last_good_time)
      : Error(what), step_(step), last_good_time_(last_good_time) {}

  std::size_t step() const noexcept { return step_; }
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  std::size_t step_;
  double last_good_time_;
};

/// Time step too large for the explicit treatment of the nonlinear term.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace gkdv
