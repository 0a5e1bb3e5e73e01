#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace trappair {

//! Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Invalid input (bad parameter value, pole argument, empty grid, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

//! An iterative method failed to reach its tolerance.
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg,
                        double residual = std::numeric_limits<double>::quiet_NaN())
      : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

//! A configured memory/size budget would be exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
};

//! A value left a tabulated or interpolated range (no silent extrapolation).
class RangeError : public Error {
public:
  using Error::Error;
};

//! An object was used before the state it requires was established.
class StateError : public Error {
public:
  using Error::Error;
};

//! A renormalized low-dimensional coupling hit its confinement-induced
//! resonance pole.  Carries the critical scattering length.
class ResonanceError : public Error {
public:
  ResonanceError(const std::string& msg, double critical_a_over_d)
      : Error(msg), critical_a_over_d_(critical_a_over_d) {}
  double critical_a_over_d() const { return critical_a_over_d_; }

private:
  double critical_a_over_d_;
};

} // namespace trappair
