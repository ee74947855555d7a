#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stasim {

// Units: hbar = 1, energies and fields in rad/ns, time in ns.

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix3c = Eigen::Matrix<Complex<Scalar>, 3, 3>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

using Matrix3cd = Matrix3c<double>;
using Matrix2cd = Matrix2c<double>;
using Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

/// Converts a frequency f/2pi given in MHz to an angular frequency in rad/ns.
constexpr double mhz(double f_mhz) { return 2.0 * pi * f_mhz * 1e-3; }

/// Converts an angular frequency in rad/ns back to f/2pi in MHz.
constexpr double to_mhz(double omega) { return omega / (2.0 * pi * 1e-3); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The reference field vanished somewhere along the path (|B0| below 1e-9 rad/ns).
class GapClosure : public Error {
 public:
  using Error::Error;
};

/// Endpoint conditions required by the DRAG frame cannot be met.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class IntegratorFailure : public Error {
 public:
  using Error::Error;
};

class InvalidCalibration : public Error {
 public:
  using Error::Error;
};

class UndefinedAngle : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stasim
