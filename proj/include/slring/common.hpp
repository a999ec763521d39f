#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slring {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Failure of an iterative numerical procedure (root finder, Newton solve,
/// integrator). The message carries the last iterate or offending estimate.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An asymptotic formula was requested outside its validity regime.
class OutOfRegimeError : public std::runtime_error {
 public:
  explicit OutOfRegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// Integer power of a complex number by repeated squaring. Exact operation
/// count, no exp/log round-trip.
inline Complex cpow_int(Complex base, int exponent) {
  if (exponent < 0) return 1.0 / cpow_int(base, -exponent);
  Complex result(1.0, 0.0);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

/// k-th n-th root of unity, exp(2*pi*i*k/n).
inline Complex root_of_unity(int n, int k) {
  const double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
  return Complex(std::cos(angle), std::sin(angle));
}

}  // namespace slring
