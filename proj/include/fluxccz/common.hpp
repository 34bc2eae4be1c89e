// Copyright 2026 The fluxccz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Shared types, constants and error classes.
//
// Unit conventions used throughout the library:
//   * energies and Hamiltonians are stored as H/h in GHz,
//   * times are in ns,
//   * factors of 2*pi are written explicitly wherever a frequency enters a
//     phase, i.e. a state with energy E evolves as exp(-2*pi*i*E*t).

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fluxccz {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline constexpr double kHzPerGHz = 1e9;
inline constexpr double kNsPerUs = 1e3;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to meet its accuracy contract
/// (grid too small, norm drift, trace increase, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Dressed-state labeling broke down: a computational label is missing or
/// its overlap is too small for the dispersive picture to hold.
class LabelingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A grid search ended on the boundary of its search window.
class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

/// Largest absolute entry of M - M^dagger.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Wrap an angle into (-pi, pi].
inline double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

}  // namespace fluxccz
