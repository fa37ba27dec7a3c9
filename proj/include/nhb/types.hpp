// Copyright 2026 The nhbosonic Authors
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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhb {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (bad cutoff, unknown preset, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A requested object would exceed the configured memory budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Operands live in incompatible spaces or have mismatched shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Discarded probability mass of a truncated state exceeds the threshold.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// sin(phi + alpha) vanishes, so the coupling pulse J(t) is undefined.
class SingularPulse : public Error {
 public:
  using Error::Error;
};

/// sin(2 theta) vanishes while the detuning numerator does not.
class SingularDetuning : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not meet its tolerances.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The resolvent (omega - Ha)^-1 does not exist.
class SingularResolvent : public Error {
 public:
  using Error::Error;
};

}  // namespace nhb
