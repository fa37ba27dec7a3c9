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

#include <functional>
#include <string>
#include <vector>

namespace nhb {

/// Smooth real function of time with a first derivative.
///
/// Polynomial and harmonic schedules have analytic derivatives and can be
/// serialized; custom schedules fall back to central differences when no
/// derivative is supplied.
class ScalarSchedule {
 public:
  enum class Kind { polynomial, harmonic, custom };

  ScalarSchedule() : coefficients_{0.0} {}

  static ScalarSchedule constant(double c);
  /// sum_k c_k t^k
  static ScalarSchedule polynomial(std::vector<double> coefficients);
  /// offset + amplitude * sin(omega t + phase)
  static ScalarSchedule harmonic(double offset, double amplitude, double omega, double phase);
  static ScalarSchedule custom(std::function<double(double)> value,
                               std::function<double(double)> derivative = {});

  Kind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  double value(double t) const;
  /// Analytic when available, else central difference with step \p h.
  double derivative(double t, double h = 1e-6) const;
  bool has_analytic_derivative() const { return kind_ != Kind::custom || bool(derivative_); }
  double central_difference(double t, double h) const;

  /// True when the derivative is identically zero.
  bool is_constant() const;

 private:
  Kind kind_ = Kind::polynomial;
  std::vector<double> coefficients_;  // polynomial: c_k; harmonic: offset, amp, omega, phase
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
};

}  // namespace nhb
