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

#include "nhb/schedule.hpp"

#include <cmath>

#include "nhb/types.hpp"

namespace nhb {

ScalarSchedule ScalarSchedule::constant(double c) { return polynomial({c}); }

ScalarSchedule ScalarSchedule::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ConfigError("schedule: non-finite polynomial coefficient");
  }
  ScalarSchedule s;
  s.kind_ = Kind::polynomial;
  s.coefficients_ = std::move(coefficients);
  return s;
}

ScalarSchedule ScalarSchedule::harmonic(double offset, double amplitude, double omega,
                                        double phase) {
  for (double c : {offset, amplitude, omega, phase}) {
    if (!std::isfinite(c)) throw ConfigError("schedule: non-finite harmonic parameter");
  }
  ScalarSchedule s;
  s.kind_ = Kind::harmonic;
  s.coefficients_ = {offset, amplitude, omega, phase};
  return s;
}

ScalarSchedule ScalarSchedule::custom(std::function<double(double)> value,
                                      std::function<double(double)> derivative) {
  if (!value) throw ConfigError("schedule: custom schedule needs a value function");
  ScalarSchedule s;
  s.kind_ = Kind::custom;
  s.value_ = std::move(value);
  s.derivative_ = std::move(derivative);
  return s;
}

double ScalarSchedule::value(double t) const {
  switch (kind_) {
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    case Kind::harmonic:
      return coefficients_[0] + coefficients_[1] * std::sin(coefficients_[2] * t + coefficients_[3]);
    case Kind::custom:
      return value_(t);
  }
  return 0.0;
}

double ScalarSchedule::derivative(double t, double h) const {
  switch (kind_) {
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = coefficients_.size(); k-- > 1;) {
        acc = acc * t + static_cast<double>(k) * coefficients_[k];
      }
      return acc;
    }
    case Kind::harmonic:
      return coefficients_[1] * coefficients_[2] *
             std::cos(coefficients_[2] * t + coefficients_[3]);
    case Kind::custom:
      return derivative_ ? derivative_(t) : central_difference(t, h);
  }
  return 0.0;
}

double ScalarSchedule::central_difference(double t, double h) const {
  return (value(t + h) - value(t - h)) / (2.0 * h);
}

bool ScalarSchedule::is_constant() const {
  switch (kind_) {
    case Kind::polynomial:
      for (std::size_t k = 1; k < coefficients_.size(); ++k) {
        if (coefficients_[k] != 0.0) return false;
      }
      return true;
    case Kind::harmonic:
      return coefficients_[1] == 0.0 || coefficients_[2] == 0.0;
    case Kind::custom:
      return false;
  }
  return false;
}

}  // namespace nhb
