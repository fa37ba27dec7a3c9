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

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nhb/types.hpp"

namespace nhb {

struct IntegratorConfig {
  std::string method = "dopri5";  ///< embedded Runge-Kutta 5(4), error-controlled
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.0;  ///< 0: unlimited
  std::vector<double> sample_times;

  void validate(double tau) const;
  IntegratorConfig scaled(double factor) const;
};

struct IntegratorReport {
  std::string method;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::size_t steps = 0;
};

/// dy/dt = f(t, y)
using ComplexRhs = std::function<void(double t, const CVector& y, CVector& dydt)>;
using SampleObserver = std::function<void(std::size_t index, double t, const CVector& y)>;

/// Integrates from times.front() and reports the state at every sample time;
/// steps are clipped to land on each sample exactly.
IntegratorReport integrate(const ComplexRhs& rhs, CVector y, const std::vector<double>& times,
                           const IntegratorConfig& cfg, const SampleObserver& observer);

/// Uniform grid of \p count points on [0, tau].
std::vector<double> uniform_grid(double tau, std::size_t count);

}  // namespace nhb
