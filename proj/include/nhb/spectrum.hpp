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

#include <vector>

#include "nhb/pulses.hpp"

namespace nhb {

struct SpectrumPoint {
  double t = 0.0;
  Complex E_plus;
  Complex E_minus;
  Complex discriminant;  ///< radicand under the square root
  double gap = 0.0;      ///< |E_plus - E_minus|
};

/// Closed-form eigenvalues of the 2x2 coefficient matrix (principal root).
SpectrumPoint eigenvalues(const ControlSchedule& s, double t);

/// Eigenvalues on \p grid with branches assigned by nearest continuation.
std::vector<SpectrumPoint> eigenvalue_track(const ControlSchedule& s,
                                            const std::vector<double>& grid);

enum class PtPhase { unbroken, broken, exceptional, not_applicable };

struct PtClass {
  bool symmetric = false;
  PtPhase phase = PtPhase::not_applicable;
};

PtClass pt_classify(const ControlSchedule& s, double t);

/// Interior exceptional points: sign changes of the real discriminant and
/// interior minima of |discriminant|, refined to machine precision and kept
/// when the gap falls below 1e-6 max(|E|, 1/tau).
std::vector<double> detect_eps(const ControlSchedule& s, const std::vector<double>& grid);

/// Condition number of the column-normalized eigenvector matrix of \p m.
double eigenvector_condition(const CMatrix& m);

struct ScatteringSample {
  double t = 0.0;
  CMatrix S;
  double gamma_1 = 0.0;
  double omega = 0.0;
};

/// S = I - i K^dag (omega - Ha(t))^-1 K with K = sqrt(2 gamma_1) I.
ScatteringSample scattering_matrix(const ControlSchedule& s, double t, double gamma_1,
                                   double omega = 0.0);

/// gamma_a / 2, or 0.5 / tau when gamma_a vanishes.
double default_gamma_1(const ControlSchedule& s);

/// log10 |S21(tau) / S12(tau)| at omega = 0; +inf when S12 vanishes.
double nonreciprocity(const ControlSchedule& s, double gamma_1);

}  // namespace nhb
