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

#include <string>
#include <vector>

#include "nhb/frames.hpp"
#include "nhb/schedule.hpp"

namespace nhb {

/// Parametrization of the two-mode cavity-magnon protocol. Rates in 1/tau.
struct ControlSchedule {
  ScalarSchedule theta;
  ScalarSchedule alpha;
  double phi = kPi / 2.0;
  double phi_a = 0.0;  ///< 0: loss on the cavity, pi: gain
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double Gamma = 0.0;
  double Theta = 0.0;
  double lambda = 0.0;
  double tau = 1.0;

  void validate() const;
  FrameParams frame() const;
};

/// theta(t) = pi t / (2 tau)
ScalarSchedule theta_linear(double tau);

struct PulseSample {
  double t = 0.0;
  double J = 0.0;
  double Delta = 0.0;
  CMatrix Ha;
};

/// Coefficient matrix of the cavity-magnon Hamiltonian for given J and Delta.
CMatrix coefficient_matrix(const ControlSchedule& s, double J, double Delta);

/// J(t), Delta(t) from the triangularization constraints, and Ha(t).
PulseSample synthesize_pulses(const ControlSchedule& s, double t);

/// Which ancillary operator carries the state: mu_1 under H, or mu_N under H^dag.
enum class Passage { ket, dual };

enum class GammaSign {
  paper_literal,   ///< Gamma = -lambda theta_dot / 2
  norm_restoring,  ///< sign certified by check_norm_restoration for the passage
  flipped,         ///< opposite of norm_restoring (negative control)
};

std::string to_string(GammaSign sign);
GammaSign gamma_sign_from_string(const std::string& name);
std::string to_string(Passage passage);
Passage passage_from_string(const std::string& name);

struct Rates {
  double gamma_a = 0.0;
  double Gamma = 0.0;
};

/// gamma_a = lambda theta_dot / pi, |Gamma| = lambda theta_dot / 2.
Rates rates_from_lambda(double lambda, double theta_dot, GammaSign sign,
                        Passage passage = Passage::ket);

/// Sets gamma_a = gamma_b and Gamma on \p s from its lambda and theta rate
/// (theta must be linear). Gain presets (phi_a = pi) get Gamma = 0.
void apply_lambda_rule(ControlSchedule& s, GammaSign sign, Passage passage = Passage::ket);

/// Real part of the passage phase and the loss accumulation X, with
/// ||psi(t)|| = exp(-n X(t)) for an n-excitation passage.
struct PhaseRecord {
  std::vector<double> times;
  std::vector<double> f_r;
  std::vector<double> X;
};

struct PhaseRates {
  double f_r = 0.0;
  double X = 0.0;
};

PhaseRates phase_rates(const ControlSchedule& s, double t, Passage passage = Passage::ket);

/// Cumulative integrals on \p grid (must start at 0 and increase).
PhaseRecord global_phase(const ControlSchedule& s, const std::vector<double>& grid,
                         Passage passage = Passage::ket);

/// |X(tau)|: zero when the passage ends with its initial norm.
double check_norm_restoration(const ControlSchedule& s, Passage passage = Passage::ket);

inline constexpr double kNormRestorationTol = 1e-8;

}  // namespace nhb
