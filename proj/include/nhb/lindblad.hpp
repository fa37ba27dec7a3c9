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

#include "nhb/evolution.hpp"

namespace nhb {

/// Open cavity-magnon model with a shared reservoir coupled through
/// c = u a + e^{i Theta} v b:
///   d rho/dt = -i[H, rho] + 2 eta L[c] + 2 beta L[a] + 2 chi L[b],
///   L[o] rho = o rho o^dag - {o^dag o, rho}/2,
///   H = omega_a a^dag a + omega_b b^dag b + J (e^{i phi} a^dag b + h.c.).
struct LindbladParams {
  double eta = 0.0;
  double beta = 0.0;
  double chi = 0.0;
  double u = 0.0;
  double v = 0.0;
  double Theta = 0.0;
  double omega_a = 0.0;
  double omega_b = 0.0;
  double J = 0.0;
  double phi = 0.0;

  void validate() const;
  double gamma_a() const { return eta * u * u + beta; }
  double gamma_b() const { return eta * v * v + chi; }
  double Gamma() const { return eta * u * v; }
  /// Effective non-Hermitian coefficient matrix governing the first moments.
  CMatrix effective_coefficients() const;
};

/// Full master-equation integration. Observables: trace, min_eigenvalue,
/// purity, a_re, a_im, b_re, b_im, n_a, n_b.
Trajectory evolve_lindblad(const LindbladParams& p, const QuantumState& rho0,
                           const IntegratorConfig& cfg, const EvolutionOptions& options = {});

/// Right-hand side of the master equation at \p rho.
CMatrix lindblad_rhs(const LindbladParams& p, const FockSpace& space, const CMatrix& rho);

struct FirstMomentCheck {
  double max_residual = 0.0;         ///< max of the two residuals below
  double derivative_residual = 0.0;  ///< d<a,b>/dt from the Lindbladian vs -i H_eff <a,b>
  double trajectory_residual = 0.0;  ///< <a,b>(t) vs the integrated linear system
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
};

FirstMomentCheck first_moment_check(const LindbladParams& p, const QuantumState& rho0,
                                    const IntegratorConfig& cfg);

/// Zeroes all amplitudes with total number above \p max_total and renormalizes.
QuantumState restrict_total(const QuantumState& state, int max_total);

}  // namespace nhb
