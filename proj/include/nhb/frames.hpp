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

#include "nhb/fock_space.hpp"
#include "nhb/schedule.hpp"

namespace nhb {

/// Mixing angles theta_k(t) and phases alpha_k(t), k = 1..N-1 (stored 0-based).
struct FrameParams {
  int num_modes = 2;
  std::vector<ScalarSchedule> theta;
  std::vector<ScalarSchedule> alpha;
  double tau = 1.0;

  void validate() const;
};

/// Rows are the ancillary operators: mu_k = sum_j M_dagger(k, j) a_j.
struct FrameMatrix {
  CMatrix m_dagger;
  double t = 0.0;
};

struct GaugePotential {
  CMatrix A;
  double t = 0.0;
};

enum class GaugeMethod { analytic, finite_difference };

/// b_k of length k+1 (k = 0 gives the scalar 1).
CVector bright_vector(const FrameParams& params, int k, double t);

FrameMatrix frame_matrix(const FrameParams& params, double t);
/// Time derivative of M_dagger, by forward-mode differentiation of the recipe.
CMatrix frame_matrix_derivative(const FrameParams& params, double t);

/// A = -i (dM_dagger/dt) M. The finite-difference path uses step \p h
/// (default 1e-6 tau) on M_dagger.
GaugePotential gauge_potential(const FrameParams& params, double t,
                               GaugeMethod method = GaugeMethod::analytic, double h = 0.0);

/// M_dagger Ha M - A.
CMatrix rotated_coefficients(const CMatrix& Ha, const FrameParams& params, double t);

struct TriangularCheck {
  bool pass = false;
  double residual = 0.0;
};

TriangularCheck check_upper_triangular(const CMatrix& h, double tol);

enum class FactorOrder {
  alpha_theta,  ///< V_a1 V_t1 V_a2 V_t2 ...
  theta_alpha,  ///< V_t1 V_a1 V_t2 V_a2 ..., with alpha_k(t) in V_tk
};

/// Frame unitary V(t) with V^dag mu_k(t) V = mu_k(0), as a dense matrix.
CMatrix frame_unitary(const FockSpace& space, const FrameParams& params, double t,
                      FactorOrder order = FactorOrder::alpha_theta);

/// Dense matrix of mu_k(t) = sum_j M_dagger(k, j) a_j (k is 0-based).
CMatrix ancillary_operator(const FockSpace& space, const FrameParams& params, int k, double t);

/// (mu_k^dag(t))^n / sqrt(n!) |vac> (k is 0-based).
CVector ancillary_fock_state(const FockSpace& space, const FrameParams& params, int k, int n,
                             double t);

/// (sum_j c_j a_j^dag)^n / sqrt(n!) |vac>.
CVector creation_power_state(const FockSpace& space, const CVector& c, int n);

}  // namespace nhb
