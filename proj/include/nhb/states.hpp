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

#include <memory>
#include <string>
#include <vector>

#include "nhb/fock_space.hpp"

namespace nhb {

enum class StateKind { pure, density };
enum class Frame { laboratory, rotated };

std::string to_string(Frame frame);

struct TruncationReport {
  double retained_mass = 1.0;   ///< mass of the untruncated state kept by the cutoff
  double discarded_mass = 0.0;  ///< tail mass above the cutoff
};

/// Pure vector or density operator on a FockSpace.
///
/// Density operators are stored as an ensemble sum_i w_i |c_i><c_i| so that
/// evolution can act on components; the dense matrix is assembled on demand.
/// Components need not be normalized.
class QuantumState {
 public:
  using SpacePtr = std::shared_ptr<const FockSpace>;

  static QuantumState pure(SpacePtr space, CVector psi, Frame frame = Frame::laboratory,
                           TruncationReport report = {});
  static QuantumState ensemble(SpacePtr space, std::vector<double> weights,
                               std::vector<CVector> components,
                               Frame frame = Frame::laboratory, TruncationReport report = {});
  /// Hermitian positive semidefinite rho, stored through its eigendecomposition.
  static QuantumState density(SpacePtr space, const CMatrix& rho,
                              Frame frame = Frame::laboratory);

  StateKind kind() const { return kind_; }
  Frame frame() const { return frame_; }
  const SpacePtr& space() const { return space_; }
  const TruncationReport& truncation() const { return truncation_; }

  /// Pure-state vector. Throws ConfigError for density states.
  const CVector& vector() const;
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<CVector>& components() const { return components_; }

  /// Squared norm (pure) or trace (density).
  double norm_tracked() const;
  /// Dense density operator (|psi><psi| for pure states).
  CMatrix matrix() const;
  /// <psi| O |psi> summed over components.
  Complex expectation(const CMatrix& op) const;
  /// Probability weight of a basis index: <n|rho|n>.
  double population(std::size_t index) const;

  QuantumState with_frame(Frame frame) const;

 private:
  QuantumState() = default;

  StateKind kind_ = StateKind::pure;
  Frame frame_ = Frame::laboratory;
  SpacePtr space_;
  std::vector<double> weights_;
  std::vector<CVector> components_;
  TruncationReport truncation_;
};

inline constexpr double kDefaultTailThreshold = 1e-6;

QuantumState fock_state(const QuantumState::SpacePtr& space, const std::vector<int>& occupations);

/// Single-mode states placed in \p mode, all other modes in vacuum.
QuantumState coherent_state(const QuantumState::SpacePtr& space, int mode, Complex alpha,
                            double tail_threshold = kDefaultTailThreshold);
QuantumState cat_state(const QuantumState::SpacePtr& space, int mode, Complex alpha,
                       double tail_threshold = kDefaultTailThreshold);
/// (sqrt(3)|2> + |6>)/2
QuantumState binomial_code_state(const QuantumState::SpacePtr& space, int mode);
QuantumState thermal_state(const QuantumState::SpacePtr& space, int mode, double nbar,
                           double tail_threshold = kDefaultTailThreshold);

/// Embeds single-mode amplitudes c_n (n = 0..len-1) in \p mode.
CVector single_mode_vector(const FockSpace& space, int mode, const CVector& amplitudes);

/// <psi|rho|psi>, not clamped to 1.
double fidelity(const QuantumState& rho, const QuantumState& psi);

/// Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2 with sigma a
/// density state; reduces to fidelity() when sigma is pure. Computed on the
/// support of sigma, so rho may be unnormalized or large.
double fidelity_mixed(const QuantumState& rho, const QuantumState& sigma);

}  // namespace nhb
