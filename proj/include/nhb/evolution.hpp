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
#include <map>
#include <string>
#include <vector>

#include "nhb/integrator.hpp"
#include "nhb/pulses.hpp"
#include "nhb/states.hpp"

namespace nhb {

struct TrajectoryMetadata {
  std::string schedule_hash;
  std::vector<int> cutoffs;
  IntegratorReport integrator;
  bool sector_blocks = true;
};

/// Time-indexed evolution record. When states are not kept, `states` holds
/// only the final state.
struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::map<std::string, std::vector<double>> observables;
  TrajectoryMetadata metadata;

  const QuantumState& final_state() const { return states.back(); }
  void add_series(const std::string& name, std::vector<double> values);
  const std::vector<double>& series(const std::string& name) const;
};

/// Ha(t) for the quadratic Hamiltonian sum_jk Ha_jk a_j^dag a_k.
using CoefficientFn = std::function<CMatrix(double t)>;
using SampleHook = std::function<void(std::size_t index, double t, const QuantumState& state)>;

struct EvolutionOptions {
  bool use_sectors = true;  ///< integrate each total-number block separately
  bool keep_states = true;
  SampleHook on_sample;  ///< called once per sample time, in order
};

/// i d|c>/dt = H(t)|c> for every component of \p initial, never renormalized.
/// Sample times default to cfg.sample_times (or {0, t_end}).
Trajectory evolve_coefficients(const CoefficientFn& ha, const QuantumState& initial,
                               const IntegratorConfig& cfg, const EvolutionOptions& options = {});

/// Evolution under H(t) built from the synthesized pulses.
Trajectory evolve_ket(const ControlSchedule& s, const QuantumState& psi0,
                      const IntegratorConfig& cfg, const EvolutionOptions& options = {});
/// Evolution under H(t)^dag.
Trajectory evolve_dual(const ControlSchedule& s, const QuantumState& phi0,
                       const IntegratorConfig& cfg, const EvolutionOptions& options = {});
/// Ensemble evolution, equivalent to d rho/dt = -i (H rho - rho H^dag).
Trajectory evolve_density(const ControlSchedule& s, const QuantumState& rho0,
                          const IntegratorConfig& cfg, const EvolutionOptions& options = {});

struct PassageCheck {
  double overlap_deficit = 0.0;   ///< 1 - min_t |<frame state|psi>| / ||psi||
  double norm_ratio_error = 0.0;  ///< max_t | ||psi|| / exp(-n X) - 1 |
  std::vector<double> times;
  std::vector<double> overlap;
  std::vector<double> norm;
  std::vector<double> predicted_norm;
};

/// Starts from (mu^dag(0))^n / sqrt(n!) |vac> (mu_1 for the ket passage, mu_N
/// for the dual passage) and compares with the moving frame state.
PassageCheck passage_check(const ControlSchedule& s, int n, const IntegratorConfig& cfg,
                           Passage passage = Passage::ket);

std::string schedule_fingerprint(const ControlSchedule& s);

}  // namespace nhb
