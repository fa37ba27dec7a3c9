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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhb/integrator.hpp"
#include "nhb/lindblad.hpp"
#include "nhb/pulses.hpp"

namespace nhb {

using Json = nlohmann::ordered_json;

/// Initial- or target-state factory description.
struct StateSpec {
  std::string type = "fock";  ///< fock | coherent | cat | binomial | thermal
  std::vector<int> occupations;
  int mode = 0;
  Complex alpha{0.0, 0.0};
  double nbar = 0.0;
  double tail_threshold = kDefaultTailThreshold;
};

struct OutputSpec {
  std::size_t samples = 1001;
  std::vector<std::vector<int>> fidelities;
  bool sum_fidelity = false;  ///< sum_n F_{N-n,n} over the initial excitation sector
  bool target_fidelity = true;
  bool spectrum = true;
  bool phase = true;
  bool scattering = false;
  std::optional<double> gamma_1;  ///< default: default_gamma_1(schedule)
};

/// A figure-level target evaluated on a run.
struct Checkpoint {
  std::string name;
  std::string group;
  std::string type;  ///< value | peak | max_after | ep_times | pt_real_spectrum | scalar_below | nonreciprocity_inset
  std::string observable;
  double t = 0.0;
  double value = 0.0;
  double tol = 0.0;
  double t_tol = 0.0;
  double t_from = 0.0;
  std::vector<double> times;
  std::vector<double> sweep;
  std::optional<double> lambda;  ///< only applies when the run uses this lambda
};

struct LindbladSpec {
  int draws = 20;
  std::uint64_t seed = 20240601;
  int cutoff = 4;
  double t_end = 1.0;
  std::size_t samples = 21;
  double max_rate = 1.0;
  Complex alpha{0.6, 0.2};
  Complex beta{-0.3, 0.4};
};

struct ExperimentConfig {
  std::string name;
  std::string kind = "transfer";  ///< transfer | lindblad
  ControlSchedule schedule;
  Json theta_spec;
  Json alpha_spec;
  std::string rates = "lambda-rule";  ///< lambda-rule | explicit
  GammaSign gamma_sign = GammaSign::norm_restoring;
  Passage passage = Passage::ket;
  std::vector<int> cutoffs{8, 8};
  StateSpec initial;
  std::optional<StateSpec> target;  ///< default: image of the initial state under the passage
  IntegratorConfig integrator;
  bool use_sectors = true;
  OutputSpec outputs;
  std::vector<Checkpoint> checkpoints;
  LindbladSpec lindblad;
  std::string verify_sweep_param;
  std::vector<double> verify_sweep_values;
};

/// Command-line adjustments applied after the preset and file are merged.
struct ConfigOverrides {
  std::optional<double> lambda;
  std::optional<GammaSign> gamma_sign;
  double tol_scale = 1.0;
};

std::string preset_directory();
std::vector<std::string> preset_names();

/// Loads a preset name or a JSON file; a file may name a preset as its base
/// and a provenance record is accepted through its "config" member.
Json load_config_json(const std::string& preset_or_path);
/// Merges onto the named preset (if any), validates and resolves rates.
ExperimentConfig parse_config(const Json& doc, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::string& preset_or_path,
                             const ConfigOverrides& overrides = {});

/// Fully explicit configuration; parse_config(to_json(c)) reproduces c.
Json to_json(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

/// Sets a sweepable parameter (lambda, gamma_1, cutoff, tol) on a config document.
Json with_parameter(Json doc, const std::string& param, double value);

ScalarSchedule schedule_from_json(const Json& j, double tau, const std::string& field);
Json state_to_json(const StateSpec& s);

}  // namespace nhb
