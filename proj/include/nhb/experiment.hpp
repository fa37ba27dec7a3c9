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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nhb/config.hpp"
#include "nhb/states.hpp"

namespace nhb {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  const std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

struct CheckpointResult {
  std::string name;
  std::string group;
  std::string type;
  bool applicable = true;
  bool pass = false;
  double target = 0.0;
  double tol = 0.0;
  double measured = 0.0;
  double measured_t = 0.0;
  std::string detail;
};

struct ResultBundle {
  ExperimentConfig config;
  Table table;
  std::map<std::string, double> scalars;
  std::vector<double> ep_times;
  std::vector<CheckpointResult> checkpoints;
  Json provenance;

  bool all_pass() const;
};

QuantumState make_state(const QuantumState::SpacePtr& space, const StateSpec& spec);

/// Image of \p initial under the passage: every excitation of the mode that
/// carries mu(0) moves to the mode carrying mu(tau), picking up the passage
/// phase exp(-i f_r(tau)) and the frame phase.
QuantumState transfer_target(const QuantumState& initial, const ControlSchedule& s,
                             Passage passage, double f_r_tau);

ResultBundle run_experiment(const ExperimentConfig& config);

/// Writes timeseries.csv, provenance.json and (when checkpoints exist)
/// checkpoints.json into \p dir.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

std::string format_double(double x);

}  // namespace nhb
