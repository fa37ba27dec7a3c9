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
#include <string>
#include <vector>

#include "nhb/experiment.hpp"

namespace nhb {

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;
};

struct VerifyOptions {
  ConfigOverrides overrides;
  std::string out_dir;  ///< when non-empty, every run writes its bundle below it
};

/// Runs a preset, expanding its verify sweep into one bundle per value.
std::vector<ResultBundle> run_preset(const std::string& preset, const VerifyOptions& options = {});

/// Ids of all acceptance criteria, in report order.
std::vector<std::string> criterion_ids();

/// Evaluates the named criteria (all when \p ids is empty).
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids = {},
                                            const VerifyOptions& options = {});

/// Property suites, usable on their own.
CriterionResult triangularization_suite(const std::vector<std::string>& presets);
CriterionResult frame_conjugation_suite();
CriterionResult passage_suite(const std::vector<std::string>& presets);
CriterionResult number_conservation_suite();
CriterionResult hermitian_limit_suite();

/// Runs \p jobs concurrently on up to hardware_concurrency threads.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace nhb
