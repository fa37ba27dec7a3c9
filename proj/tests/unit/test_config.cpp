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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nhb/experiment.hpp"

using namespace nhb;
namespace fs = std::filesystem;

namespace {

std::string error_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nhb-test-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("every preset parses") {
  const std::vector<std::string> names = preset_names();
  CHECK(names.size() == 10);
  for (const auto& n : names) {
    const ExperimentConfig c = load_config(n);
    CHECK(c.name == n);
  }
  CHECK_THROWS_AS(load_config("fig9z"), ConfigError);
}

TEST_CASE("lambda rule is applied on load") {
  const ExperimentConfig c = load_config("fig3b");
  CHECK(c.schedule.gamma_a == doctest::Approx(0.6));
  CHECK(c.schedule.gamma_b == doctest::Approx(0.6));
  CHECK(c.schedule.Gamma == doctest::Approx(-0.3 * kPi));
  ConfigOverrides o;
  o.lambda = 0.5;
  o.gamma_sign = GammaSign::flipped;
  const ExperimentConfig d = load_config("fig3b", o);
  CHECK(d.schedule.gamma_a == doctest::Approx(0.25));
  CHECK(d.schedule.Gamma == doctest::Approx(kPi / 8.0));
}

TEST_CASE("expanded configs round-trip") {
  for (const auto& n : {"fig2a", "fig4d", "fig5", "lindblad-check"}) {
    const ExperimentConfig c = load_config(n);
    const Json j = to_json(c);
    CHECK(j.at("schedule").at("rates") == "explicit");
    const ExperimentConfig back = parse_config(j);
    CHECK(config_hash(back) == config_hash(c));
  }
}

TEST_CASE("field-level errors") {
  CHECK(error_of(Json{{"preset", "fig3a"}, {"schedule", {{"tau", -1.0}}}}).find("tau") != std::string::npos);
  CHECK(error_of(Json{{"preset", "fig3a"}, {"schedul", 1}}).find("'schedul'") != std::string::npos);
  CHECK(error_of(Json{{"preset", "fig3a"}, {"initial_state", {{"type", "squeezed"}}}})
            .find("initial_state") != std::string::npos);
  CHECK(error_of(Json{{"preset", "fig3a"}, {"outputs", {{"samples", 1}}}}).find("outputs.samples") !=
        std::string::npos);
  CHECK(error_of(Json{{"preset", "fig3a"}, {"schedule", {{"phi_a", 1.0}}}}).find("phi_a") !=
        std::string::npos);
}

TEST_CASE("sweep parameters") {
  const Json doc = load_config_json("fig5");
  CHECK(parse_config(with_parameter(doc, "lambda", 0.5)).schedule.lambda == 0.5);
  CHECK(parse_config(with_parameter(doc, "cutoff", 6)).cutoffs == std::vector<int>{6, 6});
  CHECK(*parse_config(with_parameter(doc, "gamma_1", 0.2)).outputs.gamma_1 == 0.2);
  CHECK(parse_config(with_parameter(doc, "tol", 1e-8)).integrator.rel_tol == 1e-8);
  CHECK_THROWS_AS(with_parameter(doc, "colour", 1.0), ConfigError);
}

TEST_CASE("user config files overlay a preset") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  std::ofstream(dir / "mine.json") << R"({"preset": "fig3a", "schedule": {"lambda": 0.8}, "space": {"cutoffs": [6, 6]}})";
  const ExperimentConfig c = load_config((dir / "mine.json").string());
  CHECK(c.schedule.lambda == 0.8);
  CHECK(c.cutoffs == std::vector<int>{6, 6});
  CHECK(c.schedule.gamma_a == doctest::Approx(0.4));
}

TEST_CASE("transfer run produces the table and provenance") {
  ExperimentConfig c = load_config("fig3b");
  c.outputs.samples = 101;
  const ResultBundle b = run_experiment(c);
  for (const char* col : {"t_over_tau", "F_0_5", "sum_F", "trace", "F_target", "J", "Delta", "E_plus_re",
                          "E_minus_im", "f_r", "X"}) {
    CHECK(b.table.has_column(col));
  }
  CHECK(b.table.rows.size() == 101);
  CHECK(b.table.column("F_0_5").back() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.scalars.at("norm_restoration_residual") < 1e-10);
  CHECK(b.ep_times.size() == 1);
  CHECK(b.provenance.at("config_hash") == config_hash(c));
  CHECK(b.provenance.at("config").at("schedule").at("rates") == "explicit");

  const fs::path dir = scratch("bundle");
  write_bundle(b, dir);
  CHECK(fs::exists(dir / "timeseries.csv"));
  CHECK(fs::exists(dir / "provenance.json"));
  CHECK(fs::exists(dir / "checkpoints.json"));
  // A provenance record reloads as its config.
  const ExperimentConfig again = load_config((dir / "provenance.json").string());
  CHECK(config_hash(again) == config_hash(c));
}

TEST_CASE("wrong sign fails the final-fidelity checkpoint") {
  ConfigOverrides o;
  o.gamma_sign = GammaSign::flipped;
  ExperimentConfig c = load_config("fig3b", o);
  c.outputs.samples = 101;
  const ResultBundle b = run_experiment(c);
  CHECK_FALSE(b.all_pass());
  CHECK(b.table.column("F_0_5").back() < 0.01);
}

TEST_CASE("checkpoints tagged with another lambda are skipped") {
  ExperimentConfig c = load_config("fig5");
  c.outputs.samples = 201;
  const ResultBundle b = run_experiment(c);
  std::size_t skipped = 0;
  for (const auto& cp : b.checkpoints) {
    if (!cp.applicable) ++skipped;
  }
  CHECK(skipped == 4);
  CHECK(b.all_pass());
}
