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

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "nhb/experiment.hpp"
#include "nhb/verification.hpp"

namespace fs = std::filesystem;
using namespace nhb;

namespace {

constexpr int kOk = 0;
constexpr int kCheckpointFailure = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string default_out_dir() {
  const char* env = std::getenv("NHB_OUT_DIR");
  return env && *env ? env : "nhb-out";
}

void print_checkpoints(const ResultBundle& b, const std::string& label) {
  for (const auto& cp : b.checkpoints) {
    if (!cp.applicable) continue;
    std::printf("%s %s %s: %s\n", cp.pass ? "PASS" : "FAIL", label.c_str(), cp.name.c_str(),
                cp.detail.c_str());
  }
}

std::string bundle_label(const ResultBundle& b) {
  std::string label = b.config.name;
  if (!b.config.verify_sweep_param.empty()) {
    label += "[" + b.config.verify_sweep_param + "=" + format_double(b.config.schedule.lambda) + "]";
  }
  return label;
}

int cmd_run(const std::string& target, const ConfigOverrides& o, const std::string& out) {
  const ExperimentConfig c = load_config(target, o);
  const ResultBundle b = run_experiment(c);
  const fs::path dir = fs::path(out) / c.name;
  write_bundle(b, dir);
  std::printf("wrote %s\n", dir.string().c_str());
  for (const auto& [k, v] : b.scalars) std::printf("  %s = %s\n", k.c_str(), format_double(v).c_str());
  print_checkpoints(b, c.name);
  return b.all_pass() ? kOk : kCheckpointFailure;
}

int cmd_verify(const std::string& target, const ConfigOverrides& o, const std::string& out) {
  VerifyOptions opt;
  opt.overrides = o;
  opt.out_dir = out;
  if (target == "all") {
    bool ok = true;
    for (const auto& r : run_acceptance({}, opt)) {
      ok = ok && r.pass;
      std::printf("%s %s %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str());
      for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
    }
    return ok ? kOk : kCheckpointFailure;
  }
  bool ok = true;
  for (const auto& b : run_preset(target, opt)) {
    ok = ok && b.all_pass();
    print_checkpoints(b, bundle_label(b));
  }
  std::printf("%s %s\n", ok ? "PASS" : "FAIL", target.c_str());
  return ok ? kOk : kCheckpointFailure;
}

int cmd_sweep(const std::string& target, const std::string& param, const std::vector<double>& values,
              const ConfigOverrides& o, const std::string& out) {
  const Json doc = load_config_json(target);
  ConfigOverrides local = o;
  if (param == "lambda") local.lambda.reset();
  std::vector<ExperimentConfig> configs;
  for (double v : values) configs.push_back(parse_config(with_parameter(doc, param, v), local));
  std::vector<ResultBundle> bundles(configs.size());
  const fs::path base = fs::path(out) / (configs.empty() ? target : configs.front().name);
  parallel_for(configs.size(), [&](std::size_t i) {
    bundles[i] = run_experiment(configs[i]);
    write_bundle(bundles[i], base / (param + "=" + format_double(values[i])));
  });

  std::set<std::string> scalar_names;
  for (const auto& b : bundles) {
    for (const auto& [k, v] : b.scalars) scalar_names.insert(k);
  }
  std::vector<std::string> final_columns;
  if (!bundles.empty()) {
    for (const auto& col : bundles.front().table.columns) {
      if (col != "t_over_tau") final_columns.push_back(col);
    }
  }
  fs::create_directories(base);
  std::ofstream csv(base / "sweep.csv");
  csv << param;
  for (const auto& k : scalar_names) csv << ',' << k;
  for (const auto& col : final_columns) csv << ",final_" << col;
  csv << ",checkpoints_pass\n";
  bool ok = true;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const ResultBundle& b = bundles[i];
    ok = ok && b.all_pass();
    csv << format_double(values[i]);
    for (const auto& k : scalar_names) {
      const auto it = b.scalars.find(k);
      csv << ',' << (it == b.scalars.end() ? std::string() : format_double(it->second));
    }
    for (const auto& col : final_columns) {
      csv << ','
          << (b.table.has_column(col) && !b.table.rows.empty() ? format_double(b.table.column(col).back())
                                                              : std::string());
    }
    csv << ',' << (b.all_pass() ? 1 : 0) << '\n';
    print_checkpoints(b, b.config.name + "[" + param + "=" + format_double(values[i]) + "]");
  }
  std::printf("wrote %s\n", (base / "sweep.csv").string().c_str());
  return ok ? kOk : kCheckpointFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian bosonic state transfer simulator"};
  app.require_subcommand(1);
  std::string out = default_out_dir();
  double tol_scale = 1.0;
  std::string gamma_sign;
  std::optional<double> lambda;
  app.add_option("--out", out, "Output directory (default $NHB_OUT_DIR or ./nhb-out)");
  app.add_option("--tol-scale", tol_scale, "Scale factor for integrator tolerances")
      ->check(CLI::PositiveNumber);
  app.add_option("--gamma-sign", gamma_sign, "Sign of the dissipative coupling")
      ->check(CLI::IsMember({"literal", "norm-restoring", "flipped"}));
  app.add_option("--lambda", lambda, "Override the loss scale lambda");

  std::string run_target, verify_target, sweep_target, sweep_param;
  std::vector<double> sweep_values;
  auto* run = app.add_subcommand("run", "Run a config file or preset");
  run->add_option("config", run_target, "Config path or preset name")->required();
  auto* verify = app.add_subcommand("verify", "Check a preset's targets, or every criterion");
  verify->add_option("preset", verify_target, "Preset name or 'all'")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a preset over a list of parameter values");
  sweep->add_option("--param", sweep_param, "lambda, gamma_1, cutoff or tol")
      ->required()
      ->check(CLI::IsMember({"lambda", "gamma_1", "cutoff", "tol"}));
  // A single token so the positional preset is never swallowed.
  std::string sweep_values_text;
  sweep->add_option("--values", sweep_values_text, "Comma-separated parameter values")->required();
  sweep->add_option("preset", sweep_target, "Config path or preset name")->required();
  for (auto* sub : {run, verify, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    ConfigOverrides o;
    o.tol_scale = tol_scale;
    o.lambda = lambda;
    if (!gamma_sign.empty()) o.gamma_sign = gamma_sign_from_string(gamma_sign);
    if (*run) return cmd_run(run_target, o, out);
    if (*verify) return cmd_verify(verify_target, o, out);
    for (const std::string& item : CLI::detail::split(sweep_values_text, ',')) {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(CLI::detail::trim_copy(item), v))
        throw ConfigError("--values: not a number: " + item);
      sweep_values.push_back(v);
    }
    if (sweep_values.empty()) throw ConfigError("--values: empty list");
    return cmd_sweep(sweep_target, sweep_param, sweep_values, o, out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
