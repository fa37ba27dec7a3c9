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

#include "nhb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

namespace nhb {

namespace fs = std::filesystem;

std::string preset_directory() {
  if (const char* env = std::getenv("NHB_PRESET_DIR"); env && *env) return env;
  return NHB_PRESET_DIR;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  const fs::path dir(preset_directory());
  if (!fs::is_directory(dir)) return names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
}

Json load_preset(const std::string& name) {
  const fs::path path = fs::path(preset_directory()) / (name + ".json");
  if (!fs::exists(path)) throw ConfigError("unknown preset '" + name + "'");
  return read_json_file(path);
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

void check_keys(const Json& j, const std::string& field, std::initializer_list<const char*> keys) {
  if (!j.is_object()) field_error(field, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      field_error(field.empty() ? it.key() : field + "." + it.key(), "unknown field");
    }
  }
}

std::string join(const std::string& field, const char* key) {
  return field.empty() ? std::string(key) : field + "." + key;
}

double number(const Json& j, const char* key, const std::string& field, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) field_error(join(field, key), "expected a number");
  return v.get<double>();
}

bool boolean(const Json& j, const char* key, const std::string& field, bool fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_boolean()) field_error(join(field, key), "expected true or false");
  return v.get<bool>();
}

std::string text(const Json& j, const char* key, const std::string& field,
                 const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_string()) field_error(join(field, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const char* key, const std::string& field) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const Json& v = j.at(key);
  if (!v.is_array()) field_error(join(field, key), "expected an array of numbers");
  for (const auto& x : v) {
    if (!x.is_number()) field_error(join(field, key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> integers(const Json& v, const std::string& field) {
  std::vector<int> out;
  if (!v.is_array()) field_error(field, "expected an array of integers");
  for (const auto& x : v) {
    if (!x.is_number_integer()) field_error(field, "expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

Complex complex_value(const Json& j, const char* key, const std::string& field, Complex fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  field_error(join(field, key), "expected a number or [re, im]");
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

StateSpec parse_state(const Json& j, const std::string& field) {
  check_keys(j, field, {"type", "occupations", "mode", "alpha", "nbar", "tail_threshold"});
  StateSpec s;
  s.type = text(j, "type", field, "fock");
  if (j.contains("occupations")) s.occupations = integers(j.at("occupations"), field + ".occupations");
  s.mode = static_cast<int>(number(j, "mode", field, 0.0));
  s.alpha = complex_value(j, "alpha", field, {0.0, 0.0});
  s.nbar = number(j, "nbar", field, 0.0);
  s.tail_threshold = number(j, "tail_threshold", field, kDefaultTailThreshold);
  static const std::set<std::string> types{"fock", "coherent", "cat", "binomial", "thermal"};
  if (!types.count(s.type)) {
    field_error(field + ".type", "unknown state type '" + s.type +
                                     "' (expected fock, coherent, cat, binomial or thermal)");
  }
  if (s.type == "fock" && s.occupations.empty()) {
    field_error(field + ".occupations", "required for a Fock state");
  }
  if (s.type == "thermal" && !(s.nbar >= 0.0)) field_error(field + ".nbar", "must be >= 0");
  if (!(s.tail_threshold > 0.0)) field_error(field + ".tail_threshold", "must be > 0");
  return s;
}

Checkpoint parse_checkpoint(const Json& j, const std::string& field) {
  check_keys(j, field, {"name", "group", "type", "observable", "t", "value", "tol", "t_tol",
                        "t_from", "times", "sweep", "lambda"});
  Checkpoint c;
  c.name = text(j, "name", field, "");
  c.group = text(j, "group", field, "");
  c.type = text(j, "type", field, "value");
  c.observable = text(j, "observable", field, "");
  c.t = number(j, "t", field, 0.0);
  c.value = number(j, "value", field, 0.0);
  c.tol = number(j, "tol", field, 0.0);
  c.t_tol = number(j, "t_tol", field, 0.0);
  c.t_from = number(j, "t_from", field, 0.0);
  c.times = numbers(j, "times", field);
  c.sweep = numbers(j, "sweep", field);
  if (j.contains("lambda")) c.lambda = number(j, "lambda", field, 0.0);
  static const std::set<std::string> types{"value",           "peak",           "max_after",
                                           "ep_times",        "pt_real_spectrum",
                                           "scalar_below",    "nonreciprocity_inset"};
  if (!types.count(c.type)) field_error(field + ".type", "unknown checkpoint type '" + c.type + "'");
  if (c.name.empty()) field_error(field + ".name", "required");
  return c;
}

Json checkpoint_json(const Checkpoint& c) {
  Json j;
  j["name"] = c.name;
  j["group"] = c.group;
  j["type"] = c.type;
  j["observable"] = c.observable;
  j["t"] = c.t;
  j["value"] = c.value;
  j["tol"] = c.tol;
  j["t_tol"] = c.t_tol;
  j["t_from"] = c.t_from;
  j["times"] = c.times;
  j["sweep"] = c.sweep;
  if (c.lambda) j["lambda"] = *c.lambda;
  return j;
}

Json schedule_json(const ScalarSchedule& s) {
  switch (s.kind()) {
    case ScalarSchedule::Kind::polynomial:
      return {{"type", "polynomial"}, {"coefficients", s.coefficients()}};
    case ScalarSchedule::Kind::harmonic: {
      const auto& c = s.coefficients();
      return {{"type", "harmonic"}, {"offset", c[0]}, {"amplitude", c[1]}, {"omega", c[2]},
              {"phase", c[3]}};
    }
    case ScalarSchedule::Kind::custom:
      break;
  }
  throw ConfigError("custom schedules cannot be serialized");
}

}  // namespace

ScalarSchedule schedule_from_json(const Json& j, double tau, const std::string& field) {
  if (j.is_number()) return ScalarSchedule::constant(j.get<double>());
  check_keys(j, field, {"type", "value", "coefficients", "offset", "amplitude", "omega", "phase"});
  const std::string type = text(j, "type", field, "constant");
  if (type == "linear") return theta_linear(tau);
  if (type == "constant") return ScalarSchedule::constant(number(j, "value", field, 0.0));
  if (type == "polynomial") {
    auto c = numbers(j, "coefficients", field);
    if (c.empty()) field_error(field + ".coefficients", "required");
    return ScalarSchedule::polynomial(std::move(c));
  }
  if (type == "harmonic") {
    return ScalarSchedule::harmonic(number(j, "offset", field, 0.0),
                                    number(j, "amplitude", field, 0.0),
                                    number(j, "omega", field, 0.0), number(j, "phase", field, 0.0));
  }
  field_error(field + ".type", "unknown schedule type '" + type +
                                   "' (expected linear, constant, polynomial or harmonic)");
}

Json state_to_json(const StateSpec& s) {
  Json j;
  j["type"] = s.type;
  if (s.type == "fock") j["occupations"] = s.occupations;
  if (s.type != "fock") j["mode"] = s.mode;
  if (s.type == "coherent" || s.type == "cat") j["alpha"] = complex_json(s.alpha);
  if (s.type == "thermal") j["nbar"] = s.nbar;
  if (s.type == "coherent" || s.type == "cat" || s.type == "thermal") {
    j["tail_threshold"] = s.tail_threshold;
  }
  return j;
}

Json load_config_json(const std::string& preset_or_path) {
  const fs::path path(preset_or_path);
  Json doc;
  if (fs::exists(path) && fs::is_regular_file(path)) {
    doc = read_json_file(path);
  } else if (preset_or_path.find('/') == std::string::npos &&
             preset_or_path.find(".json") == std::string::npos) {
    doc = Json{{"preset", preset_or_path}};
  } else {
    throw ConfigError("cannot open config file '" + preset_or_path + "'");
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("config_hash")) {
    doc = doc.at("config");
  }
  return doc;
}

ExperimentConfig parse_config(const Json& input, const ConfigOverrides& overrides) {
  if (!input.is_object()) throw ConfigError("config: expected a JSON object");
  Json doc = input;
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) field_error("preset", "expected a string");
    Json base = load_preset(doc.at("preset").get<std::string>());
    if (!base.contains("name")) base["name"] = doc.at("preset");
    doc.erase("preset");
    base.merge_patch(doc);
    doc = std::move(base);
  }
  check_keys(doc, "", {"name", "description", "kind", "passage", "schedule", "space",
                       "initial_state", "target_state", "integrator", "outputs", "checkpoints",
                       "lindblad", "verify"});

  ExperimentConfig c;
  c.name = text(doc, "name", "", "custom");
  c.kind = text(doc, "kind", "", "transfer");
  if (c.kind != "transfer" && c.kind != "lindblad") {
    field_error("kind", "expected transfer or lindblad");
  }
  c.passage = passage_from_string(text(doc, "passage", "", "ket"));

  // Schedule.
  const Json sched = doc.value("schedule", Json::object());
  check_keys(sched, "schedule", {"tau", "theta", "alpha", "phi", "phi_a", "Theta", "lambda",
                                 "rates", "gamma_sign", "gamma_a", "gamma_b", "Gamma"});
  ControlSchedule& s = c.schedule;
  s.tau = number(sched, "tau", "schedule", 1.0);
  if (!(s.tau > 0.0)) field_error("schedule.tau", "must be > 0");
  c.theta_spec = sched.value("theta", Json{{"type", "linear"}});
  c.alpha_spec = sched.value("alpha", Json{{"type", "constant"}, {"value", 0.0}});
  s.theta = schedule_from_json(c.theta_spec, s.tau, "schedule.theta");
  s.alpha = schedule_from_json(c.alpha_spec, s.tau, "schedule.alpha");
  s.phi = number(sched, "phi", "schedule", kPi / 2.0);
  s.phi_a = number(sched, "phi_a", "schedule", 0.0);
  s.Theta = number(sched, "Theta", "schedule", 0.0);
  s.lambda = overrides.lambda.value_or(number(sched, "lambda", "schedule", 0.0));
  if (!(s.lambda >= 0.0)) field_error("schedule.lambda", "must be >= 0");
  c.rates = text(sched, "rates", "schedule", "lambda-rule");
  if (overrides.lambda || overrides.gamma_sign) c.rates = "lambda-rule";
  c.gamma_sign = overrides.gamma_sign.value_or(
      gamma_sign_from_string(text(sched, "gamma_sign", "schedule", "norm-restoring")));
  s.gamma_a = number(sched, "gamma_a", "schedule", 0.0);
  s.gamma_b = number(sched, "gamma_b", "schedule", s.gamma_a);
  s.Gamma = number(sched, "Gamma", "schedule", 0.0);
  try {
    if (c.rates == "lambda-rule") {
      apply_lambda_rule(s, c.gamma_sign, c.passage);
    } else if (c.rates != "explicit") {
      field_error("schedule.rates", "expected lambda-rule or explicit");
    }
    s.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("field '", 0) == 0) throw;
    field_error("schedule", msg);
  }

  // Space and states.
  if (doc.contains("space")) {
    const Json& sp = doc.at("space");
    check_keys(sp, "space", {"cutoffs"});
    if (sp.contains("cutoffs")) c.cutoffs = integers(sp.at("cutoffs"), "space.cutoffs");
  }
  if (c.cutoffs.size() != 2) field_error("space.cutoffs", "expected two cutoffs");
  for (int k : c.cutoffs) {
    if (k < 1) field_error("space.cutoffs", "every cutoff must be >= 1");
  }
  if (c.kind == "transfer") {
    if (!doc.contains("initial_state")) field_error("initial_state", "required");
    c.initial = parse_state(doc.at("initial_state"), "initial_state");
    if (doc.contains("target_state") && !doc.at("target_state").is_null()) {
      const Json& t = doc.at("target_state");
      if (!(t.is_string() && t.get<std::string>() == "transfer")) {
        c.target = parse_state(t, "target_state");
      }
    }
  }

  // Integrator.
  const Json integ = doc.value("integrator", Json::object());
  check_keys(integ, "integrator", {"method", "rel_tol", "abs_tol", "max_step", "use_sectors"});
  c.integrator.method = text(integ, "method", "integrator", "dopri5");
  c.integrator.rel_tol = number(integ, "rel_tol", "integrator", 1e-10) * overrides.tol_scale;
  c.integrator.abs_tol = number(integ, "abs_tol", "integrator", 1e-10) * overrides.tol_scale;
  c.integrator.max_step = number(integ, "max_step", "integrator", 0.0);
  c.use_sectors = boolean(integ, "use_sectors", "integrator", true);
  if (!(c.integrator.rel_tol > 0.0) || !(c.integrator.abs_tol > 0.0)) {
    field_error("integrator", "tolerances must be > 0");
  }
  if (c.integrator.method != "dopri5") field_error("integrator.method", "expected dopri5");

  // Outputs.
  const Json out = doc.value("outputs", Json::object());
  check_keys(out, "outputs", {"samples", "fidelities", "sum_fidelity", "target_fidelity",
                              "spectrum", "phase", "scattering", "gamma_1"});
  const double samples = number(out, "samples", "outputs", 1001.0);
  if (samples < 2 || samples != std::floor(samples)) {
    field_error("outputs.samples", "expected an integer >= 2");
  }
  c.outputs.samples = static_cast<std::size_t>(samples);
  if (out.contains("fidelities")) {
    const Json& f = out.at("fidelities");
    if (!f.is_array()) field_error("outputs.fidelities", "expected a list of occupation pairs");
    for (const auto& occ : f) c.outputs.fidelities.push_back(integers(occ, "outputs.fidelities"));
  }
  c.outputs.sum_fidelity = boolean(out, "sum_fidelity", "outputs", false);
  c.outputs.target_fidelity = boolean(out, "target_fidelity", "outputs", c.kind == "transfer");
  c.outputs.spectrum = boolean(out, "spectrum", "outputs", c.kind == "transfer");
  c.outputs.phase = boolean(out, "phase", "outputs", c.kind == "transfer");
  c.outputs.scattering = boolean(out, "scattering", "outputs", false);
  if (out.contains("gamma_1") && !out.at("gamma_1").is_null()) {
    c.outputs.gamma_1 = number(out, "gamma_1", "outputs", 0.0);
    if (!(*c.outputs.gamma_1 >= 0.0)) field_error("outputs.gamma_1", "must be >= 0");
  }

  // Checkpoints.
  if (doc.contains("checkpoints")) {
    const Json& cps = doc.at("checkpoints");
    if (!cps.is_array()) field_error("checkpoints", "expected an array");
    for (std::size_t i = 0; i < cps.size(); ++i) {
      c.checkpoints.push_back(parse_checkpoint(cps[i], "checkpoints[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("lindblad")) {
    const Json& l = doc.at("lindblad");
    check_keys(l, "lindblad", {"draws", "seed", "cutoff", "t_end", "samples", "max_rate",
                               "alpha", "beta"});
    c.lindblad.draws = static_cast<int>(number(l, "draws", "lindblad", 20));
    c.lindblad.seed = static_cast<std::uint64_t>(number(l, "seed", "lindblad", 20240601));
    c.lindblad.cutoff = static_cast<int>(number(l, "cutoff", "lindblad", 4));
    c.lindblad.t_end = number(l, "t_end", "lindblad", 1.0);
    c.lindblad.samples = static_cast<std::size_t>(number(l, "samples", "lindblad", 21));
    c.lindblad.max_rate = number(l, "max_rate", "lindblad", 1.0);
    c.lindblad.alpha = complex_value(l, "alpha", "lindblad", c.lindblad.alpha);
    c.lindblad.beta = complex_value(l, "beta", "lindblad", c.lindblad.beta);
    if (c.lindblad.draws < 1) field_error("lindblad.draws", "must be >= 1");
    if (c.lindblad.cutoff < 1) field_error("lindblad.cutoff", "must be >= 1");
    if (c.lindblad.samples < 2) field_error("lindblad.samples", "must be >= 2");
    if (!(c.lindblad.t_end > 0.0)) field_error("lindblad.t_end", "must be > 0");
  }

  if (doc.contains("verify")) {
    const Json& v = doc.at("verify");
    check_keys(v, "verify", {"sweep"});
    if (v.contains("sweep")) {
      const Json& sw = v.at("sweep");
      check_keys(sw, "verify.sweep", {"param", "values"});
      c.verify_sweep_param = text(sw, "param", "verify.sweep", "lambda");
      c.verify_sweep_values = numbers(sw, "values", "verify.sweep");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& preset_or_path, const ConfigOverrides& overrides) {
  return parse_config(load_config_json(preset_or_path), overrides);
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["kind"] = c.kind;
  j["passage"] = to_string(c.passage);
  const ControlSchedule& s = c.schedule;
  j["schedule"] = {{"tau", s.tau},
                   {"theta", schedule_json(s.theta)},
                   {"alpha", schedule_json(s.alpha)},
                   {"phi", s.phi},
                   {"phi_a", s.phi_a},
                   {"Theta", s.Theta},
                   {"lambda", s.lambda},
                   {"rates", "explicit"},
                   {"gamma_sign", to_string(c.gamma_sign)},
                   {"gamma_a", s.gamma_a},
                   {"gamma_b", s.gamma_b},
                   {"Gamma", s.Gamma}};
  j["space"] = {{"cutoffs", c.cutoffs}};
  if (c.kind == "transfer") {
    j["initial_state"] = state_to_json(c.initial);
    j["target_state"] = c.target ? state_to_json(*c.target) : Json("transfer");
  }
  j["integrator"] = {{"method", c.integrator.method},
                     {"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step", c.integrator.max_step},
                     {"use_sectors", c.use_sectors}};
  Json out;
  out["samples"] = c.outputs.samples;
  out["fidelities"] = c.outputs.fidelities;
  out["sum_fidelity"] = c.outputs.sum_fidelity;
  out["target_fidelity"] = c.outputs.target_fidelity;
  out["spectrum"] = c.outputs.spectrum;
  out["phase"] = c.outputs.phase;
  out["scattering"] = c.outputs.scattering;
  out["gamma_1"] = c.outputs.gamma_1 ? Json(*c.outputs.gamma_1) : Json(nullptr);
  j["outputs"] = out;
  Json cps = Json::array();
  for (const auto& cp : c.checkpoints) cps.push_back(checkpoint_json(cp));
  j["checkpoints"] = cps;
  if (c.kind == "lindblad") {
    j["lindblad"] = {{"draws", c.lindblad.draws},
                     {"seed", c.lindblad.seed},
                     {"cutoff", c.lindblad.cutoff},
                     {"t_end", c.lindblad.t_end},
                     {"samples", c.lindblad.samples},
                     {"max_rate", c.lindblad.max_rate},
                     {"alpha", complex_json(c.lindblad.alpha)},
                     {"beta", complex_json(c.lindblad.beta)}};
  }
  if (!c.verify_sweep_param.empty()) {
    j["verify"] = {{"sweep", {{"param", c.verify_sweep_param}, {"values", c.verify_sweep_values}}}};
  }
  return j;
}

Json with_parameter(Json doc, const std::string& param, double value) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  if (param == "lambda") {
    doc["schedule"]["lambda"] = value;
    doc["schedule"]["rates"] = "lambda-rule";
  } else if (param == "gamma_1") {
    doc["outputs"]["gamma_1"] = value;
  } else if (param == "cutoff") {
    if (value < 1 || value != std::floor(value)) throw ConfigError("cutoff must be an integer >= 1");
    const int k = static_cast<int>(value);
    doc["space"]["cutoffs"] = Json::array({k, k});
  } else if (param == "tol") {
    if (!(value > 0.0)) throw ConfigError("tol must be > 0");
    doc["integrator"]["rel_tol"] = value;
    doc["integrator"]["abs_tol"] = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected lambda, gamma_1, cutoff or tol)");
  }
  return doc;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nhb
