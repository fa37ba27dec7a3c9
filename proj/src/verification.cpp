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

#include "nhb/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <filesystem>

#include "nhb/evolution.hpp"
#include "nhb/frames.hpp"
#include "nhb/spectrum.hpp"

namespace nhb {

namespace fs = std::filesystem;

void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(jobs, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::string sweep_label(const std::string& param, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.10g", param.c_str(), value);
  return buf;
}

char* fmt(char* buf, std::size_t n, const char* f, double a, double b = 0.0) {
  std::snprintf(buf, n, f, a, b);
  return buf;
}

}  // namespace

std::vector<ResultBundle> run_preset(const std::string& preset, const VerifyOptions& options) {
  const Json doc = load_config_json(preset);
  const ExperimentConfig base = parse_config(doc, options.overrides);
  std::vector<ResultBundle> out;
  if (base.verify_sweep_param.empty() ||
      (base.verify_sweep_param == "lambda" && options.overrides.lambda)) {
    out.push_back(run_experiment(base));
    if (!options.out_dir.empty()) write_bundle(out.back(), fs::path(options.out_dir) / preset);
    return out;
  }
  const auto& values = base.verify_sweep_values;
  out.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ExperimentConfig c =
        parse_config(with_parameter(doc, base.verify_sweep_param, values[i]), options.overrides);
    out[i] = run_experiment(c);
    if (!options.out_dir.empty()) {
      write_bundle(out[i], fs::path(options.out_dir) / preset /
                               sweep_label(base.verify_sweep_param, values[i]));
    }
  }
  return out;
}

namespace {

const std::vector<std::string> kTransferPresets{"fig2a", "fig2b", "fig3a", "fig3b", "fig5"};

struct PresetCriterion {
  std::string id;
  std::string title;
  std::vector<std::string> presets;
  std::string group;
};

const std::vector<PresetCriterion>& preset_criteria() {
  static const std::vector<PresetCriterion> list{
      {"fig2a-transfer", "Fock transfer, PT-symmetric, avoiding EPs (fig2a)", {"fig2a"}, "transfer"},
      {"fig2b-crossing-eps", "Fock transfer, PT-symmetric, crossing EPs (fig2b/2d)", {"fig2b"},
       "transfer"},
      {"fig3a-broken-phase", "Fock transfer, broken phase, no EPs (fig3a)", {"fig3a"}, "transfer"},
      {"fig3b-broken-with-ep", "Fock transfer, broken phase, with EP (fig3b/3d)", {"fig3b"},
       "transfer"},
      {"fig4-state-families", "Binomial, coherent, cat and thermal transfers (fig4a-d)",
       {"fig4a", "fig4b", "fig4c", "fig4d"}, "transfer"},
      {"fig5-absorber", "Unidirectional absorber fidelities (fig5)", {"fig5"}, "transfer"},
      {"pt-real-spectrum", "Real spectrum in the unbroken PT phase", {"fig2a", "fig2b"},
       "pt-spectrum"},
      {"lindblad-first-moments", "Lindblad first moments match the effective Hamiltonian",
       {"lindblad-check"}, "lindblad"},
      {"nonreciprocity-inset", "Nonreciprocity zero at lambda = 0 and increasing in lambda",
       {"fig5"}, "inset"},
  };
  return list;
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"triangularization", "frame-conjugation", "passage",
                                            "number-conservation", "hermitian-limit"};
  return ids;
}

}  // namespace

std::vector<std::string> criterion_ids() {
  std::vector<std::string> ids;
  for (const auto& c : preset_criteria()) ids.push_back(c.id);
  ids.insert(ids.end() - 2, suite_ids().begin(), suite_ids().end());
  return ids;
}

CriterionResult triangularization_suite(const std::vector<std::string>& presets) {
  CriterionResult r{"triangularization", "Rotated coefficients are upper triangular", true, {}};
  char buf[256];
  auto check = [&](const std::string& label, const ControlSchedule& s) {
    double worst = 0.0;
    const FrameParams frame = s.frame();
    for (double t : uniform_grid(s.tau, 1000)) {
      const CMatrix h = rotated_coefficients(synthesize_pulses(s, t).Ha, frame, t);
      worst = std::max(worst, check_upper_triangular(h, 1e-8).residual);
    }
    const bool ok = worst < 1e-8;
    r.pass = r.pass && ok;
    std::snprintf(buf, sizeof buf, "%s %s: max below-diagonal residual %.3g (limit 1e-8)",
                  ok ? "ok  " : "FAIL", label.c_str(), worst);
    r.details.push_back(buf);
  };
  for (const auto& p : presets) check(p, load_config(p).schedule);

  // A schedule with a moving phase alpha(t) exercises every term of the constraints.
  ControlSchedule s;
  s.theta = ScalarSchedule::harmonic(0.7, 0.3, 2.0, 0.1);
  s.alpha = ScalarSchedule::harmonic(0.2, 0.3, 3.0, -0.4);
  s.phi = 0.9;
  s.gamma_a = 0.4;
  s.gamma_b = 0.25;
  s.Gamma = -0.3;
  check("moving-phase schedule", s);
  s.phi_a = kPi;
  s.Theta = kPi;
  check("moving-phase schedule, gain, Theta = pi", s);
  return r;
}

CriterionResult frame_conjugation_suite() {
  CriterionResult r{"frame-conjugation", "Frame unitary maps mu_k(t) back to mu_k(0)", true, {}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  char buf[256];
  for (int n : {2, 3}) {
    const int cutoff = n == 2 ? 4 : 3;
    const FockSpace space = make_space(n, std::vector<int>(static_cast<std::size_t>(n), cutoff));
    FrameParams p;
    p.num_modes = n;
    for (int k = 0; k < n - 1; ++k) {
      p.theta.push_back(ScalarSchedule::harmonic(u(rng), u(rng), 2.0 + u(rng), u(rng)));
      p.alpha.push_back(ScalarSchedule::harmonic(u(rng), u(rng), 2.0 + u(rng), u(rng)));
    }
    std::vector<Eigen::Index> cols;
    for (std::size_t g = 0; g < space.dimension(); ++g) {
      if (space.total_number(g) <= cutoff) cols.push_back(static_cast<Eigen::Index>(g));
    }
    for (FactorOrder order : {FactorOrder::alpha_theta, FactorOrder::theta_alpha}) {
      double worst = 0.0, unitarity = 0.0;
      for (double t : {0.37, 0.81}) {
        const CMatrix v = frame_unitary(space, p, t, order);
        unitarity = std::max(unitarity,
                             (v.adjoint() * v - CMatrix::Identity(v.rows(), v.cols()))
                                 .cwiseAbs()
                                 .maxCoeff());
        for (int k = 0; k < n; ++k) {
          const CMatrix lhs = v.adjoint() * ancillary_operator(space, p, k, t) * v;
          const CMatrix rhs = ancillary_operator(space, p, k, 0.0);
          for (Eigen::Index c : cols) {
            worst = std::max(worst, (lhs.col(c) - rhs.col(c)).cwiseAbs().maxCoeff());
          }
        }
      }
      const bool ok = worst < 1e-8 && unitarity < 1e-10;
      r.pass = r.pass && ok;
      std::snprintf(buf, sizeof buf,
                    "%s N=%d cutoff %d, %s order: residual %.3g (limit 1e-8), |V^dag V - I| %.3g",
                    ok ? "ok  " : "FAIL", n, cutoff,
                    order == FactorOrder::alpha_theta ? "V_a V_t" : "V_t V_a", worst, unitarity);
      r.details.push_back(buf);
    }
  }
  return r;
}

CriterionResult passage_suite(const std::vector<std::string>& presets) {
  CriterionResult r{"passage", "Heisenberg passage: frame overlap and norm prediction", true, {}};
  char buf[256];
  IntegratorConfig cfg;
  cfg.sample_times = uniform_grid(1.0, 201);
  auto check = [&](const std::string& label, const ControlSchedule& s, Passage passage) {
    IntegratorConfig c = cfg;
    c.sample_times = uniform_grid(s.tau, 201);
    const PassageCheck pc = passage_check(s, 5, c, passage);
    const bool ok = pc.overlap_deficit < 1e-6 && pc.norm_ratio_error < 1e-6;
    r.pass = r.pass && ok;
    std::snprintf(buf, sizeof buf,
                  "%s %s (n=5, %s): overlap deficit %.3g, norm ratio error %.3g (limits 1e-6)",
                  ok ? "ok  " : "FAIL", label.c_str(), to_string(passage).c_str(),
                  pc.overlap_deficit, pc.norm_ratio_error);
    r.details.push_back(buf);
  };
  for (const auto& p : presets) {
    const ExperimentConfig c = load_config(p);
    check(p, c.schedule, c.passage);
  }
  // Mirror of fig3a: magnon-to-cavity transfer on the dual passage with phi = -pi/2.
  Json doc = load_config_json("fig3a");
  doc["schedule"]["phi"] = -kPi / 2.0;
  doc["passage"] = "dual";
  check("fig3a mirror", parse_config(doc).schedule, Passage::dual);
  return r;
}

CriterionResult number_conservation_suite() {
  CriterionResult r{"number-conservation", "Total excitation number is conserved", true, {}};
  char buf[256];
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int n : {2, 3}) {
    const FockSpace space = make_space(n, std::vector<int>(static_cast<std::size_t>(n), n == 2 ? 4 : 3));
    CMatrix ha(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) ha(i, j) = Complex(g(rng), g(rng));
    }
    const CMatrix h = build_hamiltonian(space, ha);
    const CMatrix num = total_number_operator(space);
    const double comm = (h * num - num * h).cwiseAbs().maxCoeff();
    const bool ok = comm < 1e-12;
    r.pass = r.pass && ok;
    std::snprintf(buf, sizeof buf, "%s N=%d random Ha: max|[H, N_total]| = %.3g (limit 1e-12)",
                  ok ? "ok  " : "FAIL", n, comm);
    r.details.push_back(buf);
  }

  // Full-space evolution of |5,0> under fig3a: no leakage out of the 5-excitation
  // sector, <N>/||psi||^2 fixed, and agreement with the sector-block solver.
  const ExperimentConfig c = load_config("fig3a");
  auto space = std::make_shared<const FockSpace>(make_space(2, c.cutoffs));
  const QuantumState psi0 = fock_state(space, {5, 0});
  IntegratorConfig cfg = c.integrator;
  cfg.sample_times = uniform_grid(c.schedule.tau, 201);
  const CMatrix num = total_number_operator(*space);
  double leak = 0.0, mean_dev = 0.0;
  EvolutionOptions full;
  full.use_sectors = false;
  full.on_sample = [&](std::size_t, double, const QuantumState& s) {
    const CVector& v = s.vector();
    double outside = 0.0;
    for (std::size_t i = 0; i < space->dimension(); ++i) {
      if (space->total_number(i) != 5) outside += std::norm(v[static_cast<Eigen::Index>(i)]);
    }
    const double norm2 = v.squaredNorm();
    leak = std::max(leak, outside / norm2);
    mean_dev = std::max(mean_dev, std::abs(v.dot(num * v).real() / norm2 - 5.0));
  };
  const Trajectory a = evolve_ket(c.schedule, psi0, cfg, full);
  EvolutionOptions blocks;
  const Trajectory b = evolve_ket(c.schedule, psi0, cfg, blocks);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    diff = std::max(diff, (a.states[i].vector() - b.states[i].vector()).cwiseAbs().maxCoeff());
  }
  bool ok = leak < 1e-8 && mean_dev < 1e-8;
  r.pass = r.pass && ok;
  std::snprintf(buf, sizeof buf,
                "%s fig3a full space: sector leakage %.3g, |<N>/|psi|^2 - 5| %.3g (limits 1e-8)",
                ok ? "ok  " : "FAIL", leak, mean_dev);
  r.details.push_back(buf);
  ok = diff < 1e-8;
  r.pass = r.pass && ok;
  std::snprintf(buf, sizeof buf, "%s fig3a block vs full space: max entry difference %.3g (limit 1e-8)",
                ok ? "ok  " : "FAIL", diff);
  r.details.push_back(buf);
  return r;
}

CriterionResult hermitian_limit_suite() {
  CriterionResult r{"hermitian-limit", "lambda = 0: unit norm, perfect transfer, reciprocity", true, {}};
  char buf[256];
  ConfigOverrides o;
  o.lambda = 0.0;
  const ExperimentConfig c = load_config("fig3a", o);
  const ResultBundle b = run_experiment(c);
  double dev = 0.0;
  for (double x : b.table.column("trace")) dev = std::max(dev, std::abs(x - 1.0));
  const double f = b.table.column("F_0_5").back();
  bool ok = dev < 1e-9 && std::abs(f - 1.0) < 1e-3;
  r.pass = r.pass && ok;
  std::snprintf(buf, sizeof buf, "%s norm deviation %.3g (limit 1e-9), F_0_5(tau) = %.12g",
                ok ? "ok  " : "FAIL", dev, f);
  r.details.push_back(buf);

  double herm = 0.0, recip = 0.0;
  for (double t : uniform_grid(c.schedule.tau, 101)) {
    const CMatrix ha = synthesize_pulses(c.schedule, t).Ha;
    herm = std::max(herm, (ha - ha.adjoint()).cwiseAbs().maxCoeff());
    const CMatrix S = scattering_matrix(c.schedule, t, default_gamma_1(c.schedule)).S;
    recip = std::max(recip, std::abs(std::abs(S(0, 1)) - std::abs(S(1, 0))));
  }
  ok = herm < 1e-12 && recip < 1e-10;
  r.pass = r.pass && ok;
  std::snprintf(buf, sizeof buf, "%s max|Ha - Ha^dag| %.3g, max||S12| - |S21|| %.3g (limit 1e-10)",
                ok ? "ok  " : "FAIL", herm, recip);
  r.details.push_back(buf);
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& requested,
                                            const VerifyOptions& options) {
  const std::vector<std::string> all = criterion_ids();
  const std::vector<std::string> ids = requested.empty() ? all : requested;
  for (const auto& id : ids) {
    if (std::find(all.begin(), all.end(), id) == all.end()) {
      throw ConfigError("unknown criterion '" + id + "'");
    }
  }

  std::set<std::string> needed;
  for (const auto& pc : preset_criteria()) {
    if (std::find(ids.begin(), ids.end(), pc.id) != ids.end()) {
      needed.insert(pc.presets.begin(), pc.presets.end());
    }
  }
  const std::vector<std::string> presets(needed.begin(), needed.end());
  std::vector<std::vector<ResultBundle>> bundles(presets.size());
  std::vector<std::string> errors(presets.size());
  parallel_for(presets.size(), [&](std::size_t i) {
    try {
      bundles[i] = run_preset(presets[i], options);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<CriterionResult> results;
  for (const auto& id : ids) {
    auto pc = std::find_if(preset_criteria().begin(), preset_criteria().end(),
                           [&](const PresetCriterion& p) { return p.id == id; });
    if (pc == preset_criteria().end()) {
      try {
        if (id == "triangularization") results.push_back(triangularization_suite(kTransferPresets));
        if (id == "frame-conjugation") results.push_back(frame_conjugation_suite());
        if (id == "passage") results.push_back(passage_suite(kTransferPresets));
        if (id == "number-conservation") results.push_back(number_conservation_suite());
        if (id == "hermitian-limit") results.push_back(hermitian_limit_suite());
      } catch (const std::exception& e) {
        results.push_back({id, id, false, {std::string("error: ") + e.what()}});
      }
      continue;
    }
    CriterionResult r{pc->id, pc->title, true, {}};
    std::size_t applicable = 0;
    for (const auto& name : pc->presets) {
      const auto k = static_cast<std::size_t>(
          std::find(presets.begin(), presets.end(), name) - presets.begin());
      if (!errors[k].empty()) {
        r.pass = false;
        r.details.push_back("FAIL " + name + ": error: " + errors[k]);
        continue;
      }
      for (const auto& b : bundles[k]) {
        for (const auto& cp : b.checkpoints) {
          if (cp.group != pc->group || !cp.applicable) continue;
          ++applicable;
          r.pass = r.pass && cp.pass;
          std::string label = name;
          if (!b.config.verify_sweep_param.empty()) {
            label += " [" + sweep_label(b.config.verify_sweep_param, b.config.schedule.lambda) + "]";
          }
          r.details.push_back(std::string(cp.pass ? "ok   " : "FAIL ") + label + " " + cp.name +
                              ": " + cp.detail);
        }
      }
    }
    if (applicable == 0) {
      r.pass = false;
      r.details.push_back("FAIL no applicable checkpoints");
    }
    results.push_back(std::move(r));
  }
  (void)fmt;
  return results;
}

}  // namespace nhb
