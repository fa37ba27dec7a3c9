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

#include "nhb/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace nhb {

void Trajectory::add_series(const std::string& name, std::vector<double> values) {
  if (values.size() != times.size()) {
    throw DimensionMismatch("Trajectory::add_series: series '" + name + "' has " +
                            std::to_string(values.size()) + " entries for " +
                            std::to_string(times.size()) + " times");
  }
  observables[name] = std::move(values);
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end()) throw ConfigError("Trajectory: no series named '" + name + "'");
  return it->second;
}

namespace {

struct Block {
  const QuadraticForm* form = nullptr;
  std::vector<CVector> samples;  // local vectors, one per internal time
};

}  // namespace

Trajectory evolve_coefficients(const CoefficientFn& ha, const QuantumState& initial,
                               const IntegratorConfig& cfg, const EvolutionOptions& options) {
  const auto& space_ptr = initial.space();
  const FockSpace& space = *space_ptr;
  const std::vector<double>& times = cfg.sample_times;
  if (times.empty()) throw ConfigError("evolve: no sample times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) {
      throw ConfigError("evolve: sample times must be >= 0 and strictly increasing");
    }
  }
  std::vector<double> grid = times;
  const bool prepended = times.front() > 0.0;
  if (prepended) grid.insert(grid.begin(), 0.0);

  std::map<int, std::unique_ptr<QuadraticForm>> forms;
  auto form_for = [&](int sector) -> const QuadraticForm& {
    auto& slot = forms[sector];
    if (!slot) {
      slot = std::make_unique<QuadraticForm>(sector < 0 ? QuadraticForm::full(space)
                                                        : QuadraticForm::sector(space, sector));
    }
    return *slot;
  };

  IntegratorReport report{cfg.method, cfg.rel_tol, cfg.abs_tol, 0};
  const auto& comps = initial.components();
  std::vector<std::vector<Block>> blocks(comps.size());

  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<int> sectors;
    if (options.use_sectors) {
      for (int n = 0; n <= space.max_total(); ++n) {
        for (std::size_t g : space.sector(n)) {
          if (comps[c][static_cast<Eigen::Index>(g)] != Complex{}) {
            sectors.push_back(n);
            break;
          }
        }
      }
    } else {
      sectors.push_back(-1);
    }
    for (int sector : sectors) {
      const QuadraticForm& form = form_for(sector);
      const auto dim = static_cast<Eigen::Index>(form.dimension());
      CVector y0(dim);
      for (Eigen::Index l = 0; l < dim; ++l) {
        y0[l] = comps[c][static_cast<Eigen::Index>(form.basis()[static_cast<std::size_t>(l)])];
      }
      Block block;
      block.form = &form;
      block.samples.resize(grid.size());
      auto rhs = [&](double t, const CVector& y, CVector& dy) {
        form.apply(ha(t), y, dy);
        dy *= -kI;
      };
      auto obs = [&](std::size_t i, double, const CVector& y) { block.samples[i] = y; };
      const IntegratorReport r = integrate(rhs, y0, grid, cfg, obs);
      report.steps += r.steps;
      blocks[c].push_back(std::move(block));
    }
  }

  Trajectory traj;
  traj.times = times;
  traj.metadata.cutoffs = space.cutoffs();
  traj.metadata.integrator = report;
  traj.metadata.sector_blocks = options.use_sectors;
  std::vector<double> norms;
  norms.reserve(times.size());
  const auto dim = static_cast<Eigen::Index>(space.dimension());

  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::size_t gi = prepended ? i + 1 : i;
    std::vector<CVector> vecs(comps.size(), CVector::Zero(dim));
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (const Block& b : blocks[c]) {
        const CVector& local = b.samples[gi];
        for (Eigen::Index l = 0; l < local.size(); ++l) {
          vecs[c][static_cast<Eigen::Index>(b.form->basis()[static_cast<std::size_t>(l)])] =
              local[l];
        }
      }
    }
    QuantumState state =
        initial.kind() == StateKind::pure
            ? QuantumState::pure(space_ptr, std::move(vecs.front()), initial.frame())
            : QuantumState::ensemble(space_ptr, initial.weights(), std::move(vecs),
                                     initial.frame());
    norms.push_back(state.norm_tracked());
    if (options.on_sample) options.on_sample(i, times[i], state);
    if (options.keep_states || i + 1 == times.size()) traj.states.push_back(std::move(state));
  }
  traj.add_series("norm", std::move(norms));
  return traj;
}

namespace {

IntegratorConfig with_default_grid(const ControlSchedule& s, IntegratorConfig cfg) {
  if (cfg.sample_times.empty()) cfg.sample_times = uniform_grid(s.tau, 101);
  cfg.validate(s.tau);
  return cfg;
}

void check_two_mode(const QuantumState& state, const char* what) {
  if (state.space()->num_modes() != 2) {
    throw DimensionMismatch(std::string(what) + ": the cavity-magnon model has two modes");
  }
}

}  // namespace

Trajectory evolve_ket(const ControlSchedule& s, const QuantumState& psi0,
                      const IntegratorConfig& cfg, const EvolutionOptions& options) {
  if (psi0.kind() != StateKind::pure) throw ConfigError("evolve_ket: initial state must be pure");
  check_two_mode(psi0, "evolve_ket");
  s.validate();
  auto ha = [&](double t) { return synthesize_pulses(s, t).Ha; };
  Trajectory traj = evolve_coefficients(ha, psi0, with_default_grid(s, cfg), options);
  traj.metadata.schedule_hash = schedule_fingerprint(s);
  return traj;
}

Trajectory evolve_dual(const ControlSchedule& s, const QuantumState& phi0,
                       const IntegratorConfig& cfg, const EvolutionOptions& options) {
  check_two_mode(phi0, "evolve_dual");
  s.validate();
  auto ha = [&](double t) { return CMatrix(synthesize_pulses(s, t).Ha.adjoint()); };
  Trajectory traj = evolve_coefficients(ha, phi0, with_default_grid(s, cfg), options);
  traj.metadata.schedule_hash = schedule_fingerprint(s);
  return traj;
}

Trajectory evolve_density(const ControlSchedule& s, const QuantumState& rho0,
                          const IntegratorConfig& cfg, const EvolutionOptions& options) {
  check_two_mode(rho0, "evolve_density");
  s.validate();
  auto ha = [&](double t) { return synthesize_pulses(s, t).Ha; };
  Trajectory traj = evolve_coefficients(ha, rho0, with_default_grid(s, cfg), options);
  traj.metadata.schedule_hash = schedule_fingerprint(s);
  return traj;
}

PassageCheck passage_check(const ControlSchedule& s, int n, const IntegratorConfig& cfg,
                           Passage passage) {
  if (n < 0) throw ConfigError("passage_check: n must be >= 0");
  s.validate();
  const int cutoff = std::max(n, 1);
  auto space = std::make_shared<const FockSpace>(make_space(2, {cutoff, cutoff}));
  const FrameParams frame = s.frame();
  const int k = passage == Passage::ket ? 0 : frame.num_modes - 1;
  const QuantumState psi0 =
      QuantumState::pure(space, ancillary_fock_state(*space, frame, k, n, 0.0));

  IntegratorConfig c = with_default_grid(s, cfg);
  if (c.sample_times.front() != 0.0) c.sample_times.insert(c.sample_times.begin(), 0.0);
  const PhaseRecord phase = global_phase(s, c.sample_times, passage);

  PassageCheck out;
  out.times = c.sample_times;
  EvolutionOptions opts;
  opts.keep_states = false;
  opts.on_sample = [&](std::size_t i, double t, const QuantumState& state) {
    const CVector& psi = state.vector();
    const CVector target = ancillary_fock_state(*space, frame, k, n, t);
    const double norm = psi.norm();
    out.overlap.push_back(norm > 0.0 ? std::abs(target.dot(psi)) / norm : 0.0);
    out.norm.push_back(norm);
    out.predicted_norm.push_back(std::exp(-n * phase.X[i]));
  };
  if (passage == Passage::ket) {
    evolve_ket(s, psi0, c, opts);
  } else {
    evolve_dual(s, psi0, c, opts);
  }
  double min_overlap = 1.0;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    min_overlap = std::min(min_overlap, out.overlap[i]);
    out.norm_ratio_error =
        std::max(out.norm_ratio_error, std::abs(out.norm[i] / out.predicted_norm[i] - 1.0));
  }
  out.overlap_deficit = 1.0 - min_overlap;
  return out;
}

namespace {

void describe(std::string& out, const char* name, const ScalarSchedule& s) {
  out += name;
  switch (s.kind()) {
    case ScalarSchedule::Kind::polynomial: out += ":poly"; break;
    case ScalarSchedule::Kind::harmonic: out += ":harm"; break;
    case ScalarSchedule::Kind::custom: out += ":custom"; break;
  }
  char buf[32];
  for (double c : s.coefficients()) {
    std::snprintf(buf, sizeof buf, ",%.17g", c);
    out += buf;
  }
  out += ';';
}

}  // namespace

std::string schedule_fingerprint(const ControlSchedule& s) {
  std::string text;
  describe(text, "theta", s.theta);
  describe(text, "alpha", s.alpha);
  char buf[64];
  for (double v : {s.phi, s.phi_a, s.gamma_a, s.gamma_b, s.Gamma, s.Theta, s.lambda, s.tau}) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    text += buf;
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nhb
