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

#include "nhb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "nhb/evolution.hpp"
#include "nhb/lindblad.hpp"
#include "nhb/spectrum.hpp"

#ifndef NHB_VERSION
#define NHB_VERSION "unknown"
#endif

namespace nhb {

namespace fs = std::filesystem;

const std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("no output column named '" + name + "'");
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

bool Table::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

bool ResultBundle::all_pass() const {
  for (const auto& c : checkpoints) {
    if (c.applicable && !c.pass) return false;
  }
  return true;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

QuantumState make_state(const QuantumState::SpacePtr& space, const StateSpec& spec) {
  if (spec.type == "fock") return fock_state(space, spec.occupations);
  if (spec.type == "coherent") return coherent_state(space, spec.mode, spec.alpha, spec.tail_threshold);
  if (spec.type == "cat") return cat_state(space, spec.mode, spec.alpha, spec.tail_threshold);
  if (spec.type == "binomial") return binomial_code_state(space, spec.mode);
  if (spec.type == "thermal") return thermal_state(space, spec.mode, spec.nbar, spec.tail_threshold);
  throw ConfigError("unknown state type '" + spec.type + "'");
}

namespace {

int pure_mode(const CMatrix& m_dagger, int row) {
  for (int j = 0; j < m_dagger.cols(); ++j) {
    if (std::abs(std::abs(m_dagger(row, j)) - 1.0) < 1e-9) return j;
  }
  return -1;
}

}  // namespace

QuantumState transfer_target(const QuantumState& initial, const ControlSchedule& s,
                             Passage passage, double f_r_tau) {
  const FrameParams frame = s.frame();
  const int k = passage == Passage::ket ? 0 : frame.num_modes - 1;
  const CMatrix m0 = frame_matrix(frame, 0.0).m_dagger;
  const CMatrix m1 = frame_matrix(frame, s.tau).m_dagger;
  const int src = pure_mode(m0, k);
  const int dst = pure_mode(m1, k);
  if (src < 0 || dst < 0) {
    throw ConfigError("target_state: the passage does not map one mode onto another; "
                      "give target_state explicitly");
  }
  const Complex c = std::exp(-kI * f_r_tau) * std::conj(m1(k, dst)) / std::conj(m0(k, src));

  const FockSpace& space = *initial.space();
  std::vector<CVector> comps;
  for (const CVector& v : initial.components()) {
    CVector out = CVector::Zero(v.size());
    for (std::size_t g = 0; g < space.dimension(); ++g) {
      const Complex amp = v[static_cast<Eigen::Index>(g)];
      if (amp == Complex{}) continue;
      std::vector<int> occ = space.occupations(g);
      const int n = occ[static_cast<std::size_t>(src)];
      if (space.total_number(g) != n) {
        throw ConfigError("target_state: initial state occupies more than the source mode");
      }
      if (n > space.cutoffs()[static_cast<std::size_t>(dst)]) {
        throw TruncationError("target_state: destination cutoff too small");
      }
      occ.assign(occ.size(), 0);
      occ[static_cast<std::size_t>(dst)] = n;
      out[static_cast<Eigen::Index>(space.index_of(occ))] = amp * std::pow(c, n);
    }
    comps.push_back(std::move(out));
  }
  if (initial.kind() == StateKind::pure) {
    return QuantumState::pure(initial.space(), std::move(comps.front()), Frame::laboratory,
                              initial.truncation());
  }
  return QuantumState::ensemble(initial.space(), initial.weights(), std::move(comps),
                                Frame::laboratory, initial.truncation());
}

namespace {

std::string fidelity_name(const std::vector<int>& occ) {
  std::string name = "F";
  for (int o : occ) name += "_" + std::to_string(o);
  return name;
}

struct Columns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;

  void add(const std::string& name, std::vector<double> values) {
    names.push_back(name);
    data.push_back(std::move(values));
  }
  Table table() const {
    Table t;
    t.columns = names;
    const std::size_t n = data.empty() ? 0 : data.front().size();
    t.rows.assign(n, std::vector<double>(names.size()));
    for (std::size_t c = 0; c < data.size(); ++c) {
      for (std::size_t r = 0; r < n; ++r) t.rows[r][c] = data[c][r];
    }
    return t;
  }
};

std::size_t nearest_index(const std::vector<double>& times, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  }
  return best;
}

// Linear interpolation when t falls between samples.
double value_at(const std::vector<double>& times, const std::vector<double>& y, double t) {
  const std::size_t i = nearest_index(times, t);
  if (std::abs(times[i] - t) < 1e-12 * std::max(1.0, std::abs(t))) return y[i];
  auto hi = std::upper_bound(times.begin(), times.end(), t);
  if (hi == times.begin()) return y.front();
  if (hi == times.end()) return y.back();
  const auto j = static_cast<std::size_t>(hi - times.begin());
  const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
  return (1.0 - w) * y[j - 1] + w * y[j];
}

std::string list_text(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    os << buf;
  }
  os << "]";
  return os.str();
}

CheckpointResult evaluate(const Checkpoint& cp, const ResultBundle& b) {
  CheckpointResult r;
  r.name = cp.name;
  r.group = cp.group;
  r.type = cp.type;
  r.target = cp.value;
  r.tol = cp.tol;
  const ControlSchedule& s = b.config.schedule;
  if (cp.lambda && std::abs(*cp.lambda - s.lambda) > 1e-12) {
    r.applicable = false;
    r.detail = "applies to lambda = " + format_double(*cp.lambda);
    return r;
  }
  const double tau = s.tau;
  char buf[256];

  if (cp.type == "value" || cp.type == "peak" || cp.type == "max_after") {
    const std::vector<double> t = b.table.column("t_over_tau");
    const std::vector<double> y = b.table.column(cp.observable);
    if (cp.type == "value") {
      r.measured = value_at(t, y, cp.t);
      r.measured_t = cp.t;
      r.pass = std::abs(r.measured - cp.value) <= cp.tol;
      std::snprintf(buf, sizeof buf, "%s(%.4g tau) = %.6g, target %.6g +- %.3g",
                    cp.observable.c_str(), cp.t, r.measured, cp.value, cp.tol);
    } else if (cp.type == "peak") {
      const auto it = std::max_element(y.begin(), y.end());
      r.measured = *it;
      r.measured_t = t[static_cast<std::size_t>(it - y.begin())];
      r.pass = std::abs(r.measured - cp.value) <= cp.tol &&
               std::abs(r.measured_t - cp.t) <= cp.t_tol;
      std::snprintf(buf, sizeof buf,
                    "peak %s = %.6g at %.4g tau, target %.6g +- %.3g at %.4g +- %.3g tau",
                    cp.observable.c_str(), r.measured, r.measured_t, cp.value, cp.tol, cp.t,
                    cp.t_tol);
    } else {
      r.measured = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= cp.t_from - 1e-12 && y[i] > r.measured) {
          r.measured = y[i];
          r.measured_t = t[i];
        }
      }
      r.pass = r.measured < cp.value;
      std::snprintf(buf, sizeof buf, "max %s for t >= %.4g tau = %.6g (at %.4g), limit %.6g",
                    cp.observable.c_str(), cp.t_from, r.measured, r.measured_t, cp.value);
    }
    r.detail = buf;
    return r;
  }

  if (cp.type == "ep_times") {
    std::vector<double> scaled;
    for (double e : b.ep_times) scaled.push_back(e / tau);
    r.pass = scaled.size() == cp.times.size();
    double worst = 0.0;
    for (std::size_t i = 0; r.pass && i < scaled.size(); ++i) {
      worst = std::max(worst, std::abs(scaled[i] - cp.times[i]));
    }
    if (r.pass) r.pass = worst <= cp.t_tol;
    r.measured = static_cast<double>(scaled.size());
    r.detail = "EPs at " + list_text(scaled) + " tau, target " + list_text(cp.times) + " +- " +
               format_double(cp.t_tol) + " tau";
    return r;
  }

  if (cp.type == "pt_real_spectrum") {
    const std::vector<double> t = b.table.column("t_over_tau");
    double worst_im = 0.0, worst_dev = 0.0;
    std::size_t unbroken = 0;
    for (double x : t) {
      const double time = x * tau;
      if (pt_classify(s, time).phase != PtPhase::unbroken) continue;
      ++unbroken;
      const SpectrumPoint sp = eigenvalues(s, time);
      const double J = synthesize_pulses(s, time).J;
      const double e = std::sqrt((J - s.gamma_a) * (J + s.gamma_a));
      Complex hi = sp.E_plus, lo = sp.E_minus;
      if (hi.real() < lo.real()) std::swap(hi, lo);
      worst_im = std::max({worst_im, std::abs(hi.imag()), std::abs(lo.imag())});
      worst_dev = std::max({worst_dev, std::abs(hi - e), std::abs(lo + e)});
    }
    r.measured = std::max(worst_im, worst_dev);
    r.pass = unbroken > 0 && r.measured < cp.value;
    std::snprintf(buf, sizeof buf,
                  "%zu unbroken samples: max|Im E| = %.3g, max|E -+ sqrt(J^2-g^2)| = %.3g, "
                  "limit %.3g",
                  unbroken, worst_im, worst_dev, cp.value);
    r.detail = buf;
    return r;
  }

  if (cp.type == "scalar_below") {
    const auto it = b.scalars.find(cp.observable);
    if (it == b.scalars.end()) {
      r.pass = false;
      r.detail = "scalar '" + cp.observable + "' not produced by this run";
      return r;
    }
    r.measured = it->second;
    r.pass = std::abs(r.measured) < cp.value;
    std::snprintf(buf, sizeof buf, "%s = %.6g, limit %.3g", cp.observable.c_str(), r.measured,
                  cp.value);
    r.detail = buf;
    return r;
  }

  if (cp.type == "nonreciprocity_inset") {
    std::vector<double> values;
    for (double lam : cp.sweep) {
      ControlSchedule sw = s;
      sw.lambda = lam;
      apply_lambda_rule(sw, b.config.gamma_sign, b.config.passage);
      const double g1 = b.config.outputs.gamma_1.value_or(default_gamma_1(sw));
      values.push_back(nonreciprocity(sw, g1));
    }
    bool ok = !values.empty() && cp.sweep.front() == 0.0 && std::abs(values.front()) <= cp.tol;
    for (std::size_t i = 1; ok && i < values.size(); ++i) ok = values[i] > values[i - 1];
    r.pass = ok;
    r.measured = values.empty() ? 0.0 : values.front();
    r.detail = "log10|S21/S12| over lambda " + list_text(cp.sweep) + " = " + list_text(values);
    return r;
  }
  r.pass = false;
  r.detail = "unknown checkpoint type";
  return r;
}

ResultBundle run_transfer(const ExperimentConfig& c) {
  ResultBundle b;
  b.config = c;
  const ControlSchedule& s = c.schedule;
  auto space = std::make_shared<const FockSpace>(make_space(2, c.cutoffs));
  const QuantumState initial = make_state(space, c.initial);
  const std::vector<double> grid = uniform_grid(s.tau, c.outputs.samples);

  PhaseRecord phase;
  const bool need_phase = c.outputs.phase || (c.outputs.target_fidelity && !c.target);
  if (need_phase) phase = global_phase(s, grid, c.passage);
  std::optional<QuantumState> target;
  if (c.outputs.target_fidelity) {
    target = c.target ? make_state(space, *c.target)
                      : transfer_target(initial, s, c.passage, phase.f_r.back());
  }

  int sector = -1;
  if (c.outputs.sum_fidelity) {
    if (c.initial.type != "fock") {
      throw ConfigError("field 'outputs.sum_fidelity': needs a Fock initial state");
    }
    sector = 0;
    for (int o : c.initial.occupations) sector += o;
  }
  for (const auto& occ : c.outputs.fidelities) {
    if (occ.size() != 2) throw ConfigError("field 'outputs.fidelities': expected pairs");
    space->index_of(occ);
  }

  const std::size_t n = grid.size();
  std::vector<std::vector<double>> fids(c.outputs.fidelities.size(), std::vector<double>(n));
  std::vector<double> sum_f(n), trace(n), f_target(n);
  EvolutionOptions opts;
  opts.use_sectors = c.use_sectors;
  opts.keep_states = false;
  opts.on_sample = [&](std::size_t i, double, const QuantumState& state) {
    for (std::size_t k = 0; k < fids.size(); ++k) {
      fids[k][i] = state.population(space->index_of(c.outputs.fidelities[k]));
    }
    if (sector >= 0) {
      double total = 0.0;
      for (int m = 0; m <= sector; ++m) {
        if (sector - m > c.cutoffs[0] || m > c.cutoffs[1]) continue;
        total += state.population(space->index_of(std::vector<int>{sector - m, m}));
      }
      sum_f[i] = total;
    }
    trace[i] = state.norm_tracked();
    if (target) f_target[i] = fidelity_mixed(state, *target);
  };

  IntegratorConfig cfg = c.integrator;
  cfg.sample_times = grid;
  Trajectory traj;
  if (c.passage == Passage::ket) {
    traj = initial.kind() == StateKind::pure ? evolve_ket(s, initial, cfg, opts)
                                             : evolve_density(s, initial, cfg, opts);
  } else {
    traj = evolve_dual(s, initial, cfg, opts);
  }

  Columns cols;
  std::vector<double> t_over_tau(n);
  for (std::size_t i = 0; i < n; ++i) t_over_tau[i] = grid[i] / s.tau;
  cols.add("t_over_tau", t_over_tau);
  for (std::size_t k = 0; k < fids.size(); ++k) {
    cols.add(fidelity_name(c.outputs.fidelities[k]), fids[k]);
  }
  if (sector >= 0) cols.add("sum_F", sum_f);
  cols.add("trace", trace);
  if (target) cols.add("F_target", f_target);

  std::vector<double> J(n), delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PulseSample p = synthesize_pulses(s, grid[i]);
    J[i] = p.J;
    delta[i] = p.Delta;
  }
  cols.add("J", J);
  cols.add("Delta", delta);
  if (c.outputs.spectrum) {
    const auto track = eigenvalue_track(s, grid);
    std::vector<double> pr(n), pi(n), mr(n), mi(n);
    for (std::size_t i = 0; i < n; ++i) {
      pr[i] = track[i].E_plus.real();
      pi[i] = track[i].E_plus.imag();
      mr[i] = track[i].E_minus.real();
      mi[i] = track[i].E_minus.imag();
    }
    cols.add("E_plus_re", pr);
    cols.add("E_plus_im", pi);
    cols.add("E_minus_re", mr);
    cols.add("E_minus_im", mi);
    b.ep_times = detect_eps(s, grid);
  }
  if (c.outputs.phase) {
    cols.add("f_r", phase.f_r);
    cols.add("X", phase.X);
  }
  if (c.outputs.scattering) {
    const double g1 = c.outputs.gamma_1.value_or(default_gamma_1(s));
    std::vector<double> s11(n), s12(n), s21(n), s22(n);
    for (std::size_t i = 0; i < n; ++i) {
      const CMatrix S = scattering_matrix(s, grid[i], g1, 0.0).S;
      s11[i] = std::abs(S(0, 0));
      s12[i] = std::abs(S(0, 1));
      s21[i] = std::abs(S(1, 0));
      s22[i] = std::abs(S(1, 1));
    }
    cols.add("S11_abs", s11);
    cols.add("S12_abs", s12);
    cols.add("S21_abs", s21);
    cols.add("S22_abs", s22);
    b.scalars["nonreciprocity"] = nonreciprocity(s, g1);
    b.scalars["gamma_1"] = g1;
  }
  b.table = cols.table();
  b.scalars["final_trace"] = trace.back();
  if (target) b.scalars["final_target_fidelity"] = f_target.back();
  b.scalars["norm_restoration_residual"] = check_norm_restoration(s, c.passage);
  b.scalars["truncation_discarded_mass"] = initial.truncation().discarded_mass;

  b.provenance["integrator_steps"] = traj.metadata.integrator.steps;
  b.provenance["schedule_hash"] = traj.metadata.schedule_hash;
  return b;
}

LindbladParams random_lindblad(std::mt19937_64& rng, double max_rate) {
  std::uniform_real_distribution<double> rate(0.0, max_rate);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  LindbladParams p;
  p.eta = rate(rng);
  p.beta = rate(rng);
  p.chi = rate(rng);
  p.u = unit(rng);
  p.v = unit(rng);
  p.Theta = rng() % 2 == 0 ? 0.0 : kPi;
  p.omega_a = unit(rng);
  p.omega_b = unit(rng);
  p.J = rate(rng);
  p.phi = angle(rng);
  return p;
}

ResultBundle run_lindblad(const ExperimentConfig& c) {
  ResultBundle b;
  b.config = c;
  const LindbladSpec& l = c.lindblad;
  auto space = std::make_shared<const FockSpace>(make_space(2, {l.cutoff, l.cutoff}));
  // Coherent product restricted to total number <= cutoff keeps every ladder
  // identity exact under the number-lowering dynamics.
  CVector ca(l.cutoff + 1), cb(l.cutoff + 1);
  Complex za = std::exp(-0.5 * std::norm(l.alpha)), zb = std::exp(-0.5 * std::norm(l.beta));
  for (int k = 0; k <= l.cutoff; ++k) {
    if (k > 0) {
      za *= l.alpha / std::sqrt(static_cast<double>(k));
      zb *= l.beta / std::sqrt(static_cast<double>(k));
    }
    ca[k] = za;
    cb[k] = zb;
  }
  CVector psi(static_cast<Eigen::Index>(space->dimension()));
  for (std::size_t g = 0; g < space->dimension(); ++g) {
    psi[static_cast<Eigen::Index>(g)] = ca[space->occupation(g, 0)] * cb[space->occupation(g, 1)];
  }
  const QuantumState rho0 = restrict_total(QuantumState::pure(space, psi), l.cutoff);

  IntegratorConfig cfg = c.integrator;
  cfg.sample_times = uniform_grid(l.t_end, l.samples);
  std::mt19937_64 rng(l.seed);
  Columns cols;
  std::vector<double> draw, eta, beta, chi, u, v, theta, resid, trace_err, min_eig;
  double worst = 0.0, worst_trace = 0.0, lowest = 0.0;
  for (int d = 0; d < l.draws; ++d) {
    const LindbladParams p = random_lindblad(rng, l.max_rate);
    const FirstMomentCheck fm = first_moment_check(p, rho0, cfg);
    draw.push_back(d);
    eta.push_back(p.eta);
    beta.push_back(p.beta);
    chi.push_back(p.chi);
    u.push_back(p.u);
    v.push_back(p.v);
    theta.push_back(p.Theta);
    resid.push_back(fm.max_residual);
    trace_err.push_back(fm.trace_error);
    min_eig.push_back(fm.min_eigenvalue);
    worst = std::max(worst, fm.max_residual);
    worst_trace = std::max(worst_trace, fm.trace_error);
    lowest = std::min(lowest, fm.min_eigenvalue);
  }
  cols.add("draw", draw);
  cols.add("eta", eta);
  cols.add("beta", beta);
  cols.add("chi", chi);
  cols.add("u", u);
  cols.add("v", v);
  cols.add("Theta", theta);
  cols.add("first_moment_residual", resid);
  cols.add("trace_error", trace_err);
  cols.add("min_eigenvalue", min_eig);
  b.table = cols.table();
  b.scalars["first_moment_residual"] = worst;
  b.scalars["trace_error"] = worst_trace;
  b.scalars["negative_eigenvalue"] = std::max(0.0, -lowest);
  return b;
}

}  // namespace

ResultBundle run_experiment(const ExperimentConfig& config) {
  ResultBundle b = config.kind == "lindblad" ? run_lindblad(config) : run_transfer(config);
  for (const auto& cp : config.checkpoints) b.checkpoints.push_back(evaluate(cp, b));

  Json prov = std::move(b.provenance);
  if (prov.is_null()) prov = Json::object();
  Json out;
  out["config"] = to_json(config);
  out["config_hash"] = config_hash(config);
  out["library_version"] = NHB_VERSION;
  out["tolerances"] = {{"rel_tol", config.integrator.rel_tol},
                       {"abs_tol", config.integrator.abs_tol}};
  for (auto it = prov.begin(); it != prov.end(); ++it) out[it.key()] = it.value();
  Json eps = Json::array();
  for (double e : b.ep_times) eps.push_back(e);
  out["ep_times"] = eps;
  Json scal = Json::object();
  for (const auto& [k, v] : b.scalars) scal[k] = v;
  out["scalars"] = scal;
  b.provenance = std::move(out);
  return b;
}

void write_bundle(const ResultBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "timeseries.csv");
    if (!csv) throw Error("cannot write " + (dir / "timeseries.csv").string());
    for (std::size_t i = 0; i < b.table.columns.size(); ++i) {
      csv << (i ? "," : "") << b.table.columns[i];
    }
    csv << "\n";
    for (const auto& row : b.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << format_double(row[i]);
      csv << "\n";
    }
  }
  {
    std::ofstream prov(dir / "provenance.json");
    prov << b.provenance.dump(2) << "\n";
  }
  if (!b.checkpoints.empty()) {
    Json report;
    report["config_hash"] = b.provenance.value("config_hash", "");
    report["name"] = b.config.name;
    report["all_pass"] = b.all_pass();
    Json results = Json::array();
    for (const auto& r : b.checkpoints) {
      results.push_back({{"name", r.name},
                         {"group", r.group},
                         {"type", r.type},
                         {"applicable", r.applicable},
                         {"pass", r.pass},
                         {"target", r.target},
                         {"tol", r.tol},
                         {"measured", r.measured},
                         {"measured_t", r.measured_t},
                         {"detail", r.detail}});
    }
    report["results"] = results;
    std::ofstream out(dir / "checkpoints.json");
    out << report.dump(2) << "\n";
  }
}

}  // namespace nhb
