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

#include "nhb/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nhb {

void LindbladParams::validate() const {
  if (!(eta >= 0.0) || !(beta >= 0.0) || !(chi >= 0.0)) {
    throw ConfigError("lindblad: damping rates must be >= 0");
  }
  for (double x : {u, v, Theta, omega_a, omega_b, J, phi}) {
    if (!std::isfinite(x)) throw ConfigError("lindblad: non-finite parameter");
  }
}

CMatrix LindbladParams::effective_coefficients() const {
  CMatrix h(2, 2);
  h(0, 0) = omega_a - kI * gamma_a();
  h(0, 1) = J * std::exp(kI * phi) - kI * Gamma() * std::exp(kI * Theta);
  h(1, 0) = J * std::exp(-kI * phi) - kI * Gamma() * std::exp(-kI * Theta);
  h(1, 1) = omega_b - kI * gamma_b();
  return h;
}

namespace {

struct Operators {
  CMatrix a, b, c, h;
  CMatrix na, nb;
  // Non-Hermitian part folded in: K = H - i sum_k kappa_k L_k^dag L_k / 2.
  CMatrix k;
};

Operators build_operators(const LindbladParams& p, const FockSpace& space) {
  if (space.num_modes() != 2) throw DimensionMismatch("lindblad: two-mode space required");
  Operators o;
  o.a = mode_operator(space, 0, OperatorKind::annihilation).matrix;
  o.b = mode_operator(space, 1, OperatorKind::annihilation).matrix;
  o.c = p.u * o.a + std::exp(kI * p.Theta) * p.v * o.b;
  CMatrix coeff(2, 2);
  coeff << p.omega_a, p.J * std::exp(kI * p.phi), p.J * std::exp(-kI * p.phi), p.omega_b;
  o.h = build_hamiltonian(space, coeff);
  o.na = o.a.adjoint() * o.a;
  o.nb = o.b.adjoint() * o.b;
  const CMatrix cc = o.c.adjoint() * o.c;
  o.k = o.h - kI * (p.eta * cc + p.beta * o.na + p.chi * o.nb);
  return o;
}

CMatrix rhs_with(const LindbladParams& p, const Operators& o, const CMatrix& rho) {
  CMatrix out = -kI * (o.k * rho - rho * o.k.adjoint());
  if (p.eta != 0.0) out.noalias() += 2.0 * p.eta * o.c * rho * o.c.adjoint();
  if (p.beta != 0.0) out.noalias() += 2.0 * p.beta * o.a * rho * o.a.adjoint();
  if (p.chi != 0.0) out.noalias() += 2.0 * p.chi * o.b * rho * o.b.adjoint();
  return out;
}

}  // namespace

CMatrix lindblad_rhs(const LindbladParams& p, const FockSpace& space, const CMatrix& rho) {
  p.validate();
  return rhs_with(p, build_operators(p, space), rho);
}

Trajectory evolve_lindblad(const LindbladParams& p, const QuantumState& rho0,
                           const IntegratorConfig& cfg, const EvolutionOptions& options) {
  p.validate();
  const auto& space_ptr = rho0.space();
  const Operators ops = build_operators(p, *space_ptr);
  const auto d = static_cast<Eigen::Index>(space_ptr->dimension());
  if (cfg.sample_times.empty()) throw ConfigError("evolve_lindblad: no sample times");
  std::vector<double> grid = cfg.sample_times;
  const bool prepended = grid.front() > 0.0;
  if (prepended) grid.insert(grid.begin(), 0.0);

  const CMatrix rho_init = rho0.matrix();
  CVector y0 = Eigen::Map<const CVector>(rho_init.data(), d * d);
  auto rhs = [&](double, const CVector& y, CVector& dy) {
    const Eigen::Map<const CMatrix> rho(y.data(), d, d);
    dy = Eigen::Map<const CVector>(rhs_with(p, ops, rho).eval().data(), d * d);
  };

  Trajectory traj;
  traj.times = cfg.sample_times;
  traj.metadata.cutoffs = space_ptr->cutoffs();
  traj.metadata.sector_blocks = false;
  std::map<std::string, std::vector<double>> series;
  auto obs = [&](std::size_t gi, double t, const CVector& y) {
    if (prepended && gi == 0) return;
    const std::size_t i = prepended ? gi - 1 : gi;
    const Eigen::Map<const CMatrix> rho(y.data(), d, d);
    const CMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    const RVector& ev = es.eigenvalues();
    series["trace"].push_back(rho.trace().real());
    series["min_eigenvalue"].push_back(ev.minCoeff());
    series["purity"].push_back((rho * rho).trace().real());
    const Complex ea = (ops.a * rho).trace();
    const Complex eb = (ops.b * rho).trace();
    series["a_re"].push_back(ea.real());
    series["a_im"].push_back(ea.imag());
    series["b_re"].push_back(eb.real());
    series["b_im"].push_back(eb.imag());
    series["n_a"].push_back((ops.na * rho).trace().real());
    series["n_b"].push_back((ops.nb * rho).trace().real());

    std::vector<double> w;
    std::vector<CVector> comps;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev[k] <= 0.0) continue;
      w.push_back(ev[k]);
      comps.emplace_back(es.eigenvectors().col(k));
    }
    if (w.empty()) {
      w.push_back(0.0);
      comps.emplace_back(CVector::Zero(d));
    }
    QuantumState state = QuantumState::ensemble(space_ptr, std::move(w), std::move(comps));
    if (options.on_sample) options.on_sample(i, t, state);
    if (options.keep_states || i + 1 == traj.times.size()) traj.states.push_back(std::move(state));
  };
  traj.metadata.integrator = integrate(rhs, y0, grid, cfg, obs);
  for (auto& [name, values] : series) traj.add_series(name, std::move(values));
  traj.add_series("norm", traj.series("trace"));
  return traj;
}

FirstMomentCheck first_moment_check(const LindbladParams& p, const QuantumState& rho0,
                                    const IntegratorConfig& cfg) {
  p.validate();
  const FockSpace& space = *rho0.space();
  const Operators ops = build_operators(p, space);
  const CMatrix heff = p.effective_coefficients();
  FirstMomentCheck out;
  out.min_eigenvalue = 0.0;

  std::vector<CVector> moments;
  EvolutionOptions opts;
  opts.keep_states = false;
  opts.on_sample = [&](std::size_t, double, const QuantumState& state) {
    const CMatrix rho = state.matrix();
    CVector m(2);
    m << (ops.a * rho).trace(), (ops.b * rho).trace();
    moments.push_back(m);
    const CMatrix drho = rhs_with(p, ops, rho);
    CVector dm(2);
    dm << (ops.a * drho).trace(), (ops.b * drho).trace();
    const CVector predicted = -kI * (heff * m);
    const double scale = predicted.norm();
    const double diff = (dm - predicted).norm();
    if (scale > 1e-14 || diff > 1e-14) {
      out.derivative_residual = std::max(out.derivative_residual, diff / std::max(scale, 1e-14));
    }
  };
  const Trajectory traj = evolve_lindblad(p, rho0, cfg, opts);
  for (double tr : traj.series("trace")) {
    out.trace_error = std::max(out.trace_error, std::abs(tr - traj.series("trace").front()));
  }
  out.min_eigenvalue = *std::min_element(traj.series("min_eigenvalue").begin(),
                                         traj.series("min_eigenvalue").end());

  // Independent integration of the two-mode linear system from the same start.
  std::vector<CVector> linear(traj.times.size());
  auto rhs = [&](double, const CVector& y, CVector& dy) { dy = -kI * (heff * y); };
  std::vector<double> grid = traj.times;
  const bool prepended = grid.front() > 0.0;
  if (prepended) grid.insert(grid.begin(), 0.0);
  CVector m0(2);
  {
    const CMatrix rho = rho0.matrix();
    m0 << (ops.a * rho).trace(), (ops.b * rho).trace();
  }
  integrate(rhs, m0, grid, cfg, [&](std::size_t gi, double, const CVector& y) {
    if (prepended && gi == 0) return;
    linear[prepended ? gi - 1 : gi] = y;
  });
  double peak = 0.0;
  for (const auto& m : linear) peak = std::max(peak, m.norm());
  for (std::size_t i = 0; i < linear.size(); ++i) {
    const double diff = (moments[i] - linear[i]).norm();
    if (peak > 1e-14) out.trajectory_residual = std::max(out.trajectory_residual, diff / peak);
  }
  out.max_residual = std::max(out.derivative_residual, out.trajectory_residual);
  return out;
}

QuantumState restrict_total(const QuantumState& state, int max_total) {
  const FockSpace& space = *state.space();
  std::vector<CVector> comps = state.components();
  for (auto& c : comps) {
    for (std::size_t g = 0; g < space.dimension(); ++g) {
      if (space.total_number(g) > max_total) c[static_cast<Eigen::Index>(g)] = 0.0;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) total += state.weights()[i] * comps[i].squaredNorm();
  if (!(total > 0.0)) throw ConfigError("restrict_total: state has no weight below the limit");
  for (auto& c : comps) c /= std::sqrt(total);
  if (state.kind() == StateKind::pure) {
    return QuantumState::pure(state.space(), std::move(comps.front()), state.frame());
  }
  return QuantumState::ensemble(state.space(), state.weights(), std::move(comps), state.frame());
}

}  // namespace nhb
