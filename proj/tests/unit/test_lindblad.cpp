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

#include <cmath>
#include <random>

#include "nhb/lindblad.hpp"

using namespace nhb;

namespace {

QuantumState::SpacePtr space2(int c) {
  return std::make_shared<const FockSpace>(make_space(2, {c, c}));
}

IntegratorConfig grid(double t_end, std::size_t n) {
  IntegratorConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.sample_times = uniform_grid(t_end, n);
  return cfg;
}

}  // namespace

TEST_CASE("rate bookkeeping") {
  LindbladParams p;
  p.eta = 0.5;
  p.u = 0.6;
  p.v = 0.8;
  p.beta = 0.1;
  p.chi = 0.2;
  CHECK(p.gamma_a() == doctest::Approx(0.28));
  CHECK(p.gamma_b() == doctest::Approx(0.52));
  CHECK(p.Gamma() == doctest::Approx(0.24));
}

TEST_CASE("zero rates give unitary evolution") {
  auto space = space2(3);
  LindbladParams p;
  p.J = 0.9;
  p.phi = 0.3;
  p.omega_a = 0.2;
  const QuantumState rho0 = QuantumState::density(space, fock_state(space, {1, 1}).matrix());
  const Trajectory tr = evolve_lindblad(p, rho0, grid(1.0, 11));
  for (double x : tr.series("purity")) CHECK(x == doctest::Approx(1.0).epsilon(1e-9));
  for (double x : tr.series("trace")) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
  const FirstMomentCheck fm = first_moment_check(p, restrict_total(coherent_state(space, 0, 0.5, 1e-2), 3), grid(1.0, 11));
  CHECK(fm.max_residual < 1e-9);
}

TEST_CASE("independent decay") {
  // No collective channel: <a^dag a>(t) = <a^dag a>(0) exp(-2 beta t).
  auto space = space2(4);
  LindbladParams p;
  p.beta = 0.4;
  p.chi = 0.1;
  const QuantumState rho0 = QuantumState::density(space, fock_state(space, {3, 2}).matrix());
  const Trajectory tr = evolve_lindblad(p, rho0, grid(2.0, 9));
  const auto& na = tr.series("n_a");
  const auto& nb = tr.series("n_b");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(na[i] == doctest::Approx(3.0 * std::exp(-0.8 * tr.times[i])).epsilon(1e-8));
    CHECK(nb[i] == doctest::Approx(2.0 * std::exp(-0.2 * tr.times[i])).epsilon(1e-8));
  }
}

TEST_CASE("first moments follow the effective Hamiltonian") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto space = space2(4);
  CVector psi = coherent_state(space, 0, Complex(0.6, 0.2), 1.0).vector();
  psi += coherent_state(space, 1, Complex(-0.3, 0.4), 1.0).vector();
  const QuantumState rho0 = restrict_total(QuantumState::pure(space, psi / psi.norm()), 4);
  for (int draw = 0; draw < 5; ++draw) {
    LindbladParams p;
    p.eta = u(rng);
    p.beta = u(rng);
    p.chi = u(rng);
    p.u = u(rng);
    p.v = u(rng);
    p.Theta = u(rng) < 0.5 ? 0.0 : kPi;
    p.J = u(rng);
    p.phi = 2.0 * kPi * u(rng);
    p.omega_a = u(rng) - 0.5;
    p.omega_b = u(rng) - 0.5;
    const FirstMomentCheck fm = first_moment_check(p, rho0, grid(1.0, 11));
    CHECK(fm.max_residual < 1e-6);
    CHECK(fm.trace_error < 1e-9);
    CHECK(fm.min_eigenvalue > -1e-8);
  }
}

TEST_CASE("restricting the total number") {
  auto space = space2(3);
  CVector psi = fock_state(space, {1, 0}).vector() + fock_state(space, {3, 3}).vector();
  const QuantumState r = restrict_total(QuantumState::pure(space, psi), 3);
  CHECK(r.norm_tracked() == doctest::Approx(1.0));
  CHECK(r.population(space->index_of(std::vector<int>{1, 0})) == doctest::Approx(1.0));
}
