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

#include "nhb/evolution.hpp"

using namespace nhb;

namespace {

ControlSchedule preset(double lambda, double phi_a, Passage passage = Passage::ket) {
  ControlSchedule s;
  s.theta = theta_linear(1.0);
  s.alpha = ScalarSchedule::constant(0.0);
  s.phi_a = phi_a;
  s.lambda = lambda;
  apply_lambda_rule(s, GammaSign::norm_restoring, passage);
  return s;
}

IntegratorConfig grid(std::size_t n) {
  IntegratorConfig cfg;
  cfg.sample_times = uniform_grid(1.0, n);
  return cfg;
}

QuantumState::SpacePtr space2(int c) {
  return std::make_shared<const FockSpace>(make_space(2, {c, c}));
}

double amplitude2(const QuantumState& s, std::vector<int> occ) {
  return std::norm(s.vector()[static_cast<Eigen::Index>(s.space()->index_of(occ))]);
}

}  // namespace

TEST_CASE("integrator reproduces exponential decay") {
  IntegratorConfig cfg;
  const std::vector<double> times{0.0, 0.5, 1.0, 2.0};
  CVector y(2);
  y << 1.0, Complex(0.0, 1.0);
  std::vector<CVector> seen;
  integrate([](double, const CVector& x, CVector& dx) { dx = Complex(-1.0, 2.0) * x; }, y, times,
            cfg, [&](std::size_t, double, const CVector& x) { seen.push_back(x); });
  REQUIRE(seen.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK((seen[i] - y * std::exp(Complex(-1.0, 2.0) * times[i])).norm() < 1e-9);
  }
  IntegratorConfig bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(1.0), ConfigError);
  CHECK(uniform_grid(2.0, 5) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("constant beam splitter") {
  // H = g (a^dag b + b^dag a): |1,0> -> cos(gt)|1,0> - i sin(gt)|0,1>.
  auto space = space2(2);
  const double g = 1.3;
  CMatrix ha = CMatrix::Zero(2, 2);
  ha(0, 1) = ha(1, 0) = g;
  const Trajectory tr = evolve_coefficients([&](double) { return ha; }, fock_state(space, {1, 0}), grid(11));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    CHECK(amplitude2(tr.states[i], {1, 0}) == doctest::Approx(std::pow(std::cos(g * t), 2)).epsilon(1e-9));
    CHECK(amplitude2(tr.states[i], {0, 1}) == doctest::Approx(std::pow(std::sin(g * t), 2)).epsilon(1e-9));
  }
}

TEST_CASE("constant loss") {
  // Ha = diag(-i gamma, 0): ||psi||^2 = exp(-2 n gamma t) for |n,0>.
  auto space = space2(4);
  CMatrix ha = CMatrix::Zero(2, 2);
  ha(0, 0) = Complex(0.0, -0.7);
  const Trajectory tr = evolve_coefficients([&](double) { return ha; }, fock_state(space, {3, 0}), grid(6));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(tr.states[i].vector().squaredNorm() ==
          doctest::Approx(std::exp(-2.0 * 3 * 0.7 * tr.times[i])).epsilon(1e-9));
  }
}

TEST_CASE("Hermitian limit conserves the norm and transfers the state") {
  auto space = space2(5);
  const Trajectory tr = evolve_ket(preset(0.0, 0.0), fock_state(space, {5, 0}), grid(101));
  for (const auto& st : tr.states) CHECK(st.vector().squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(amplitude2(tr.final_state(), {0, 5}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("PT-symmetric transfer is perfect at the end") {
  auto space = space2(5);
  const Trajectory tr = evolve_ket(preset(kPi, kPi), fock_state(space, {5, 0}), grid(101));
  CHECK(amplitude2(tr.final_state(), {0, 5}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tr.series("norm").size() == 101);
}

TEST_CASE("vacuum stays vacuum") {
  auto space = space2(3);
  const Trajectory tr = evolve_ket(preset(1.2, 0.0), fock_state(space, {0, 0}), grid(11));
  CHECK(tr.final_state().vector()[0] == Complex(1.0, 0.0));
  CHECK(tr.final_state().vector().tail(15).norm() == 0.0);
}

TEST_CASE("dual evolution") {
  auto space = space2(4);
  const ControlSchedule herm = preset(0.0, 0.0);
  const QuantumState psi = fock_state(space, {2, 1});
  const Trajectory a = evolve_ket(herm, psi, grid(11));
  const Trajectory b = evolve_dual(herm, psi, grid(11));
  CHECK((a.final_state().vector() - b.final_state().vector()).norm() < 1e-12);

  // Mirror protocol: phi = -pi/2 on the dual passage moves the magnon to the cavity.
  ControlSchedule mirror = preset(0.5, 0.0, Passage::dual);
  mirror.phi = -kPi / 2.0;
  auto big = space2(5);
  const Trajectory m = evolve_dual(mirror, fock_state(big, {0, 5}), grid(101));
  CHECK(amplitude2(m.final_state(), {5, 0}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("density evolution matches the pure trajectory") {
  auto space = space2(3);
  const ControlSchedule s = preset(1.2, 0.0);
  const QuantumState psi = fock_state(space, {2, 1});
  const Trajectory pure = evolve_ket(s, psi, grid(11));
  const Trajectory dens = evolve_density(s, QuantumState::density(space, psi.matrix()), grid(11));
  const CVector v = pure.final_state().vector();
  CHECK((dens.final_state().matrix() - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sector blocks and full space agree") {
  auto space = space2(4);
  const ControlSchedule s = preset(1.2, 0.0);
  CVector mix = fock_state(space, {1, 0}).vector() + fock_state(space, {2, 2}).vector();
  const QuantumState psi = QuantumState::pure(space, mix / mix.norm());
  EvolutionOptions full;
  full.use_sectors = false;
  const Trajectory a = evolve_ket(s, psi, grid(21));
  const Trajectory b = evolve_ket(s, psi, grid(21), full);
  CHECK((a.final_state().vector() - b.final_state().vector()).norm() < 1e-8);
  CHECK_FALSE(b.metadata.sector_blocks);
}

TEST_CASE("passage overlap and norm prediction") {
  for (double lambda : {0.5, 1.2}) {
    const PassageCheck pc = passage_check(preset(lambda, 0.0), 5, grid(101));
    CHECK(pc.overlap_deficit < 1e-6);
    CHECK(pc.norm_ratio_error < 1e-6);
  }
  // With the opposite sign the norm is not restored at the end.
  ControlSchedule wrong = preset(1.0, 0.0);
  wrong.Gamma = -wrong.Gamma;
  const PassageCheck pc = passage_check(wrong, 5, grid(101));
  CHECK(pc.overlap_deficit < 1e-6);
  CHECK(pc.norm.back() == doctest::Approx(std::exp(-5.0)).epsilon(1e-6));
}

TEST_CASE("schedule fingerprints") {
  CHECK(schedule_fingerprint(preset(1.0, 0.0)) == schedule_fingerprint(preset(1.0, 0.0)));
  CHECK(schedule_fingerprint(preset(1.0, 0.0)) != schedule_fingerprint(preset(1.2, 0.0)));
}
