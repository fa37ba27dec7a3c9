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

#include "nhb/integrator.hpp"
#include "nhb/spectrum.hpp"

using namespace nhb;

namespace {

ControlSchedule preset(double lambda, double phi_a) {
  ControlSchedule s;
  s.theta = theta_linear(1.0);
  s.alpha = ScalarSchedule::constant(0.0);
  s.phi_a = phi_a;
  s.lambda = lambda;
  apply_lambda_rule(s, GammaSign::norm_restoring);
  return s;
}

}  // namespace

TEST_CASE("closed-form eigenvalues match a direct eigensolver") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 50; ++draw) {
    ControlSchedule s;
    s.theta = ScalarSchedule::harmonic(0.8, 0.3, 2.0 + u(rng), u(rng));
    s.alpha = ScalarSchedule::harmonic(0.0, 0.4 * u(rng), 3.0, u(rng));
    s.phi = 0.5 + 2.0 * u(rng);
    s.phi_a = u(rng) < 0.5 ? 0.0 : kPi;
    s.Theta = u(rng) < 0.5 ? 0.0 : kPi;
    s.gamma_a = u(rng);
    s.gamma_b = u(rng);
    s.Gamma = u(rng) - 0.5;
    const double t = u(rng);
    const SpectrumPoint sp = eigenvalues(s, t);
    Eigen::ComplexEigenSolver<CMatrix> es(synthesize_pulses(s, t).Ha);
    const Complex e0 = es.eigenvalues()[0], e1 = es.eigenvalues()[1];
    const double direct = std::abs(sp.E_plus - e0) + std::abs(sp.E_minus - e1);
    const double swapped = std::abs(sp.E_plus - e1) + std::abs(sp.E_minus - e0);
    CHECK(std::min(direct, swapped) < 1e-10);
  }
}

TEST_CASE("PT-symmetric spectrum") {
  const ControlSchedule s = preset(kPi, kPi);
  for (double t : {0.1, 0.5, 0.9}) {
    const double J = synthesize_pulses(s, t).J;
    const double e = std::sqrt(J * J - s.gamma_a * s.gamma_a);
    const SpectrumPoint sp = eigenvalues(s, t);
    CHECK(std::abs(sp.E_plus.imag()) < 1e-10);
    CHECK(std::abs(std::abs(sp.E_plus.real()) - e) < 1e-10);
    CHECK(std::abs(sp.E_plus + sp.E_minus) < 1e-10);
  }
  // J = gamma at t = 0: coalescence.
  CHECK(eigenvalues(s, 0.0).gap < 1e-12);
}

TEST_CASE("PT classification") {
  const ControlSchedule pt = preset(kPi, kPi);
  CHECK(pt_classify(pt, 0.5).symmetric);
  CHECK(pt_classify(pt, 0.5).phase == PtPhase::unbroken);
  CHECK(pt_classify(pt, 0.0).phase == PtPhase::exceptional);
  CHECK_FALSE(pt_classify(preset(0.5, 0.0), 0.5).symmetric);
  // Above the EP threshold the symmetric spectrum turns complex.
  const ControlSchedule strong = preset(4.0 * kPi, kPi);
  CHECK(pt_classify(strong, 0.1).phase == PtPhase::broken);
  CHECK(pt_classify(strong, 0.5).phase == PtPhase::unbroken);
}

TEST_CASE("exceptional point detection") {
  const std::vector<double> grid = uniform_grid(1.0, 1001);
  CHECK(detect_eps(preset(kPi, kPi), grid).empty());
  CHECK(detect_eps(preset(0.5, 0.0), grid).empty());
  // Strong gain: J = gamma where sin(pi t) = 3/4.
  const std::vector<double> eps = detect_eps(preset(4.0 * kPi, kPi), grid);
  REQUIRE(eps.size() == 2);
  CHECK(eps[0] == doctest::Approx(std::asin(0.75) / kPi).epsilon(1e-8));
  CHECK(eps[1] == doctest::Approx(1.0 - std::asin(0.75) / kPi).epsilon(1e-8));
  const std::vector<double> one = detect_eps(preset(1.2, 0.0), grid);
  REQUIRE(one.size() == 1);
  CHECK(eigenvalues(preset(1.2, 0.0), one[0]).gap < 1e-6);
  CHECK(one[0] == doctest::Approx(0.27).epsilon(0.04));
}

TEST_CASE("eigenvector condition number diverges at the EP") {
  const ControlSchedule s = preset(4.0 * kPi, kPi);
  const double near = eigenvector_condition(synthesize_pulses(s, std::asin(0.75) / kPi + 1e-6).Ha);
  const double far = eigenvector_condition(synthesize_pulses(s, 0.5).Ha);
  CHECK(near > 100.0 * far);
}

TEST_CASE("scattering matrix") {
  const ControlSchedule s = preset(1.0, 0.0);
  const CMatrix I = CMatrix::Identity(2, 2);
  CHECK((scattering_matrix(s, 0.3, 0.0).S - I).norm() < 1e-15);
  // Loss on both modes, phi = pi/2, alpha = 0, omega = 0: closed forms with
  // D = -gamma^2 - (J^2 - Gamma^2).
  for (double t : {0.2, 1.0}) {
    const double J = synthesize_pulses(s, t).J;
    const double g = s.gamma_a, G = s.Gamma, g1 = 0.37;
    const double D = -g * g - (J * J - G * G);
    const CMatrix S = scattering_matrix(s, t, g1).S;
    CHECK(std::abs(S(0, 0) - (1.0 + 2.0 * g1 * g / D)) < 1e-10);
    CHECK(std::abs(S(1, 1) - (1.0 + 2.0 * g1 * g / D)) < 1e-10);
    CHECK(std::abs(S(0, 1) - 2.0 * g1 * (J + G) / D) < 1e-10);
    CHECK(std::abs(S(1, 0) + 2.0 * g1 * (J - G) / D) < 1e-10);
  }
}

TEST_CASE("critical coupling absorbs from the cavity port") {
  // theta held at pi/2 forces J = -Gamma; with gamma_1 = gamma_a / 2 the
  // reflection S11 vanishes.
  ControlSchedule s;
  s.theta = ScalarSchedule::constant(kPi / 2.0);
  s.alpha = ScalarSchedule::constant(0.0);
  s.gamma_a = s.gamma_b = 0.8;
  s.Gamma = -0.3;
  CHECK(synthesize_pulses(s, 0.5).J == doctest::Approx(0.3));
  const CMatrix S = scattering_matrix(s, 0.5, s.gamma_a / 2.0).S;
  CHECK(std::abs(S(0, 0)) < 1e-12);
  CHECK(std::abs(S(1, 1)) < 1e-12);
  CHECK(std::abs(S(0, 1)) < 1e-12);
  CHECK(std::abs(S(1, 0)) > 0.1);
}

TEST_CASE("nonreciprocity") {
  const ControlSchedule herm = preset(0.0, 0.0);
  CHECK(nonreciprocity(herm, default_gamma_1(herm)) == 0.0);
  CHECK(default_gamma_1(herm) == doctest::Approx(0.5));
  double previous = 0.0;
  for (double lambda : {0.5, 0.8, 1.0, 1.2}) {
    const ControlSchedule s = preset(lambda, 0.0);
    const double r = nonreciprocity(s, default_gamma_1(s));
    CHECK(r > previous);
    // |S21/S12| = |J - Gamma| / |J + Gamma| at omega = 0.
    const double J = synthesize_pulses(s, s.tau).J;
    CHECK(r == doctest::Approx(std::log10(std::abs(J - s.Gamma) / std::abs(J + s.Gamma))));
    previous = r;
  }
}
