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

#include "nhb/frames.hpp"

using namespace nhb;

namespace {

FrameParams constant_frame(int n, std::vector<double> theta, std::vector<double> alpha) {
  FrameParams p;
  p.num_modes = n;
  for (double x : theta) p.theta.push_back(ScalarSchedule::constant(x));
  for (double x : alpha) p.alpha.push_back(ScalarSchedule::constant(x));
  return p;
}

FrameParams random_frame(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FrameParams p;
  p.num_modes = n;
  for (int k = 0; k < n - 1; ++k) {
    p.theta.push_back(ScalarSchedule::harmonic(u(rng), u(rng), 2.0 + u(rng), u(rng)));
    p.alpha.push_back(ScalarSchedule::harmonic(u(rng), u(rng), 2.0 + u(rng), u(rng)));
  }
  return p;
}

// Two-mode frame written out by hand.
CMatrix two_mode_frame(double th, double al) {
  CMatrix m(2, 2);
  m(0, 0) = std::cos(th) * std::exp(kI * al / 2.0);
  m(0, 1) = -std::sin(th) * std::exp(-kI * al / 2.0);
  m(1, 0) = std::sin(th) * std::exp(kI * al / 2.0);
  m(1, 1) = std::cos(th) * std::exp(-kI * al / 2.0);
  return m;
}

}  // namespace

TEST_CASE("bright vectors") {
  CVector b = bright_vector(constant_frame(2, {0.0}, {0.0}), 1, 0.0);
  CHECK(std::abs(b[0]) < 1e-15);
  CHECK(b[1].real() == doctest::Approx(1.0));
  b = bright_vector(constant_frame(2, {kPi / 4.0}, {0.0}), 1, 0.0);
  CHECK(b[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(b[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  std::mt19937_64 rng(1);
  for (int draw = 0; draw < 20; ++draw) {
    const FrameParams p = random_frame(5, rng);
    for (int k = 0; k < 5; ++k) CHECK(bright_vector(p, k, 0.3).norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("two-mode frame matrix") {
  CHECK((frame_matrix(constant_frame(2, {0.0}, {0.0}), 0.0).m_dagger - CMatrix::Identity(2, 2)).norm() < 1e-15);
  const CMatrix flip = frame_matrix(constant_frame(2, {kPi / 2.0}, {0.0}), 0.0).m_dagger;
  CHECK(std::abs(flip(0, 0)) < 1e-15);
  CHECK(std::abs(flip(1, 1)) < 1e-15);
  CHECK(flip(0, 1).real() == doctest::Approx(-1.0));
  CHECK(flip(1, 0).real() == doctest::Approx(1.0));
  const CMatrix m = frame_matrix(constant_frame(2, {0.4}, {1.1}), 0.0).m_dagger;
  CHECK((m - two_mode_frame(0.4, 1.1)).norm() < 1e-14);
}

TEST_CASE("frame matrices are unitary") {
  std::mt19937_64 rng(2);
  for (int draw = 0; draw < 10; ++draw) {
    const CMatrix m = frame_matrix(random_frame(4, rng), 0.7).m_dagger;
    CHECK((m * m.adjoint() - CMatrix::Identity(4, 4)).norm() < 1e-12);
  }
}

TEST_CASE("gauge potential") {
  const FrameParams still = constant_frame(3, {0.3, 0.9}, {0.2, -0.4});
  CHECK(gauge_potential(still, 0.5).A.norm() < 1e-15);

  FrameParams lin;
  lin.num_modes = 2;
  lin.theta = {ScalarSchedule::polynomial({0.0, kPi / 2.0})};
  lin.alpha = {ScalarSchedule::constant(0.0)};
  const CMatrix a = gauge_potential(lin, 0.37).A;
  CHECK(std::abs(a(0, 0)) < 1e-15);
  CHECK(std::abs(a(1, 1)) < 1e-15);
  CHECK(std::abs(a(0, 1) - kI * kPi / 2.0) < 1e-14);
  CHECK(std::abs(a(1, 0) + kI * kPi / 2.0) < 1e-14);

  std::mt19937_64 rng(4);
  const FrameParams p = random_frame(3, rng);
  const CMatrix exact = gauge_potential(p, 0.42).A;
  const CMatrix fd = gauge_potential(p, 0.42, GaugeMethod::finite_difference).A;
  CHECK((exact - fd).cwiseAbs().maxCoeff() < 1e-8);
  // A is Hermitian because M is unitary.
  CHECK((exact - exact.adjoint()).norm() < 1e-12);
}

TEST_CASE("rotated coefficients") {
  const FrameParams still = constant_frame(2, {0.3}, {0.5});
  CHECK(rotated_coefficients(CMatrix::Zero(2, 2), still, 0.0).norm() < 1e-15);
  CMatrix h(2, 2);
  h << 1.0, Complex(0.2, 0.3), Complex(0.2, -0.3), -0.5;
  const CMatrix r = rotated_coefficients(h, still, 0.0);
  CHECK((r - r.adjoint()).norm() < 1e-14);
  const CMatrix m = two_mode_frame(0.3, 0.5);
  CHECK((r - m * h * m.adjoint()).norm() < 1e-14);
}

TEST_CASE("upper-triangular check") {
  CMatrix u(2, 2);
  u << 1.0, 2.0, 0.0, 3.0;
  TriangularCheck c = check_upper_triangular(u, 1e-8);
  CHECK(c.pass);
  CHECK(c.residual == 0.0);
  u(1, 0) = 0.3;
  c = check_upper_triangular(u, 1e-8);
  CHECK_FALSE(c.pass);
  CHECK(c.residual == doctest::Approx(0.3));
}

TEST_CASE("frame unitary conjugates mu_k(t) back to mu_k(0)") {
  std::mt19937_64 rng(6);
  for (int n : {2, 3}) {
    const int cutoff = 3;
    const FockSpace space = make_space(n, std::vector<int>(static_cast<std::size_t>(n), cutoff));
    const FrameParams p = random_frame(n, rng);
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    CHECK((frame_unitary(space, p, 0.0) - CMatrix::Identity(dim, dim)).norm() < 1e-12);
    for (FactorOrder order : {FactorOrder::alpha_theta, FactorOrder::theta_alpha}) {
      const CMatrix v = frame_unitary(space, p, 0.6, order);
      CHECK((v.adjoint() * v - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
      for (int k = 0; k < n; ++k) {
        const CMatrix lhs = v.adjoint() * ancillary_operator(space, p, k, 0.6) * v;
        const CMatrix rhs = ancillary_operator(space, p, k, 0.0);
        for (std::size_t col = 0; col < space.dimension(); ++col) {
          if (space.total_number(col) > cutoff) continue;
          const auto c = static_cast<Eigen::Index>(col);
          CHECK((lhs.col(c) - rhs.col(c)).cwiseAbs().maxCoeff() < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("ancillary Fock states") {
  std::mt19937_64 rng(8);
  const FockSpace space = make_space(3, {4, 4, 4});
  const FrameParams p = random_frame(3, rng);
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  CVector vac = CVector::Zero(dim);
  vac[0] = 1.0;
  for (int k = 0; k < 3; ++k) {
    const CMatrix up = ancillary_operator(space, p, k, 0.25).adjoint();
    CVector expected = vac;
    for (int n = 1; n <= 4; ++n) {
      expected = up * expected / std::sqrt(static_cast<double>(n));
      const CVector got = ancillary_fock_state(space, p, k, n, 0.25);
      CHECK((got - expected).norm() < 1e-12);
      CHECK(got.norm() == doctest::Approx(1.0));
    }
  }
  CHECK_THROWS(ancillary_fock_state(space, p, 0, 5, 0.0));
}
