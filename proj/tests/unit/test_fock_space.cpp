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

#include <random>

#include "nhb/fock_space.hpp"

using namespace nhb;

namespace {

// Truncated single-mode annihilator, built directly.
CMatrix ladder(int cutoff) {
  CMatrix a = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

CMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("dimension is the product of cutoff + 1") {
  CHECK(make_space(2, {5, 5}).dimension() == 36);
  CHECK(make_space(2, {60, 60}).dimension() == 3721);
  CHECK(make_space(3, {1, 2, 3}).dimension() == 24);
}

TEST_CASE("invalid spaces are rejected") {
  CHECK_THROWS_AS(make_space(1, {0}), ConfigError);
  CHECK_THROWS_AS(make_space(2, {3}), ConfigError);
  CHECK_THROWS_AS(make_space(2, {100, 100}, 1000), BudgetExceeded);
}

TEST_CASE("index and occupations round-trip") {
  const FockSpace space = make_space(3, {2, 3, 1});
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const std::vector<int> occ = space.occupations(i);
    CHECK(space.index_of(occ) == i);
    CHECK(space.total_number(i) == occ[0] + occ[1] + occ[2]);
  }
  const std::vector<int> occ{2, 0, 1};
  CHECK(space.index_of(occ) == 2 * 8 + 0 * 2 + 1);
}

TEST_CASE("sectors partition the basis") {
  const FockSpace space = make_space(2, {3, 5});
  std::size_t count = 0;
  for (int n = 0; n <= space.max_total(); ++n) {
    for (std::size_t i : space.sector(n)) CHECK(space.total_number(i) == n);
    count += space.sector(n).size();
  }
  CHECK(count == space.dimension());
  CHECK(space.max_total() == 8);
  CHECK(space.complete_sector_limit() == 3);
  CHECK(space.sector(3).size() == 4);
}

TEST_CASE("mode operators match Kronecker products") {
  const FockSpace space = make_space(2, {3, 2});
  const CMatrix a = kron(ladder(3), CMatrix::Identity(3, 3));
  const CMatrix b = kron(CMatrix::Identity(4, 4), ladder(2));
  CHECK((mode_operator(space, 0, OperatorKind::annihilation).matrix - a).norm() < 1e-14);
  CHECK((mode_operator(space, 1, OperatorKind::annihilation).matrix - b).norm() < 1e-14);
  CHECK((mode_operator(space, 1, OperatorKind::creation).matrix - b.adjoint()).norm() < 1e-14);
  CHECK((mode_operator(space, 0, OperatorKind::number).matrix - a.adjoint() * a).norm() < 1e-14);
  const ModeOperator hop = mode_operator(space, 0, OperatorKind::hop, 1);
  CHECK((hop.matrix - b.adjoint() * a).norm() < 1e-14);
  CHECK(hop.label.target_mode == 1);
}

TEST_CASE("identity coefficients give the total number operator") {
  const FockSpace space = make_space(2, {4, 4});
  const CMatrix h = build_hamiltonian(space, CMatrix::Identity(2, 2));
  CHECK((h - total_number_operator(space)).norm() < 1e-14);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -0.25;
  const CMatrix hd = build_hamiltonian(space, d);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    CHECK(hd(k, k).real() == doctest::Approx(1.5 * space.occupation(i, 0) - 0.25 * space.occupation(i, 1)));
  }
  CHECK((hd - CMatrix(hd.diagonal().asDiagonal())).norm() < 1e-14);
}

TEST_CASE("quadratic Hamiltonian matches sum of operator products") {
  std::mt19937_64 rng(3);
  const FockSpace space = make_space(3, {2, 3, 2});
  const CMatrix c = random_matrix(3, rng);
  CMatrix expected = CMatrix::Zero(static_cast<Eigen::Index>(space.dimension()),
                                   static_cast<Eigen::Index>(space.dimension()));
  std::vector<CMatrix> ops;
  for (int k = 0; k < 3; ++k) ops.push_back(mode_operator(space, k, OperatorKind::annihilation).matrix);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) expected += c(j, k) * ops[static_cast<std::size_t>(j)].adjoint() * ops[static_cast<std::size_t>(k)];
  }
  CHECK((build_hamiltonian(space, c) - expected).norm() < 1e-12);
}

TEST_CASE("quadratic Hamiltonians conserve the total number") {
  std::mt19937_64 rng(5);
  for (int n : {2, 3}) {
    const FockSpace space = make_space(n, std::vector<int>(static_cast<std::size_t>(n), 3));
    const CMatrix h = build_hamiltonian(space, random_matrix(n, rng));
    const CMatrix num = total_number_operator(space);
    CHECK((h * num - num * h).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sector form agrees with the dense Hamiltonian") {
  std::mt19937_64 rng(9);
  const FockSpace space = make_space(2, {6, 6});
  const CMatrix c = random_matrix(2, rng);
  const CMatrix h = build_hamiltonian(space, c);
  for (int n : {0, 3, 6, 9}) {
    const QuadraticForm q = QuadraticForm::sector(space, n);
    const CMatrix block = q.dense(c);
    CVector v = CVector::Random(static_cast<Eigen::Index>(q.dimension()));
    CVector out(v.size());
    q.apply(c, v, out);
    CHECK((out - block * v).norm() < 1e-12);
    for (std::size_t i = 0; i < q.dimension(); ++i) {
      for (std::size_t j = 0; j < q.dimension(); ++j) {
        const auto gi = static_cast<Eigen::Index>(q.basis()[i]);
        const auto gj = static_cast<Eigen::Index>(q.basis()[j]);
        CHECK(std::abs(block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - h(gi, gj)) < 1e-12);
      }
    }
  }
  CHECK(QuadraticForm::full(space).dimension() == space.dimension());
}

TEST_CASE("dense operators are refused on large spaces") {
  const FockSpace space = make_space(2, {60, 60});
  CHECK_THROWS_AS(mode_operator(space, 0, OperatorKind::annihilation), BudgetExceeded);
}
