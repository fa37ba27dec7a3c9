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

#include "nhb/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhb {

FockSpace::FockSpace(std::vector<int> cutoffs, std::size_t max_dimension)
    : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw ConfigError("FockSpace: at least one mode required");
  dimension_ = 1;
  for (int c : cutoffs_) {
    if (c < 1) throw ConfigError("FockSpace: cutoff must be >= 1, got " + std::to_string(c));
    const auto levels = static_cast<std::size_t>(c) + 1;
    if (dimension_ > max_dimension / levels) {
      throw BudgetExceeded("FockSpace: dimension exceeds budget of " +
                           std::to_string(max_dimension));
    }
    dimension_ *= levels;
  }
  if (dimension_ > max_dimension) {
    throw BudgetExceeded("FockSpace: dimension " + std::to_string(dimension_) +
                         " exceeds budget of " + std::to_string(max_dimension));
  }

  const std::size_t n = cutoffs_.size();
  strides_.assign(n, 1);
  for (std::size_t k = n - 1; k > 0; --k) {
    strides_[k - 1] = strides_[k] * static_cast<std::size_t>(cutoffs_[k] + 1);
  }

  int max_total = 0;
  for (int c : cutoffs_) max_total += c;
  sectors_.resize(static_cast<std::size_t>(max_total) + 1);
  occ_.resize(dimension_ * n);
  totals_.resize(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    std::size_t rest = i;
    int total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const int o = static_cast<int>(rest / strides_[k]);
      rest %= strides_[k];
      occ_[i * n + k] = o;
      total += o;
    }
    totals_[i] = total;
    sectors_[static_cast<std::size_t>(total)].push_back(i);
  }
}

std::size_t FockSpace::index_of(std::span<const int> occupations) const {
  if (occupations.size() != cutoffs_.size()) {
    throw DimensionMismatch("FockSpace::index_of: expected " +
                            std::to_string(cutoffs_.size()) + " occupations");
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] > cutoffs_[k]) {
      throw ConfigError("FockSpace::index_of: occupation " + std::to_string(occupations[k]) +
                        " outside [0, " + std::to_string(cutoffs_[k]) + "] for mode " +
                        std::to_string(k));
    }
    index += static_cast<std::size_t>(occupations[k]) * strides_[k];
  }
  return index;
}

std::vector<int> FockSpace::occupations(std::size_t index) const {
  if (index >= dimension_) throw ConfigError("FockSpace::occupations: index out of range");
  const std::size_t n = cutoffs_.size();
  return {occ_.begin() + static_cast<std::ptrdiff_t>(index * n),
          occ_.begin() + static_cast<std::ptrdiff_t>((index + 1) * n)};
}

const std::vector<std::size_t>& FockSpace::sector(int n) const {
  if (n < 0 || n > max_total()) {
    throw ConfigError("FockSpace::sector: total number " + std::to_string(n) + " out of range");
  }
  return sectors_[static_cast<std::size_t>(n)];
}

int FockSpace::complete_sector_limit() const {
  int limit = std::numeric_limits<int>::max();
  for (int c : cutoffs_) limit = std::min(limit, c);
  return limit;
}

FockSpace make_space(int num_modes, const std::vector<int>& cutoffs, std::size_t max_dimension) {
  if (num_modes < 1) throw ConfigError("make_space: num_modes must be >= 1");
  if (static_cast<std::size_t>(num_modes) != cutoffs.size()) {
    throw ConfigError("make_space: expected " + std::to_string(num_modes) + " cutoffs, got " +
                      std::to_string(cutoffs.size()));
  }
  return FockSpace(cutoffs, max_dimension);
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::annihilation: return "annihilation";
    case OperatorKind::creation: return "creation";
    case OperatorKind::number: return "number";
    case OperatorKind::hop: return "hop";
  }
  return "unknown";
}

namespace {

void check_dense(const FockSpace& space, const char* what) {
  if (space.dimension() > kMaxDenseDimension) {
    throw BudgetExceeded(std::string(what) + ": dense matrix of dimension " +
                         std::to_string(space.dimension()) + " exceeds limit " +
                         std::to_string(kMaxDenseDimension));
  }
}

void check_mode(const FockSpace& space, int mode, const char* what) {
  if (mode < 0 || mode >= space.num_modes()) {
    throw ConfigError(std::string(what) + ": mode index " + std::to_string(mode) +
                      " out of range");
  }
}

}  // namespace

ModeOperator mode_operator(const FockSpace& space, int mode, OperatorKind kind, int target_mode) {
  check_mode(space, mode, "mode_operator");
  check_dense(space, "mode_operator");
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  ModeOperator op{CMatrix::Zero(dim, dim), {kind, mode, -1}};

  if (kind == OperatorKind::hop) {
    check_mode(space, target_mode, "mode_operator(hop)");
    op.label.target_mode = target_mode;
    CMatrix c = CMatrix::Zero(space.num_modes(), space.num_modes());
    c(target_mode, mode) = 1.0;
    op.matrix = build_hamiltonian(space, c);
    return op;
  }

  const int n_modes = space.num_modes();
  std::vector<int> occ(static_cast<std::size_t>(n_modes));
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int o = space.occupation(i, mode);
    const auto col = static_cast<Eigen::Index>(i);
    if (kind == OperatorKind::number) {
      op.matrix(col, col) = static_cast<double>(o);
      continue;
    }
    if (o == 0) continue;
    for (int k = 0; k < n_modes; ++k) occ[static_cast<std::size_t>(k)] = space.occupation(i, k);
    occ[static_cast<std::size_t>(mode)] = o - 1;
    const auto row = static_cast<Eigen::Index>(space.index_of(occ));
    op.matrix(row, col) = std::sqrt(static_cast<double>(o));
  }
  if (kind == OperatorKind::creation) op.matrix.adjointInPlace();
  return op;
}

QuadraticForm::QuadraticForm(const FockSpace& space, std::vector<std::size_t> basis)
    : num_modes_(space.num_modes()), basis_(std::move(basis)) {
  const auto n = static_cast<std::size_t>(num_modes_);
  const std::size_t local_dim = basis_.size();
  if (local_dim > std::numeric_limits<std::uint32_t>::max()) {
    throw BudgetExceeded("QuadraticForm: basis too large");
  }
  // Global -> local lookup; the sector basis is sorted so binary search works.
  auto local_of = [&](std::size_t global) -> std::int64_t {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), global);
    if (it == basis_.end() || *it != global) return -1;
    return it - basis_.begin();
  };

  diagonal_.assign(n, std::vector<double>(local_dim));
  hops_.assign(n * n, {});
  std::vector<int> occ(n);
  for (std::size_t l = 0; l < local_dim; ++l) {
    const std::size_t g = basis_[l];
    for (std::size_t k = 0; k < n; ++k) {
      occ[k] = space.occupation(g, static_cast<int>(k));
      diagonal_[k][l] = occ[k];
    }
    // a_j^dag a_k |occ>, j != k
    for (std::size_t k = 0; k < n; ++k) {
      if (occ[k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k || occ[j] >= space.cutoffs()[j]) continue;
        const double factor = std::sqrt(static_cast<double>(occ[k]) * (occ[j] + 1));
        --occ[k];
        ++occ[j];
        const std::int64_t target = local_of(space.index_of(occ));
        ++occ[k];
        --occ[j];
        if (target < 0) continue;
        hops_[j * n + k].push_back(
            {static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(target), factor});
      }
    }
  }
}

QuadraticForm QuadraticForm::full(const FockSpace& space) {
  std::vector<std::size_t> basis(space.dimension());
  for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
  return QuadraticForm(space, std::move(basis));
}

QuadraticForm QuadraticForm::sector(const FockSpace& space, int total) {
  return QuadraticForm(space, space.sector(total));
}

void QuadraticForm::apply(const CMatrix& coefficients, const CVector& in, CVector& out) const {
  const auto n = static_cast<Eigen::Index>(num_modes_);
  if (coefficients.rows() != n || coefficients.cols() != n) {
    throw DimensionMismatch("QuadraticForm::apply: coefficient matrix must be " +
                            std::to_string(n) + "x" + std::to_string(n));
  }
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  if (in.size() != dim) throw DimensionMismatch("QuadraticForm::apply: vector size mismatch");
  out.setZero(dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex c = coefficients(k, k);
    if (c == Complex{}) continue;
    const auto& d = diagonal_[static_cast<std::size_t>(k)];
    for (Eigen::Index l = 0; l < dim; ++l) out[l] += c * d[static_cast<std::size_t>(l)] * in[l];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const Complex c = coefficients(j, k);
      if (c == Complex{}) continue;
      for (const Hop& h : hops_[static_cast<std::size_t>(j * n + k)]) {
        out[h.to] += c * h.factor * in[h.from];
      }
    }
  }
}

CMatrix QuadraticForm::dense(const CMatrix& coefficients) const {
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  if (basis_.size() > kMaxDenseDimension) {
    throw BudgetExceeded("QuadraticForm::dense: dimension " + std::to_string(dim) +
                         " exceeds limit " + std::to_string(kMaxDenseDimension));
  }
  const auto n = static_cast<Eigen::Index>(num_modes_);
  if (coefficients.rows() != n || coefficients.cols() != n) {
    throw DimensionMismatch("QuadraticForm::dense: coefficient matrix must be " +
                            std::to_string(n) + "x" + std::to_string(n));
  }
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& d = diagonal_[static_cast<std::size_t>(k)];
    for (Eigen::Index l = 0; l < dim; ++l) h(l, l) += coefficients(k, k) * d[static_cast<std::size_t>(l)];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      for (const Hop& hop : hops_[static_cast<std::size_t>(j * n + k)]) {
        h(hop.to, hop.from) += coefficients(j, k) * hop.factor;
      }
    }
  }
  return h;
}

CMatrix build_hamiltonian(const FockSpace& space, const CMatrix& coefficients) {
  const auto n = static_cast<Eigen::Index>(space.num_modes());
  if (coefficients.rows() != n || coefficients.cols() != n) {
    throw DimensionMismatch("build_hamiltonian: Ha must be " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
  check_dense(space, "build_hamiltonian");
  return QuadraticForm::full(space).dense(coefficients);
}

CMatrix total_number_operator(const FockSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.num_modes());
  check_dense(space, "total_number_operator");
  return QuadraticForm::full(space).dense(CMatrix::Identity(n, n));
}

}  // namespace nhb
