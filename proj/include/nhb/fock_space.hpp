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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nhb/types.hpp"

namespace nhb {

/// Truncated multimode bosonic Hilbert space.
///
/// Mode k keeps occupations 0..cutoffs[k] (inclusive). Basis index is the
/// mixed-radix number of the occupation tuple with mode 0 most significant,
/// so the ordering matches a Kronecker product a_0 (x) a_1 (x) ... .
class FockSpace {
 public:
  static constexpr std::size_t kDefaultMaxDimension = 4'000'000;

  explicit FockSpace(std::vector<int> cutoffs,
                     std::size_t max_dimension = kDefaultMaxDimension);

  int num_modes() const { return static_cast<int>(cutoffs_.size()); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::size_t dimension() const { return dimension_; }

  std::size_t index_of(std::span<const int> occupations) const;
  std::vector<int> occupations(std::size_t index) const;
  int occupation(std::size_t index, int mode) const {
    return occ_[index * cutoffs_.size() + static_cast<std::size_t>(mode)];
  }
  int total_number(std::size_t index) const { return totals_[index]; }

  /// Largest total excitation number representable in the space.
  int max_total() const { return static_cast<int>(sectors_.size()) - 1; }
  /// Basis indices with total excitation number n, ascending.
  const std::vector<std::size_t>& sector(int n) const;

  /// Largest total number n for which the sector equals the untruncated one.
  int complete_sector_limit() const;

  bool operator==(const FockSpace& other) const {
    return cutoffs_ == other.cutoffs_;
  }

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
  std::vector<int> occ_;
  std::vector<int> totals_;
  std::vector<std::vector<std::size_t>> sectors_;
};

/// Validating factory. Throws ConfigError / BudgetExceeded.
FockSpace make_space(int num_modes, const std::vector<int>& cutoffs,
                     std::size_t max_dimension = FockSpace::kDefaultMaxDimension);

enum class OperatorKind { annihilation, creation, number, hop };

std::string to_string(OperatorKind kind);

struct OperatorLabel {
  OperatorKind kind = OperatorKind::annihilation;
  int mode = 0;
  int target_mode = -1;  ///< only for hop: a_target^dagger a_mode
};

/// Dense matrix of a single-mode ladder operator (or a hop a_k^dag a_j).
struct ModeOperator {
  CMatrix matrix;
  OperatorLabel label;
};

/// Dense operators are limited to this dimension.
inline constexpr std::size_t kMaxDenseDimension = 2048;

ModeOperator mode_operator(const FockSpace& space, int mode, OperatorKind kind,
                           int target_mode = -1);

/// Number-conserving quadratic form sum_jk C_jk a_j^dag a_k restricted to a set
/// of basis states (whole space or one total-number sector).
///
/// Only matrix-vector products and dense assembly are exposed; the hop table is
/// built once and reused for every coefficient matrix.
class QuadraticForm {
 public:
  static QuadraticForm full(const FockSpace& space);
  static QuadraticForm sector(const FockSpace& space, int total);

  std::size_t dimension() const { return basis_.size(); }
  int num_modes() const { return num_modes_; }
  /// Global basis index of each local index.
  const std::vector<std::size_t>& basis() const { return basis_; }

  /// out = (sum_jk C_jk a_j^dag a_k) in
  void apply(const CMatrix& coefficients, const CVector& in, CVector& out) const;
  CMatrix dense(const CMatrix& coefficients) const;

 private:
  struct Hop {
    std::uint32_t from;
    std::uint32_t to;
    double factor;
  };

  QuadraticForm(const FockSpace& space, std::vector<std::size_t> basis);

  int num_modes_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<double>> diagonal_;  // [mode][local] occupation
  std::vector<std::vector<Hop>> hops_;         // [j*N+k] for j != k
};

/// H = sum_jk Ha_jk a_j^dag a_k as a dense matrix on the whole space.
CMatrix build_hamiltonian(const FockSpace& space, const CMatrix& coefficients);

CMatrix total_number_operator(const FockSpace& space);

}  // namespace nhb
