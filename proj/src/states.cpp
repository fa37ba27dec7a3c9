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

#include "nhb/states.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nhb {

std::string to_string(Frame frame) {
  return frame == Frame::laboratory ? "laboratory" : "rotated";
}

namespace {

void check_space(const QuantumState::SpacePtr& space, const char* what) {
  if (!space) throw ConfigError(std::string(what) + ": null space");
}

void check_vector(const FockSpace& space, const CVector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != space.dimension()) {
    throw DimensionMismatch(std::string(what) + ": vector of size " + std::to_string(v.size()) +
                            " does not match space dimension " +
                            std::to_string(space.dimension()));
  }
}

void check_same_space(const QuantumState& a, const QuantumState& b, const char* what) {
  if (a.space() != b.space() && !(*a.space() == *b.space())) {
    throw DimensionMismatch(std::string(what) + ": states live in different spaces");
  }
}

void check_tail(double discarded, double threshold, const char* what) {
  if (discarded > threshold) {
    throw TruncationError(std::string(what) + ": truncation tail mass " +
                          std::to_string(discarded) + " exceeds threshold " +
                          std::to_string(threshold));
  }
}

// Amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff, plus the
// explicitly summed tail mass beyond the cutoff.
struct PoissonAmplitudes {
  CVector kept;
  double tail = 0.0;
  double tail_even = 0.0;
  double tail_odd = 0.0;
};

PoissonAmplitudes poisson_amplitudes(Complex alpha, int cutoff) {
  PoissonAmplitudes out;
  out.kept.resize(cutoff + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  const double mean = std::norm(alpha);
  int n = 0;
  for (;; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    if (n <= cutoff) {
      out.kept[n] = c;
      continue;
    }
    const double p = std::norm(c);
    out.tail += p;
    (n % 2 == 0 ? out.tail_even : out.tail_odd) += p;
    if (n > mean && p < 1e-300) break;
    if (n > cutoff + 100000) break;
  }
  return out;
}

}  // namespace

QuantumState QuantumState::pure(SpacePtr space, CVector psi, Frame frame,
                                TruncationReport report) {
  check_space(space, "QuantumState::pure");
  check_vector(*space, psi, "QuantumState::pure");
  QuantumState s;
  s.kind_ = StateKind::pure;
  s.frame_ = frame;
  s.space_ = std::move(space);
  s.weights_ = {1.0};
  s.components_ = {std::move(psi)};
  s.truncation_ = report;
  return s;
}

QuantumState QuantumState::ensemble(SpacePtr space, std::vector<double> weights,
                                    std::vector<CVector> components, Frame frame,
                                    TruncationReport report) {
  check_space(space, "QuantumState::ensemble");
  if (weights.size() != components.size() || weights.empty()) {
    throw ConfigError("QuantumState::ensemble: need one weight per component");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("QuantumState::ensemble: weights must be >= 0");
  }
  for (const auto& c : components) check_vector(*space, c, "QuantumState::ensemble");
  QuantumState s;
  s.kind_ = StateKind::density;
  s.frame_ = frame;
  s.space_ = std::move(space);
  s.weights_ = std::move(weights);
  s.components_ = std::move(components);
  s.truncation_ = report;
  return s;
}

QuantumState QuantumState::density(SpacePtr space, const CMatrix& rho, Frame frame) {
  check_space(space, "QuantumState::density");
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionMismatch("QuantumState::density: matrix shape does not match space");
  }
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ConfigError("QuantumState::density: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-10 * scale) {
    throw ConfigError("QuantumState::density: matrix is not positive semidefinite");
  }
  std::vector<double> w;
  std::vector<CVector> c;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= 0.0) continue;
    w.push_back(ev[i]);
    c.emplace_back(es.eigenvectors().col(i));
  }
  if (w.empty()) {
    w.push_back(0.0);
    c.emplace_back(CVector::Zero(dim));
  }
  return ensemble(std::move(space), std::move(w), std::move(c), frame);
}

const CVector& QuantumState::vector() const {
  if (kind_ != StateKind::pure) throw ConfigError("QuantumState::vector: state is not pure");
  return components_.front();
}

double QuantumState::norm_tracked() const {
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    total += weights_[i] * components_[i].squaredNorm();
  }
  return total;
}

CMatrix QuantumState::matrix() const {
  if (space_->dimension() > kMaxDenseDimension) {
    throw BudgetExceeded("QuantumState::matrix: dense density operator exceeds limit");
  }
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    rho.noalias() += weights_[i] * components_[i] * components_[i].adjoint();
  }
  return rho;
}

Complex QuantumState::expectation(const CMatrix& op) const {
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  if (op.rows() != dim || op.cols() != dim) {
    throw DimensionMismatch("QuantumState::expectation: operator shape mismatch");
  }
  Complex total{};
  for (std::size_t i = 0; i < components_.size(); ++i) {
    total += weights_[i] * components_[i].dot(op * components_[i]);
  }
  return total;
}

double QuantumState::population(std::size_t index) const {
  if (index >= space_->dimension()) throw ConfigError("QuantumState::population: bad index");
  double total = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    total += weights_[i] * std::norm(components_[i][static_cast<Eigen::Index>(index)]);
  }
  return total;
}

QuantumState QuantumState::with_frame(Frame frame) const {
  QuantumState s = *this;
  s.frame_ = frame;
  return s;
}

QuantumState fock_state(const QuantumState::SpacePtr& space, const std::vector<int>& occupations) {
  check_space(space, "fock_state");
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(space->dimension()));
  psi[static_cast<Eigen::Index>(space->index_of(occupations))] = 1.0;
  return QuantumState::pure(space, std::move(psi));
}

CVector single_mode_vector(const FockSpace& space, int mode, const CVector& amplitudes) {
  if (mode < 0 || mode >= space.num_modes()) {
    throw ConfigError("single_mode_vector: mode index out of range");
  }
  const int cutoff = space.cutoffs()[static_cast<std::size_t>(mode)];
  if (amplitudes.size() > cutoff + 1) {
    throw TruncationError("single_mode_vector: " + std::to_string(amplitudes.size()) +
                          " amplitudes do not fit cutoff " + std::to_string(cutoff));
  }
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(space.dimension()));
  std::vector<int> occ(static_cast<std::size_t>(space.num_modes()), 0);
  for (Eigen::Index n = 0; n < amplitudes.size(); ++n) {
    occ[static_cast<std::size_t>(mode)] = static_cast<int>(n);
    psi[static_cast<Eigen::Index>(space.index_of(occ))] = amplitudes[n];
  }
  return psi;
}

QuantumState coherent_state(const QuantumState::SpacePtr& space, int mode, Complex alpha,
                            double tail_threshold) {
  check_space(space, "coherent_state");
  if (mode < 0 || mode >= space->num_modes()) throw ConfigError("coherent_state: bad mode");
  const int cutoff = space->cutoffs()[static_cast<std::size_t>(mode)];
  PoissonAmplitudes p = poisson_amplitudes(alpha, cutoff);
  const double retained = p.kept.squaredNorm();
  check_tail(p.tail, tail_threshold, "coherent_state");
  CVector amps = p.kept / std::sqrt(retained);
  return QuantumState::pure(space, single_mode_vector(*space, mode, amps), Frame::laboratory,
                            {retained, p.tail});
}

QuantumState cat_state(const QuantumState::SpacePtr& space, int mode, Complex alpha,
                       double tail_threshold) {
  check_space(space, "cat_state");
  if (mode < 0 || mode >= space->num_modes()) throw ConfigError("cat_state: bad mode");
  const int cutoff = space->cutoffs()[static_cast<std::size_t>(mode)];
  PoissonAmplitudes p = poisson_amplitudes(alpha, cutoff);
  // |a> + |-a> keeps the even components with doubled amplitude.
  const double norm2 = 2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha)));
  CVector amps = CVector::Zero(cutoff + 1);
  for (int n = 0; n <= cutoff; n += 2) amps[n] = 2.0 * p.kept[n];
  amps /= std::sqrt(norm2);
  const double retained = amps.squaredNorm();
  const double discarded = 4.0 * p.tail_even / norm2;
  check_tail(discarded, tail_threshold, "cat_state");
  amps /= std::sqrt(retained);
  return QuantumState::pure(space, single_mode_vector(*space, mode, amps), Frame::laboratory,
                            {retained, discarded});
}

QuantumState binomial_code_state(const QuantumState::SpacePtr& space, int mode) {
  check_space(space, "binomial_code_state");
  if (mode < 0 || mode >= space->num_modes()) throw ConfigError("binomial_code_state: bad mode");
  if (space->cutoffs()[static_cast<std::size_t>(mode)] < 6) {
    throw TruncationError("binomial_code_state: cutoff must be >= 6");
  }
  CVector amps = CVector::Zero(7);
  amps[2] = std::sqrt(3.0) / 2.0;
  amps[6] = 0.5;
  return QuantumState::pure(space, single_mode_vector(*space, mode, amps));
}

QuantumState thermal_state(const QuantumState::SpacePtr& space, int mode, double nbar,
                           double tail_threshold) {
  check_space(space, "thermal_state");
  if (mode < 0 || mode >= space->num_modes()) throw ConfigError("thermal_state: bad mode");
  if (!(nbar >= 0.0)) throw ConfigError("thermal_state: nbar must be >= 0");
  const int cutoff = space->cutoffs()[static_cast<std::size_t>(mode)];
  const double ratio = nbar / (1.0 + nbar);
  std::vector<double> p(static_cast<std::size_t>(cutoff) + 1);
  double retained = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    p[static_cast<std::size_t>(n)] = std::pow(ratio, n) / (1.0 + nbar);
    retained += p[static_cast<std::size_t>(n)];
  }
  const double discarded = std::pow(ratio, cutoff + 1);
  check_tail(discarded, tail_threshold, "thermal_state");
  std::vector<double> weights;
  std::vector<CVector> components;
  std::vector<int> occ(static_cast<std::size_t>(space->num_modes()), 0);
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  for (int n = 0; n <= cutoff; ++n) {
    occ[static_cast<std::size_t>(mode)] = n;
    CVector e = CVector::Zero(dim);
    e[static_cast<Eigen::Index>(space->index_of(occ))] = 1.0;
    weights.push_back(p[static_cast<std::size_t>(n)] / retained);
    components.push_back(std::move(e));
  }
  return QuantumState::ensemble(space, std::move(weights), std::move(components),
                                Frame::laboratory, {retained, discarded});
}

double fidelity(const QuantumState& rho, const QuantumState& psi) {
  check_same_space(rho, psi, "fidelity");
  const CVector& v = psi.vector();
  double total = 0.0;
  for (std::size_t i = 0; i < rho.components().size(); ++i) {
    total += rho.weights()[i] * std::norm(v.dot(rho.components()[i]));
  }
  return total;
}

double fidelity_mixed(const QuantumState& rho, const QuantumState& sigma) {
  check_same_space(rho, sigma, "fidelity_mixed");
  if (sigma.kind() == StateKind::pure) return fidelity(rho, sigma);

  // Fast path: sigma diagonal in the Fock basis, so its support is a set of
  // basis vectors and both operators restrict by selection.
  std::vector<Eigen::Index> support;
  std::vector<double> diag;
  bool diagonal = true;
  for (std::size_t i = 0; i < sigma.components().size() && diagonal; ++i) {
    const CVector& c = sigma.components()[i];
    Eigen::Index hit = -1;
    for (Eigen::Index g = 0; g < c.size(); ++g) {
      if (c[g] == Complex{}) continue;
      if (hit >= 0) {
        diagonal = false;
        break;
      }
      hit = g;
    }
    if (hit < 0) continue;
    if (std::find(support.begin(), support.end(), hit) != support.end()) diagonal = false;
    support.push_back(hit);
    diag.push_back(sigma.weights()[i] * std::norm(c[hit]));
  }
  if (diagonal && !support.empty()) {
    const auto m = static_cast<Eigen::Index>(support.size());
    CMatrix inner = CMatrix::Zero(m, m);
    for (std::size_t i = 0; i < rho.components().size(); ++i) {
      CVector c(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        c[r] = std::sqrt(diag[static_cast<std::size_t>(r)]) *
               rho.components()[i][support[static_cast<std::size_t>(r)]];
      }
      inner.noalias() += rho.weights()[i] * c * c.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(inner, Eigen::EigenvaluesOnly);
    const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
  }

  // Orthonormal basis Q of the support of sigma.
  const auto dim = static_cast<Eigen::Index>(rho.space()->dimension());
  const auto m = static_cast<Eigen::Index>(sigma.components().size());
  CMatrix s(dim, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    s.col(i) = std::sqrt(sigma.weights()[static_cast<std::size_t>(i)]) *
               sigma.components()[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(s);
  qr.setThreshold(1e-13);
  const Eigen::Index rank = qr.rank();
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, rank);

  CMatrix sq = q.adjoint() * s;
  CMatrix sigma_q = sq * sq.adjoint();
  CMatrix rho_q = CMatrix::Zero(rank, rank);
  for (std::size_t i = 0; i < rho.components().size(); ++i) {
    CVector c = q.adjoint() * rho.components()[i];
    rho_q.noalias() += rho.weights()[i] * c * c.adjoint();
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es_sigma(sigma_q);
  RVector sv = es_sigma.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMatrix root = es_sigma.eigenvectors() * sv.asDiagonal() * es_sigma.eigenvectors().adjoint();
  CMatrix inner = root * rho_q * root;
  Eigen::SelfAdjointEigenSolver<CMatrix> es_inner(0.5 * (inner + inner.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const double tr = es_inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

}  // namespace nhb
