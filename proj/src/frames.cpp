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

#include "nhb/frames.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace nhb {

void FrameParams::validate() const {
  if (num_modes < 2) throw ConfigError("FrameParams: need at least two modes");
  const auto n = static_cast<std::size_t>(num_modes - 1);
  if (theta.size() != n || alpha.size() != n) {
    throw ConfigError("FrameParams: expected " + std::to_string(n) +
                      " theta and alpha schedules");
  }
  if (!(tau > 0.0)) throw ConfigError("FrameParams: tau must be > 0");
  for (std::size_t k = 0; k < n; ++k) {
    for (double t : {0.0, tau}) {
      if (!std::isfinite(theta[k].value(t)) || !std::isfinite(alpha[k].value(t))) {
        throw ConfigError("FrameParams: schedule " + std::to_string(k + 1) +
                          " is not finite on [0, tau]");
      }
    }
  }
}

namespace {

// Value and time derivative carried together.
struct Dual {
  Complex v;
  Complex d;
};

Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

struct AngleTerms {
  Dual sin_theta, cos_theta, phase_plus, phase_minus;
};

AngleTerms angle_terms(const FrameParams& p, std::size_t k, double t) {
  const double h = 1e-6 * p.tau;
  const double th = p.theta[k].value(t);
  const double thd = p.theta[k].derivative(t, h);
  const double al = p.alpha[k].value(t);
  const double ald = p.alpha[k].derivative(t, h);
  const Complex ep = std::exp(kI * (al / 2.0));
  const Complex em = std::conj(ep);
  return {{std::sin(th), std::cos(th) * thd},
          {std::cos(th), -std::sin(th) * thd},
          {ep, kI * (ald / 2.0) * ep},
          {em, -kI * (ald / 2.0) * em}};
}

std::vector<Dual> bright_dual(const FrameParams& p, int k, double t) {
  std::vector<Dual> b{{1.0, 0.0}};
  for (int j = 0; j < k; ++j) {
    const AngleTerms a = angle_terms(p, static_cast<std::size_t>(j), t);
    const Dual head = a.sin_theta * a.phase_plus;
    for (auto& x : b) x = head * x;
    b.push_back(a.cos_theta * a.phase_minus);
  }
  return b;
}

void frame_dual(const FrameParams& p, double t, CMatrix* value, CMatrix* derivative) {
  p.validate();
  const int n = p.num_modes;
  CMatrix m = CMatrix::Zero(n, n);
  CMatrix dm = CMatrix::Zero(n, n);
  std::vector<Dual> prev{{1.0, 0.0}};
  for (int k = 1; k < n; ++k) {
    const AngleTerms a = angle_terms(p, static_cast<std::size_t>(k - 1), t);
    const Dual head = a.cos_theta * a.phase_plus;
    for (int j = 0; j < k; ++j) {
      const Dual x = head * prev[static_cast<std::size_t>(j)];
      m(k - 1, j) = x.v;
      dm(k - 1, j) = x.d;
    }
    const Dual last = -(a.sin_theta * a.phase_minus);
    m(k - 1, k) = last.v;
    dm(k - 1, k) = last.d;
    // Extend the bright vector to b_k for the next row.
    const Dual grow = a.sin_theta * a.phase_plus;
    for (auto& x : prev) x = grow * x;
    prev.push_back(a.cos_theta * a.phase_minus);
  }
  for (int j = 0; j < n; ++j) {
    m(n - 1, j) = prev[static_cast<std::size_t>(j)].v;
    dm(n - 1, j) = prev[static_cast<std::size_t>(j)].d;
  }
  if (value) *value = std::move(m);
  if (derivative) *derivative = std::move(dm);
}

std::vector<CMatrix> lowering_operators(const FockSpace& space) {
  std::vector<CMatrix> ops;
  for (int j = 0; j < space.num_modes(); ++j) {
    ops.push_back(mode_operator(space, j, OperatorKind::annihilation).matrix);
  }
  return ops;
}

}  // namespace

CVector bright_vector(const FrameParams& params, int k, double t) {
  params.validate();
  if (k < 0 || k > params.num_modes - 1) {
    throw ConfigError("bright_vector: k = " + std::to_string(k) + " out of range");
  }
  const auto b = bright_dual(params, k, t);
  CVector out(static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j) out[static_cast<Eigen::Index>(j)] = b[j].v;
  return out;
}

FrameMatrix frame_matrix(const FrameParams& params, double t) {
  FrameMatrix f;
  f.t = t;
  frame_dual(params, t, &f.m_dagger, nullptr);
  return f;
}

CMatrix frame_matrix_derivative(const FrameParams& params, double t) {
  CMatrix d;
  frame_dual(params, t, nullptr, &d);
  return d;
}

GaugePotential gauge_potential(const FrameParams& params, double t, GaugeMethod method,
                               double h) {
  CMatrix m, dm;
  frame_dual(params, t, &m, &dm);
  if (method == GaugeMethod::finite_difference) {
    if (h <= 0.0) h = 1e-6 * params.tau;
    dm = (frame_matrix(params, t + h).m_dagger - frame_matrix(params, t - h).m_dagger) /
         (2.0 * h);
  }
  return {-kI * dm * m.adjoint(), t};
}

CMatrix rotated_coefficients(const CMatrix& Ha, const FrameParams& params, double t) {
  const auto n = static_cast<Eigen::Index>(params.num_modes);
  if (Ha.rows() != n || Ha.cols() != n) {
    throw DimensionMismatch("rotated_coefficients: Ha must be " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
  CMatrix m, dm;
  frame_dual(params, t, &m, &dm);
  return m * Ha * m.adjoint() + kI * dm * m.adjoint();
}

TriangularCheck check_upper_triangular(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) throw DimensionMismatch("check_upper_triangular: matrix not square");
  double residual = 0.0;
  for (Eigen::Index i = 1; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) residual = std::max(residual, std::abs(h(i, j)));
  }
  return {residual <= tol, residual};
}

CMatrix frame_unitary(const FockSpace& space, const FrameParams& params, double t,
                      FactorOrder order) {
  params.validate();
  if (space.num_modes() != params.num_modes) {
    throw DimensionMismatch("frame_unitary: space has " + std::to_string(space.num_modes()) +
                            " modes, frame has " + std::to_string(params.num_modes));
  }
  if (space.dimension() > kMaxDenseDimension) {
    throw BudgetExceeded("frame_unitary: dimension " + std::to_string(space.dimension()) +
                         " exceeds dense limit " + std::to_string(kMaxDenseDimension));
  }
  const int n = params.num_modes;
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  const QuadraticForm form = QuadraticForm::full(space);
  CMatrix v = CMatrix::Identity(dim, dim);
  for (int k = 1; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const double dtheta = params.theta[idx].value(t) - params.theta[idx].value(0.0);
    const double dalpha = params.alpha[idx].value(t) - params.alpha[idx].value(0.0);
    const double alpha_theta =
        params.alpha[idx].value(order == FactorOrder::alpha_theta ? 0.0 : t);
    const CVector b = bright_vector(params, k - 1, 0.0);

    CMatrix ca = CMatrix::Zero(n, n);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) ca(i, j) = std::conj(b[i]) * b[j];
    }
    ca(k, k) -= 1.0;
    const CMatrix va = (Complex(0.0, -dalpha / 2.0) * form.dense(ca)).exp();

    CMatrix ct = CMatrix::Zero(n, n);
    const Complex e = std::exp(kI * alpha_theta);
    for (int j = 0; j < k; ++j) {
      ct(k, j) += e * b[j];
      ct(j, k) -= std::conj(e) * std::conj(b[j]);
    }
    const CMatrix vt = (-dtheta * form.dense(ct)).exp();

    v = order == FactorOrder::alpha_theta ? CMatrix(v * va * vt) : CMatrix(v * vt * va);
  }
  return v;
}

CMatrix ancillary_operator(const FockSpace& space, const FrameParams& params, int k, double t) {
  if (space.num_modes() != params.num_modes) {
    throw DimensionMismatch("ancillary_operator: mode count mismatch");
  }
  if (k < 0 || k >= params.num_modes) throw ConfigError("ancillary_operator: k out of range");
  const CMatrix m = frame_matrix(params, t).m_dagger;
  const auto ops = lowering_operators(space);
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  CMatrix mu = CMatrix::Zero(dim, dim);
  for (int j = 0; j < params.num_modes; ++j) mu += m(k, j) * ops[static_cast<std::size_t>(j)];
  return mu;
}

CVector creation_power_state(const FockSpace& space, const CVector& c, int n) {
  if (c.size() != space.num_modes()) {
    throw DimensionMismatch("creation_power_state: coefficient vector size mismatch");
  }
  if (n < 0 || n > space.complete_sector_limit()) {
    throw TruncationError("creation_power_state: n = " + std::to_string(n) +
                          " exceeds the complete-sector limit of the space");
  }
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(space.dimension()));
  const double log_nfact = std::lgamma(n + 1.0);
  for (std::size_t g : space.sector(n)) {
    double log_weight = log_nfact;
    Complex amp = 1.0;
    for (int j = 0; j < space.num_modes(); ++j) {
      const int o = space.occupation(g, j);
      log_weight -= std::lgamma(o + 1.0);
      for (int r = 0; r < o; ++r) amp *= c[j];
    }
    psi[static_cast<Eigen::Index>(g)] = std::exp(0.5 * log_weight) * amp;
  }
  return psi;
}

CVector ancillary_fock_state(const FockSpace& space, const FrameParams& params, int k, int n,
                             double t) {
  if (k < 0 || k >= params.num_modes) throw ConfigError("ancillary_fock_state: k out of range");
  const CMatrix m = frame_matrix(params, t).m_dagger;
  return creation_power_state(space, m.row(k).conjugate().transpose(), n);
}

}  // namespace nhb
