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

#include "nhb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace nhb {

SpectrumPoint eigenvalues(const ControlSchedule& s, double t) {
  const PulseSample p = synthesize_pulses(s, t);
  // phi_a and Theta are 0 or pi, so their phase factors are exactly +-1.
  const double ga = s.gamma_a * (std::abs(s.phi_a) < 1.0 ? 1.0 : -1.0);
  const double gb = s.gamma_b;
  const double g = s.Gamma * (std::abs(s.Theta) < 1.0 ? 1.0 : -1.0);
  const double J = p.J;
  const double D = p.Delta;
  const double cos_phi = std::abs(std::cos(s.phi)) < 1e-14 ? 0.0 : std::cos(s.phi);
  const double gs = ga + gb;
  const double h = std::abs(ga - gb) / 2.0;
  const Complex disc = D * D + 4.0 * ((J - h) * (J + h) - g * g) +
                       kI * (8.0 * J * g * cos_phi - 2.0 * D * (ga - gb));
  const Complex centre = -kI * gs / 2.0;
  const Complex root = std::sqrt(disc) / 2.0;
  SpectrumPoint sp;
  sp.t = t;
  sp.E_plus = centre + root;
  sp.E_minus = centre - root;
  sp.discriminant = disc;
  sp.gap = std::abs(sp.E_plus - sp.E_minus);
  return sp;
}

std::vector<SpectrumPoint> eigenvalue_track(const ControlSchedule& s,
                                            const std::vector<double>& grid) {
  std::vector<SpectrumPoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    SpectrumPoint sp = eigenvalues(s, t);
    if (!out.empty()) {
      const SpectrumPoint& prev = out.back();
      const double keep = std::abs(sp.E_plus - prev.E_plus) + std::abs(sp.E_minus - prev.E_minus);
      const double swap = std::abs(sp.E_minus - prev.E_plus) + std::abs(sp.E_plus - prev.E_minus);
      if (swap < keep) std::swap(sp.E_plus, sp.E_minus);
    }
    out.push_back(sp);
  }
  return out;
}

PtClass pt_classify(const ControlSchedule& s, double t) {
  constexpr double tol = 1e-12;
  const PulseSample p = synthesize_pulses(s, t);
  const bool symmetric = std::abs(s.phi_a - kPi) < tol &&
                         std::abs(s.gamma_a - s.gamma_b) < tol && std::abs(p.Delta) < tol &&
                         std::abs(s.Gamma) < tol;
  if (!symmetric) return {false, PtPhase::not_applicable};
  const double gap = p.J - s.gamma_a;
  if (std::abs(gap) <= 1e-12 * std::max(std::abs(p.J), s.gamma_a)) {
    return {true, PtPhase::exceptional};
  }
  return {true, gap > 0.0 ? PtPhase::unbroken : PtPhase::broken};
}

double eigenvector_condition(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  CMatrix v = es.eigenvectors();
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j).normalize();
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

namespace {

bool is_ep(const SpectrumPoint& sp, double tau) {
  const double scale = std::max({std::abs(sp.E_plus), std::abs(sp.E_minus), 1.0 / tau});
  return sp.gap < 1e-6 * scale;
}

double bisect_real_root(const ControlSchedule& s, double lo, double hi) {
  double flo = eigenvalues(s, lo).discriminant.real();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = eigenvalues(s, mid).discriminant.real();
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double a = std::abs(eigenvalues(s, lo).discriminant);
  const double b = std::abs(eigenvalues(s, hi).discriminant);
  return a <= b ? lo : hi;
}

double golden_minimum(const ControlSchedule& s, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return std::abs(eigenvalues(s, t).discriminant); };
  double c = hi - r * (hi - lo);
  double d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * s.tau; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> detect_eps(const ControlSchedule& s, const std::vector<double>& grid) {
  std::vector<double> eps;
  if (grid.size() < 3) return eps;
  std::vector<SpectrumPoint> pts;
  pts.reserve(grid.size());
  for (double t : grid) pts.push_back(eigenvalues(s, t));
  const double resolution = 1e-6 * s.tau;

  auto add = [&](double t) {
    const SpectrumPoint sp = eigenvalues(s, t);
    if (!is_ep(sp, s.tau)) return;
    for (double e : eps) {
      if (std::abs(e - t) < resolution) return;
    }
    eps.push_back(t);
  };

  const std::size_t last = grid.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    const double a = pts[i].discriminant.real();
    const double b = pts[i + 1].discriminant.real();
    // Zeros sitting exactly on the protocol end points are not interior EPs.
    const bool interior = (i > 0 || a != 0.0) && (i + 1 < last || b != 0.0);
    if (interior && a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0)) {
      add(bisect_real_root(s, grid[i], grid[i + 1]));
    } else if (interior && i + 1 < last && a != 0.0 && b == 0.0) {
      add(grid[i + 1]);
    }
  }
  for (std::size_t i = 1; i < last; ++i) {
    const double m = std::abs(pts[i].discriminant);
    if (m <= std::abs(pts[i - 1].discriminant) && m <= std::abs(pts[i + 1].discriminant)) {
      add(golden_minimum(s, grid[i - 1], grid[i + 1]));
    }
  }
  std::sort(eps.begin(), eps.end());
  return eps;
}

ScatteringSample scattering_matrix(const ControlSchedule& s, double t, double gamma_1,
                                   double omega) {
  if (!(gamma_1 >= 0.0)) throw ConfigError("scattering_matrix: gamma_1 must be >= 0");
  const CMatrix ha = synthesize_pulses(s, t).Ha;
  const CMatrix m = omega * CMatrix::Identity(2, 2) - ha;
  const Complex det = m.determinant();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(det) < 1e-14 * scale * scale) {
    throw SingularResolvent("scattering_matrix: omega - Ha is singular at t = " +
                            std::to_string(t));
  }
  const CMatrix k = std::sqrt(2.0 * gamma_1) * CMatrix::Identity(2, 2);
  CMatrix S = CMatrix::Identity(2, 2) - kI * k.adjoint() * m.inverse() * k;
  return {t, std::move(S), gamma_1, omega};
}

double default_gamma_1(const ControlSchedule& s) {
  return s.gamma_a > 0.0 ? s.gamma_a / 2.0 : 0.5 / s.tau;
}

double nonreciprocity(const ControlSchedule& s, double gamma_1) {
  const ScatteringSample sample = scattering_matrix(s, s.tau, gamma_1, 0.0);
  const double s12 = std::abs(sample.S(0, 1));
  const double s21 = std::abs(sample.S(1, 0));
  if (s12 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log10(s21 / s12);
}

}  // namespace nhb
