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

#include "nhb/pulses.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nhb {

namespace {

bool is_zero_or_pi(double x) {
  return std::abs(x) < 1e-12 || std::abs(x - kPi) < 1e-12;
}

// Exact zeros of cos/sin at the preset angles are otherwise ~1e-17.
double clean(double x) { return std::abs(x) < 1e-14 ? 0.0 : x; }

constexpr double kSingularTol = 1e-12;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double error = 0.0, l1 = 0.0;
  const double once = Quad::integrate(f, a, b, 0, 0.0, &error, &l1);
  // The error estimate bottoms out near 1e-16 whatever the integral's size.
  if (error <= std::max(1e-13 * l1, 1e-15)) return once;
  return Quad::integrate(f, a, b, 10, 1e-13);
}

}  // namespace

void ControlSchedule::validate() const {
  if (!(tau > 0.0)) throw ConfigError("schedule: tau must be > 0");
  if (!is_zero_or_pi(phi_a)) throw ConfigError("schedule: phi_a must be 0 or pi");
  if (!is_zero_or_pi(Theta)) throw ConfigError("schedule: Theta must be 0 or pi");
  if (!(gamma_a >= 0.0)) throw ConfigError("schedule: gamma_a must be >= 0");
  if (!(gamma_b >= 0.0)) throw ConfigError("schedule: gamma_b must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("schedule: lambda must be >= 0");
  for (double x : {phi, Gamma}) {
    if (!std::isfinite(x)) throw ConfigError("schedule: non-finite parameter");
  }
  for (double t : {0.0, tau}) {
    if (!std::isfinite(theta.value(t)) || !std::isfinite(alpha.value(t))) {
      throw ConfigError("schedule: theta/alpha not finite on [0, tau]");
    }
  }
}

FrameParams ControlSchedule::frame() const {
  FrameParams p;
  p.num_modes = 2;
  p.theta = {theta};
  p.alpha = {alpha};
  p.tau = tau;
  return p;
}

ScalarSchedule theta_linear(double tau) {
  if (!(tau > 0.0)) throw ConfigError("theta_linear: tau must be > 0");
  return ScalarSchedule::polynomial({0.0, kPi / (2.0 * tau)});
}

CMatrix coefficient_matrix(const ControlSchedule& s, double J, double Delta) {
  CMatrix ha(2, 2);
  const Complex dissipative = kI * s.Gamma * std::exp(kI * s.Theta);
  ha(0, 0) = Delta / 2.0 - kI * s.gamma_a * std::exp(kI * s.phi_a);
  ha(0, 1) = J * std::exp(kI * s.phi) + dissipative;
  ha(1, 0) = J * std::exp(-kI * s.phi) + dissipative;
  ha(1, 1) = -Delta / 2.0 - kI * s.gamma_b;
  return ha;
}

PulseSample synthesize_pulses(const ControlSchedule& s, double t) {
  const double h = 1e-6 * s.tau;
  const double th = s.theta.value(t);
  const double thd = s.theta.derivative(t, h);
  const double al = s.alpha.value(t);
  const double ald = s.alpha.derivative(t, h);
  const double g = s.Gamma * std::cos(s.Theta);

  const double sin_pa = clean(std::sin(s.phi + al));
  const double cos_pa = clean(std::cos(s.phi + al));
  const double sin_al = clean(std::sin(al));
  if (std::abs(sin_pa) < kSingularTol) {
    throw SingularPulse("synthesize_pulses: sin(phi + alpha) = 0 at t = " + std::to_string(t));
  }
  const double J = (thd + g * std::cos(al) * std::cos(2.0 * th) -
                    (s.gamma_a * std::cos(s.phi_a) - s.gamma_b) * std::sin(th) * std::cos(th)) /
                   sin_pa;

  const double sin2 = std::sin(2.0 * th);
  const double a = J * cos_pa;
  const double b = g * sin_al;
  double singular = 0.0;
  if (a != 0.0 || b != 0.0) {
    if (std::abs(sin2) < kSingularTol) {
      throw SingularDetuning("synthesize_pulses: sin(2 theta) = 0 at t = " + std::to_string(t));
    }
    singular = (a * std::cos(2.0 * th) + b) / sin2;
  }
  const double delta = ald - 2.0 * (singular + s.gamma_a * clean(std::sin(s.phi_a)) / 2.0);
  return {t, J, delta, coefficient_matrix(s, J, delta)};
}

std::string to_string(GammaSign sign) {
  switch (sign) {
    case GammaSign::paper_literal: return "literal";
    case GammaSign::norm_restoring: return "norm-restoring";
    case GammaSign::flipped: return "flipped";
  }
  return "unknown";
}

GammaSign gamma_sign_from_string(const std::string& name) {
  if (name == "literal" || name == "paper-literal") return GammaSign::paper_literal;
  if (name == "norm-restoring") return GammaSign::norm_restoring;
  if (name == "flipped") return GammaSign::flipped;
  throw ConfigError("unknown gamma sign '" + name +
                    "' (expected literal, norm-restoring or flipped)");
}

std::string to_string(Passage passage) { return passage == Passage::ket ? "ket" : "dual"; }

Passage passage_from_string(const std::string& name) {
  if (name == "ket") return Passage::ket;
  if (name == "dual") return Passage::dual;
  throw ConfigError("unknown passage '" + name + "' (expected ket or dual)");
}

namespace {

// Picks the Gamma sign on s whose passage keeps its norm at tau.
double certified_gamma(ControlSchedule s, double magnitude, GammaSign sign, Passage passage) {
  if (sign == GammaSign::paper_literal) return -magnitude;
  s.Gamma = -magnitude;
  const double minus = check_norm_restoration(s, passage);
  s.Gamma = magnitude;
  const double plus = check_norm_restoration(s, passage);
  const double restoring = minus <= plus ? -magnitude : magnitude;
  return sign == GammaSign::norm_restoring ? restoring : -restoring;
}

}  // namespace

Rates rates_from_lambda(double lambda, double theta_dot, GammaSign sign, Passage passage) {
  if (!(lambda >= 0.0)) throw ConfigError("rates_from_lambda: lambda must be >= 0");
  Rates r{lambda * theta_dot / kPi, 0.0};
  const double magnitude = lambda * theta_dot / 2.0;
  if (magnitude == 0.0) return r;
  // Canonical schedule: linear theta over [0, tau], alpha = 0, loss on the cavity.
  ControlSchedule s;
  s.tau = kPi / (2.0 * std::abs(theta_dot));
  s.theta = ScalarSchedule::polynomial({0.0, theta_dot});
  s.alpha = ScalarSchedule::constant(0.0);
  s.gamma_a = s.gamma_b = r.gamma_a;
  s.lambda = lambda;
  r.Gamma = certified_gamma(s, magnitude, sign, passage);
  return r;
}

void apply_lambda_rule(ControlSchedule& s, GammaSign sign, Passage passage) {
  if (s.theta.kind() != ScalarSchedule::Kind::polynomial || s.theta.coefficients().size() > 2) {
    throw ConfigError("lambda rule needs a linear theta schedule");
  }
  const double theta_dot = s.theta.derivative(0.0);
  s.gamma_a = s.gamma_b = s.lambda * theta_dot / kPi;
  const double magnitude = s.lambda * theta_dot / 2.0;
  if (std::abs(s.phi_a - kPi) < 1e-12 || magnitude == 0.0) {
    s.Gamma = 0.0;
    return;
  }
  s.Gamma = certified_gamma(s, magnitude, sign, passage);
}

PhaseRates phase_rates(const ControlSchedule& s, double t, Passage passage) {
  const PulseSample p = synthesize_pulses(s, t);
  const double h = 1e-6 * s.tau;
  const double th = s.theta.value(t);
  const double al = s.alpha.value(t);
  const double ald = s.alpha.derivative(t, h);
  const double g = s.Gamma * std::cos(s.Theta);
  const double c2 = std::cos(2.0 * th);
  const double s2 = std::sin(2.0 * th);
  const double cc = std::cos(th) * std::cos(th);
  const double ss = std::sin(th) * std::sin(th);
  const double sin_phi_a = clean(std::sin(s.phi_a));
  const double cos_phi_a = std::cos(s.phi_a);

  PhaseRates r;
  r.f_r = p.Delta / 2.0 * c2 - p.J * clean(std::cos(s.phi + al)) * s2 - ald / 2.0 * c2 +
          s.gamma_a * sin_phi_a * cc;
  r.X = s.gamma_a * cos_phi_a * cc + s.gamma_b * ss + g * std::cos(al) * s2;
  if (passage == Passage::dual) {
    r.f_r = s.gamma_a * sin_phi_a - r.f_r;
    r.X -= s.gamma_a * cos_phi_a + s.gamma_b;
  }
  return r;
}

PhaseRecord global_phase(const ControlSchedule& s, const std::vector<double>& grid,
                         Passage passage) {
  if (grid.empty() || grid.front() != 0.0) {
    throw ConfigError("global_phase: grid must start at t = 0");
  }
  PhaseRecord rec;
  rec.times = grid;
  rec.f_r.assign(grid.size(), 0.0);
  rec.X.assign(grid.size(), 0.0);
  auto fr = [&](double t) { return phase_rates(s, t, passage).f_r; };
  auto x = [&](double t) { return phase_rates(s, t, passage).X; };
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("global_phase: grid must increase");
    rec.f_r[i] = rec.f_r[i - 1] + integrate(fr, grid[i - 1], grid[i]);
    rec.X[i] = rec.X[i - 1] + integrate(x, grid[i - 1], grid[i]);
  }
  return rec;
}

double check_norm_restoration(const ControlSchedule& s, Passage passage) {
  auto x = [&](double t) { return phase_rates(s, t, passage).X; };
  // Split at tau/2 so symmetric cancellations are resolved on each half.
  return std::abs(integrate(x, 0.0, s.tau / 2.0) + integrate(x, s.tau / 2.0, s.tau));
}

}  // namespace nhb
