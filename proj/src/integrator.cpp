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

#include "nhb/integrator.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace nhb {

void IntegratorConfig::validate(double tau) const {
  if (method != "dopri5") throw ConfigError("integrator: unknown method '" + method + "'");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ConfigError("integrator: tolerances must be > 0");
  }
  if (max_step < 0.0) throw ConfigError("integrator: max_step must be >= 0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (t < 0.0 || t > tau * (1.0 + 1e-12)) {
      throw ConfigError("integrator: sample time " + std::to_string(t) + " outside [0, tau]");
    }
    if (i > 0 && !(t > sample_times[i - 1])) {
      throw ConfigError("integrator: sample times must be strictly increasing");
    }
  }
}

IntegratorConfig IntegratorConfig::scaled(double factor) const {
  IntegratorConfig c = *this;
  c.rel_tol *= factor;
  c.abs_tol *= factor;
  return c;
}

namespace {

using State = std::vector<Complex>;

}  // namespace

IntegratorReport integrate(const ComplexRhs& rhs, CVector y, const std::vector<double>& times,
                           const IntegratorConfig& cfg, const SampleObserver& observer) {
  namespace ode = boost::numeric::odeint;
  if (times.empty()) return {cfg.method, cfg.rel_tol, cfg.abs_tol, 0};
  const auto n = y.size();
  State x(y.data(), y.data() + n);
  CVector in(n), out(n);
  auto system = [&](const State& s, State& ds, double t) {
    in = Eigen::Map<const CVector>(s.data(), n);
    rhs(t, in, out);
    std::copy(out.data(), out.data() + n, ds.begin());
  };

  std::size_t index = 0;
  auto obs = [&](const State& s, double t) {
    observer(index++, t, Eigen::Map<const CVector>(s.data(), n));
  };

  if (times.size() == 1) {
    obs(x, times.front());
    return {cfg.method, cfg.rel_tol, cfg.abs_tol, 0};
  }

  using Stepper = ode::runge_kutta_dopri5<State>;
  const double span = times.back() - times.front();
  const double dt0 = std::min(1e-4 * span, times[1] - times[0]);
  std::size_t steps = 0;
  try {
    if (cfg.max_step > 0.0) {
      auto stepper = ode::make_controlled(cfg.abs_tol, cfg.rel_tol, cfg.max_step, Stepper());
      steps = ode::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, obs);
    } else {
      auto stepper = ode::make_controlled(cfg.abs_tol, cfg.rel_tol, Stepper());
      steps = ode::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, obs);
    }
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("integrator: ") + e.what());
  }
  for (const Complex& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw IntegrationError("integrator: state became non-finite");
    }
  }
  return {cfg.method, cfg.rel_tol, cfg.abs_tol, steps};
}

std::vector<double> uniform_grid(double tau, std::size_t count) {
  if (count < 2) throw ConfigError("uniform_grid: need at least two points");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = tau * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = tau;
  return g;
}

}  // namespace nhb
