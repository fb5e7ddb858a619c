// Copyright 2026 The sagd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sagd/langevin.hpp"

#include <limits>
#include <string>
#include <utility>

#include "sagd/error.hpp"

namespace sagd {

ChainState ChainState::at(Vector xi) {
  ChainState s;
  s.rho.assign(xi.size(), 0.0);
  s.xi = std::move(xi);
  return s;
}

void ChainState::validate() const {
  require_same_size(xi.size(), rho.size(), "ChainState xi/rho");
  if (xi.empty()) {
    throw DimensionError("ChainState: empty position");
  }
  if (!all_finite(xi) || !all_finite(rho)) {
    throw DivergenceError("ChainState: non-finite entry");
  }
}

void LangevinConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("langevin: friction gamma must be positive");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("langevin: step size delta must be positive");
  }
  if (!(gamma * delta < 1.0)) {
    throw DomainError("langevin: gamma * delta must be below 1 (got " +
                      std::to_string(gamma * delta) + ")");
  }
  if (steps < 1) {
    throw DomainError("langevin: need at least one observed step");
  }
}

void langevin_step_inplace(ChainState& state, const Potential& pot,
                           double gamma, double delta,
                           std::span<const double> noise,
                           std::span<double> scratch) {
  const std::size_t r = state.xi.size();
  pot.gradient(state.xi, scratch);
  const double damping = 1.0 - gamma * delta;
  const double kick = std::sqrt(2.0 * gamma * delta);
  bool finite = true;
  for (std::size_t i = 0; i < r; ++i) {
    const double rho = state.rho[i];
    state.xi[i] += delta * rho;
    state.rho[i] = damping * rho - delta * scratch[i] + kick * noise[i];
    finite = finite && std::isfinite(state.xi[i]) && std::isfinite(state.rho[i]);
  }
  ++state.step_count;
  if (!finite) {
    throw DivergenceError("langevin: non-finite state at step " +
                          std::to_string(state.step_count) +
                          "; reduce the step size");
  }
}

ChainState langevin_step(const ChainState& state, const Potential& pot,
                         const LangevinConfig& cfg,
                         std::span<const double> noise) {
  cfg.validate();
  require_same_size(state.xi.size(), state.rho.size(), "langevin_step state");
  require_same_size(state.xi.size(), pot.dim(), "langevin_step potential");
  require_same_size(noise.size(), pot.dim(), "langevin_step noise");
  ChainState next = state;
  Vector scratch(pot.dim());
  langevin_step_inplace(next, pot, cfg.gamma, cfg.delta, noise, scratch);
  return next;
}

ChainState run_chain(const Potential& pot, const LangevinConfig& cfg,
                     ChainState init, RngStream& rng,
                     const ChainObserver& observer) {
  cfg.validate();
  init.validate();
  require_same_size(init.dim(), pot.dim(), "run_chain");
  const std::size_t r = pot.dim();
  Vector noise(r);
  Vector scratch(r);
  const std::size_t total = cfg.burn_in + cfg.steps;
  for (std::size_t k = 0; k < total; ++k) {
    for (double& e : noise) {
      e = rng.normal();
    }
    langevin_step_inplace(init, pot, cfg.gamma, cfg.delta, noise, scratch);
    if (k >= cfg.burn_in && observer) {
      observer(init);
    }
  }
  return init;
}

Vector estimate(const Potential& pot, const LangevinConfig& cfg,
                ChainState init, RngStream& rng, const ChainFunctional& phi) {
  Vector sum;
  run_chain(pot, cfg, std::move(init), rng, [&](const ChainState& s) {
    const Vector v = phi(s.xi, s.rho);
    if (sum.empty()) {
      sum.assign(v.size(), 0.0);
    }
    require_same_size(v.size(), sum.size(), "estimate functional");
    for (std::size_t i = 0; i < v.size(); ++i) {
      sum[i] += v[i];
    }
  });
  for (double& v : sum) {
    v /= static_cast<double>(cfg.steps);
  }
  return sum;
}

MomentDiagnostic::MomentDiagnostic(int order) : order_(order) {
  if (order < 1 || order > 3) {
    throw DomainError("MomentDiagnostic: order must be 1, 2 or 3");
  }
}

void MomentDiagnostic::observe(const ChainState& state) {
  const double v = std::pow(squared_norm(state.xi), order_) +
                   std::pow(squared_norm(state.rho), order_);
  values_.push_back(v);
  sum_ += v;
  max_ = std::max(max_, v);
}

double MomentDiagnostic::mean() const {
  return values_.empty() ? 0.0 : sum_ / static_cast<double>(values_.size());
}

double MomentDiagnostic::half_ratio() const {
  const std::size_t half = values_.size() / 2;
  if (half == 0) {
    return 1.0;
  }
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    first += values_[i];
  }
  for (std::size_t i = half; i < values_.size(); ++i) {
    second += values_[i];
  }
  first /= static_cast<double>(half);
  second /= static_cast<double>(values_.size() - half);
  if (first == 0.0) {
    return second == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return second / first;
}

}  // namespace sagd
