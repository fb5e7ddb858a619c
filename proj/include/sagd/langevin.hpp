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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "sagd/core_math.hpp"
#include "sagd/potentials.hpp"
#include "sagd/rng.hpp"

namespace sagd {

// Position/momentum pair of the chain after `step_count` steps.
struct ChainState {
  Vector xi;
  Vector rho;
  std::uint64_t step_count = 0;

  // Position `xi` with zero momentum.
  static ChainState at(Vector xi);

  std::size_t dim() const { return xi.size(); }
  void validate() const;
};

struct LangevinConfig {
  double gamma = 2.0;  // friction
  double delta = 0.05;
  std::size_t steps = 1;  // observed steps K
  std::size_t burn_in = 0;

  // gamma > 0, delta > 0, gamma * delta < 1, steps >= 1.
  void validate() const;
};

// One explicit step of the underdamped Langevin discretization:
//   xi'  = xi + delta rho
//   rho' = (1 - gamma delta) rho - delta grad V(xi) + sqrt(2 gamma delta) eta
// The gradient is taken at the old position. Throws DivergenceError if the
// new state is not finite.
ChainState langevin_step(const ChainState& state, const Potential& pot,
                         const LangevinConfig& cfg,
                         std::span<const double> noise);

// In-place variant for hot loops; `scratch` must have the chain dimension.
void langevin_step_inplace(ChainState& state, const Potential& pot,
                           double gamma, double delta,
                           std::span<const double> noise,
                           std::span<double> scratch);

using ChainObserver = std::function<void(const ChainState&)>;

// Runs cfg.burn_in unobserved steps followed by cfg.steps observed ones and
// returns the final state, so callers can keep the chain alive.
ChainState run_chain(const Potential& pot, const LangevinConfig& cfg,
                     ChainState init, RngStream& rng,
                     const ChainObserver& observer);

using ChainFunctional =
    std::function<Vector(std::span<const double>, std::span<const double>)>;

// Time average of phi(xi, rho) over the observed states.
Vector estimate(const Potential& pot, const LangevinConfig& cfg,
                ChainState init, RngStream& rng, const ChainFunctional& phi);

// Tracks |xi|^{2l} + |rho|^{2l} along a trajectory. A chain is flagged
// unstable when the mean over the second half of the observed states exceeds
// ten times the mean over the first half.
class MomentDiagnostic {
 public:
  explicit MomentDiagnostic(int order);

  void observe(const ChainState& state);

  std::size_t count() const { return values_.size(); }
  double mean() const;
  double max() const { return max_; }
  double half_ratio() const;
  bool unstable() const { return half_ratio() > 10.0; }

 private:
  int order_;
  double sum_ = 0.0;
  double max_ = 0.0;
  std::vector<double> values_;
};

}  // namespace sagd
