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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sagd/core_math.hpp"
#include "sagd/langevin.hpp"
#include "sagd/potentials.hpp"
#include "sagd/rng.hpp"
#include "sagd/thread_pool.hpp"

namespace sagd {

// Closed convex parameter set Theta.
struct Domain {
  enum class Kind { unconstrained, box, ball };

  Kind kind = Kind::unconstrained;
  Vector lower;   // box
  Vector upper;   // box
  Vector center;  // ball
  double radius = 0.0;

  static Domain unconstrained();
  static Domain box(Vector lower, Vector upper);
  static Domain ball(Vector center, double radius);

  void validate() const;
  std::optional<double> diameter() const;
};

// Euclidean projection onto the domain.
Vector project(const Vector& theta, const Domain& dom);

// Hyperparameter sequences for outer iteration t >= 1:
//   convex:    delta = c1/sqrt(t),  K = ceil(c2 t) + k_offset,      alpha = alpha0/sqrt(t)
//   nonconvex: delta = c1 t^-c,     K = ceil(c2 t^2c) + k_offset,   alpha = alpha0/t
//   fixed:     delta = c1,          K = ceil(c2) + k_offset,        alpha = alpha0
// constant_alpha pins alpha = alpha0 for any kind.
struct Schedule {
  enum class Kind { convex, nonconvex, fixed };

  Kind kind = Kind::convex;
  double c1 = 0.1;
  double c2 = 1.0;
  double alpha0 = 0.1;
  double exponent = 0.5;  // nonconvex only
  std::size_t k_offset = 0;
  bool constant_alpha = false;

  void validate() const;
};

struct ScheduleValues {
  double delta = 0.0;
  std::size_t steps = 0;
  double alpha = 0.0;
};

ScheduleValues schedule_at(const Schedule& s, std::size_t t);

// Gradient of f(theta; xi) with respect to theta, written into `out`.
using PartialGradient = std::function<void(
    std::span<const double> theta, std::span<const double> xi,
    std::span<double> out)>;

// F(theta) = E_pi[f(theta; xi)]. The sampling target is either fixed or
// rebuilt from the current theta before each inner phase (coupled mode). The
// coupled mode carries no convergence guarantee; it serves the refinement
// style of EM where the target is p(u | x; theta_k).
struct Objective {
  std::size_t dim_theta = 0;
  std::size_t dim_xi = 0;
  PartialGradient grad_f;
  PotentialPtr fixed_potential;
  std::function<PotentialPtr(const Vector&)> potential_builder;
  // Exact g(theta), used instead of sampling when SagdConfig::use_exact_gradient.
  std::function<Vector(const Vector&)> exact_gradient;
};

enum class UpdateRule { plain, adam };

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  std::size_t t = 0;
};

// One Adam step theta - alpha m_hat / (sqrt(v_hat) + eps), then projection.
// Moment vectors are zero-initialized on first use.
Vector adam_update(const Vector& theta, const Vector& grad, AdamState& state,
                   double alpha, const AdamSettings& settings,
                   const Domain& dom);

struct SagdConfig {
  std::size_t iterations = 100;  // T
  Schedule schedule;
  double gamma = 2.0;
  std::size_t burn_in = 100;
  std::size_t chains = 1;
  bool persistent = true;
  UpdateRule update = UpdateRule::plain;
  AdamSettings adam;
  bool return_average = true;
  bool use_exact_gradient = false;

  void validate() const;
};

struct InnerPhase {
  double gamma = 2.0;
  double delta = 0.05;
  std::size_t steps = 1;
  std::size_t burn_in = 0;
};

// g~(theta) = average of grad_f(theta; xi_k) over the observed states of every
// chain, equal weight per chain. `chains` holds the starting states and
// receives the final ones; `rngs` supplies one stream per chain.
Vector approximate_gradient(const Vector& theta, const Objective& obj,
                            const Potential& pot, const InnerPhase& phase,
                            std::span<ChainState> chains,
                            std::span<RngStream> rngs,
                            ThreadPool* pool = nullptr);

struct TrajectoryRecord {
  std::size_t t = 0;
  Vector theta;  // theta_t, after the update of iteration t
  double delta = 0.0;
  std::size_t steps = 0;
  double alpha = 0.0;
  double grad_norm = 0.0;
};

struct SagdResult {
  Vector theta_hat;   // average of theta_1..theta_T, or theta_T
  Vector theta_last;  // theta_T
  std::vector<TrajectoryRecord> trajectory;
  std::vector<ChainState> chains;  // final chain states
  bool diverged = false;
  std::string failure;
};

// Projected stochastic approximate gradient descent. Chain c at outer
// iteration t draws from RngStream(seed, derive_stream(t, c)). With
// persistent chains the burn-in runs only at t = 1. `resume` overrides the
// initial chain states (one per chain); otherwise every chain starts at
// `init`. Divergence stops the run and returns the partial trajectory.
SagdResult sagd_run(const Objective& obj, const Domain& dom,
                    const SagdConfig& cfg, const Vector& theta0,
                    const ChainState& init, std::uint64_t seed,
                    ThreadPool* pool = nullptr,
                    std::vector<ChainState> resume = {});

}  // namespace sagd
