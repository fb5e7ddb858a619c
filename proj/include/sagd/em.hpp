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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sagd/core_math.hpp"
#include "sagd/optimizer.hpp"
#include "sagd/oracles.hpp"
#include "sagd/rng.hpp"
#include "sagd/thread_pool.hpp"

namespace sagd {

// Gamma-latent model: z_i ~ N(0, 1), x_i | z_i ~ Gamma(10 sigmoid(a + b z_i))
// at unit scale.
struct GammaParams {
  double a = 0.0;
  double b = 0.0;
};

struct GammaLatentModel {
  Vector data;
  GammaParams truth;  // parameters the data were drawn with, when known
};

GammaLatentModel simulate_gamma_data(std::size_t n, double a, double b,
                                     RngStream& rng);

// L(theta; x, z) = -z^2/2 + (s - 1) ln x - ln Gamma(s), s = 10 sigmoid(a + b z).
double complete_loglik(const GammaParams& theta, double x, double z);

// (dL/da, dL/db) at (x, z).
std::array<double, 2> q_grad_terms(const GammaParams& theta, double x, double z);

// Q(theta; theta_k) and its gradient in theta, summed over observations, with
// the posterior expectation E_{z | x_i, theta_k} taken by quadrature over
// the spec interval.
double q_value_exact(const GammaParams& theta_k, const GammaParams& theta,
                     const Vector& data, const QuadratureSpec& quad);
Vector q_gradient_exact(const GammaParams& theta_k, const GammaParams& theta,
                        const Vector& data, const QuadratureSpec& quad);

// Marginal log-likelihood sum_i log p(x_i; theta) including the normal and
// gamma normalizing constants, i.e. sum_i [ln int exp(L) dz - ln(2 pi)/2 - x_i].
double marginal_loglik(const GammaParams& theta, const Vector& data,
                       const QuadratureSpec& quad, ThreadPool* pool = nullptr);

enum class EmMode { sagd, exact_gd };

struct EmConfig {
  std::size_t m_steps = 3;
  // Inner SAGD settings; iterations is the number of gradient updates per
  // M-step. Defaults follow the experiment: alpha = 0.2 constant,
  // delta_t = 0.1/sqrt(t), K_t = t + 20, burn-in 100.
  SagdConfig inner = default_inner();
  QuadratureSpec quad;
  EmMode mode = EmMode::sagd;
  std::size_t loglik_every = 1;  // 0 disables the trace

  static SagdConfig default_inner();
};

struct EmRecord {
  std::size_t update = 0;  // global gradient-update index, from 1
  std::size_t m_step = 0;  // from 1
  GammaParams theta;
  double loglik = 0.0;  // NaN when not evaluated at this update
};

struct EmResult {
  std::vector<EmRecord> path;
  GammaParams final_theta;
  double initial_loglik = 0.0;
  double final_loglik = 0.0;
};

// Each M-step maximizes Q(.; theta_k) = mean_i E[L(theta; x_i, Z)] by
// `inner.iterations` gradient steps: either SAGD with the Langevin chain
// targeting the latent posterior under theta_k, or exact gradient descent
// with quadrature expectations. theta_{k+1} is the last inner iterate.
EmResult em_run(const GammaLatentModel& model, const GammaParams& theta0,
                const EmConfig& cfg, std::uint64_t seed,
                ThreadPool* pool = nullptr);

}  // namespace sagd
