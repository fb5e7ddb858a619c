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
#include <vector>

#include "sagd/core_math.hpp"
#include "sagd/langevin.hpp"
#include "sagd/mlp.hpp"
#include "sagd/optimizer.hpp"
#include "sagd/oracles.hpp"
#include "sagd/rng.hpp"
#include "sagd/thread_pool.hpp"

namespace sagd {

// Fits the generator of x = h(u) + e, u ~ N(0, 1), e ~ N(0, noise_var) by
// ascending the exact log-likelihood: the gradient of
// Q(theta; theta_k) = E_{u ~ p(u | x; theta_k)}[log p(x | u; theta)] is
// estimated with one persistent Langevin chain per observation.
struct GeneratorFitConfig {
  std::size_t epochs = 60;
  std::size_t batch = 100;
  double alpha = 0.003;
  bool decay = false;  // alpha_k = alpha / sqrt(k) when set
  UpdateRule update = UpdateRule::adam;
  AdamSettings adam;
  double gamma = 2.0;
  double delta = 0.1;
  std::size_t chain_steps = 10;  // K per observation per refinement step
  std::size_t burn_in = 100;     // first visit of each observation only
  double noise_var = 1.0;
  std::size_t probe_size = 100;
  QuadratureSpec quad;

  void validate() const;
};

// Chain settings used for one refinement step.
struct RefinePhase {
  double gamma = 2.0;
  double delta = 0.1;
  std::size_t steps = 10;
  std::size_t burn_in = 0;
  double noise_var = 1.0;
};

// Batch mean over observations of the chain average of
// (x_i - h(u)) / noise_var * dh/dtheta(u), an ascent direction for the
// log-likelihood. `chains[i]` and `rngs[i]` belong to x_batch[i]; chains are
// advanced in place. burn_in_mask[i] selects which chains burn in first.
Vector refine_gradient(const Mlp1D& net, std::span<const double> x_batch,
                       std::span<ChainState> chains, std::span<RngStream> rngs,
                       const RefinePhase& phase,
                       std::span<const bool> burn_in_mask = {},
                       ThreadPool* pool = nullptr);

// log p(x; net) = ln int N(x; h(u), noise_var) phi(u) du by quadrature.
double generator_loglik(const Mlp1D& net, double x, double noise_var,
                        const QuadratureSpec& quad);

// Random softplus features with an output affine layer chosen so the
// generator's mean and variance under u ~ N(0, 1) match the moment estimates
// mean(x) and var(x) - noise_var of the latent distribution.
Mlp1D warm_start_generator(std::span<const double> data, std::size_t hidden,
                           double noise_var, RngStream& rng);

// u minimizing (x - h(u))^2 / (2 noise_var) + u^2 / 2 on a coarse grid;
// used to start each observation's chain near its posterior mode.
double educated_start(const Mlp1D& net, double x, double noise_var);

struct TrainResult {
  Mlp1D net;
  // probe log-likelihood (mean over the probe subset); entry 0 is the
  // initial network, entry e the network after epoch e
  std::vector<double> probe_loglik;
  std::size_t updates = 0;
};

using EpochCallback = std::function<void(std::size_t epoch, const Mlp1D& net)>;

// Runs epochs x minibatches of refinement steps. Observation order is
// reshuffled each epoch from RngStream(seed, ...); chain noise for
// observation i at update k comes from RngStream(seed, derive_stream(k, i)).
// `on_epoch` runs for epoch 0 (the initial net) and after every epoch.
TrainResult train_debiased(std::span<const double> data, const Mlp1D& net_init,
                           const GeneratorFitConfig& cfg, std::uint64_t seed,
                           ThreadPool* pool = nullptr,
                           const EpochCallback& on_epoch = {});

// m draws of h(u), u ~ N(0, 1).
Vector sample_generator(const Mlp1D& net, std::size_t m, RngStream& rng);

}  // namespace sagd
