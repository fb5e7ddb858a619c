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

#include "sagd/genmodel.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "sagd/error.hpp"
#include "sagd/potentials.hpp"

namespace sagd {

namespace {

constexpr std::uint64_t kShuffleTag = 0x53485546464c45ULL;

double log_joint(const Mlp1D& net, double x, double u, double noise_var) {
  const double r = x - mlp_forward(net, u);
  return -0.5 * r * r / noise_var - 0.5 * u * u -
         0.5 * std::log(2.0 * std::numbers::pi * noise_var) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

void GeneratorFitConfig::validate() const {
  if (batch < 1 || chain_steps < 1) {
    throw DomainError("GeneratorFitConfig: batch and chain_steps must be >= 1");
  }
  if (!(alpha >= 0.0) || !(noise_var > 0.0) || !(delta > 0.0) ||
      !(gamma > 0.0)) {
    throw DomainError("GeneratorFitConfig: step sizes, friction and noise "
                      "variance must be positive");
  }
  if (!(gamma * delta < 1.0)) {
    throw DomainError("GeneratorFitConfig: gamma * delta must be below 1");
  }
}

Vector refine_gradient(const Mlp1D& net, std::span<const double> x_batch,
                       std::span<ChainState> chains, std::span<RngStream> rngs,
                       const RefinePhase& phase,
                       std::span<const bool> burn_in_mask, ThreadPool* pool) {
  if (x_batch.empty()) {
    throw DomainError("refine_gradient: empty batch");
  }
  require_same_size(chains.size(), x_batch.size(), "refine_gradient chains");
  require_same_size(rngs.size(), x_batch.size(), "refine_gradient rngs");
  if (!burn_in_mask.empty()) {
    require_same_size(burn_in_mask.size(), x_batch.size(), "refine_gradient mask");
  }
  const std::size_t p = net.parameter_count();
  std::vector<Vector> per_obs(x_batch.size(), Vector(p, 0.0));

  auto body = [&](std::size_t i) {
    const double x = x_batch[i];
    const PotentialPtr pot = generator_posterior(x, net, phase.noise_var);
    const bool burn = burn_in_mask.empty() || burn_in_mask[i];
    const LangevinConfig cfg{phase.gamma, phase.delta, phase.steps,
                             burn ? phase.burn_in : 0};
    Vector& acc = per_obs[i];
    try {
      chains[i] = run_chain(*pot, cfg, std::move(chains[i]), rngs[i],
                            [&](const ChainState& s) {
                              const double u = s.xi[0];
                              const MlpGrads g = mlp_grads(net, u);
                              const double w =
                                  (x - mlp_forward(net, u)) / phase.noise_var;
                              for (std::size_t j = 0; j < p; ++j) {
                                acc[j] += w * g.d_theta[j];
                              }
                            });
    } catch (const DivergenceError& e) {
      throw DivergenceError("observation " + std::to_string(i) + ": " + e.what());
    }
  };
  if (pool != nullptr) {
    pool->parallel_for(x_batch.size(), body);
  } else {
    for (std::size_t i = 0; i < x_batch.size(); ++i) {
      body(i);
    }
  }

  Vector grad(p, 0.0);
  for (const Vector& acc : per_obs) {
    for (std::size_t j = 0; j < p; ++j) {
      grad[j] += acc[j];
    }
  }
  const double weight = 1.0 / (static_cast<double>(x_batch.size()) *
                               static_cast<double>(phase.steps));
  for (double& v : grad) {
    v *= weight;
  }
  return grad;
}

double generator_loglik(const Mlp1D& net, double x, double noise_var,
                        const QuadratureSpec& quad) {
  constexpr int kGrid = 256;
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double u = quad.lo + (quad.hi - quad.lo) * i / kGrid;
    peak = std::max(peak, log_joint(net, x, u, noise_var));
  }
  const double mass = simpson_adaptive(
      [&](double u) { return std::exp(log_joint(net, x, u, noise_var) - peak); },
      quad);
  if (!(mass > 1e-300)) {
    throw QuadratureError("generator_loglik: vanishing marginal density");
  }
  return std::log(mass) + peak;
}

Mlp1D warm_start_generator(std::span<const double> data, std::size_t hidden,
                           double noise_var, RngStream& rng) {
  if (data.size() < 2) {
    throw DomainError("warm_start_generator: need at least two observations");
  }
  Mlp1D net = Mlp1D::zeros(hidden);
  const double fan = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t j = 0; j < hidden; ++j) {
    net.w1[j] = rng.normal();
    net.b1[j] = rng.normal();
    // sign tied to w1 keeps h increasing in u
    net.w2[j] = std::copysign(std::abs(rng.normal()) * fan, net.w1[j]);
  }
  const double mean_x =
      std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
  double var_x = 0.0;
  for (double x : data) {
    var_x += (x - mean_x) * (x - mean_x);
  }
  var_x /= static_cast<double>(data.size() - 1);
  const double latent_var = std::max(var_x - noise_var, 0.05 * var_x);

  // moments of h(u), u ~ N(0, 1)
  QuadratureSpec quad;
  quad.tolerance = 1e-12;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const auto moments = simpson_adaptive_n<2>(
      [&](double u) {
        const double w = std::exp(-0.5 * u * u) * inv_sqrt_2pi;
        const double h = mlp_forward(net, u);
        return std::array<double, 2>{w * h, w * h * h};
      },
      quad);
  const double sd_h = std::sqrt(std::max(moments[1] - moments[0] * moments[0], 0.0));
  if (!(sd_h > 1e-12)) {
    throw DomainError("warm_start_generator: degenerate random features");
  }
  const double scale = std::sqrt(latent_var) / sd_h;
  for (double& w : net.w2) {
    w *= scale;
  }
  net.b2 = mean_x - scale * moments[0];
  return net;
}

double educated_start(const Mlp1D& net, double x, double noise_var) {
  double best_u = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = -80; i <= 80; ++i) {
    const double u = 0.05 * i;
    const double r = x - mlp_forward(net, u);
    const double v = 0.5 * r * r / noise_var + 0.5 * u * u;
    if (v < best_v) {
      best_v = v;
      best_u = u;
    }
  }
  return best_u;
}

TrainResult train_debiased(std::span<const double> data, const Mlp1D& net_init,
                           const GeneratorFitConfig& cfg, std::uint64_t seed,
                           ThreadPool* pool, const EpochCallback& on_epoch) {
  cfg.validate();
  net_init.validate();
  if (data.empty()) {
    throw DomainError("train_debiased: no observations");
  }
  const std::size_t n = data.size();
  TrainResult result;
  result.net = net_init;
  Mlp1D& net = result.net;

  std::vector<ChainState> chains;
  chains.reserve(n);
  for (double x : data) {
    chains.push_back(ChainState::at({educated_start(net, x, cfg.noise_var)}));
  }
  std::vector<bool> visited(n, false);

  const std::size_t probes = std::min(cfg.probe_size, n);
  std::vector<std::size_t> probe_index(probes);
  for (std::size_t j = 0; j < probes; ++j) {
    probe_index[j] = j * n / probes;
  }
  auto probe_loglik = [&]() {
    if (probes == 0) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    double total = 0.0;
    for (std::size_t i : probe_index) {
      total += generator_loglik(net, data[i], cfg.noise_var, cfg.quad);
    }
    return total / static_cast<double>(probes);
  };

  result.probe_loglik.push_back(probe_loglik());
  if (on_epoch) {
    on_epoch(0, net);
  }

  Vector theta = net.parameters();
  AdamState adam;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    RngStream shuffle(seed, derive_stream(kShuffleTag, epoch));
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle.below(i)]);
    }
    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t stop = std::min(n, start + cfg.batch);
      const std::size_t m = stop - start;
      ++result.updates;
      Vector xs(m);
      std::vector<ChainState> batch_chains(m);
      std::vector<RngStream> rngs;
      rngs.reserve(m);
      std::unique_ptr<bool[]> mask(new bool[m]);
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = order[start + j];
        xs[j] = data[i];
        batch_chains[j] = std::move(chains[i]);
        rngs.emplace_back(seed, derive_stream(result.updates, i));
        mask[j] = !visited[i];
      }
      const RefinePhase phase{cfg.gamma, cfg.delta, cfg.chain_steps,
                              cfg.burn_in, cfg.noise_var};
      const Vector g = refine_gradient(net, xs, batch_chains, rngs, phase,
                                       std::span<const bool>(mask.get(), m), pool);
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = order[start + j];
        chains[i] = std::move(batch_chains[j]);
        visited[i] = true;
      }

      const double alpha =
          cfg.decay ? cfg.alpha / std::sqrt(static_cast<double>(result.updates))
                    : cfg.alpha;
      if (cfg.update == UpdateRule::adam) {
        Vector descent(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
          descent[j] = -g[j];
        }
        theta = adam_update(theta, descent, adam, alpha, cfg.adam,
                            Domain::unconstrained());
      } else {
        for (std::size_t j = 0; j < g.size(); ++j) {
          theta[j] += alpha * g[j];
        }
      }
      if (!all_finite(theta)) {
        throw DivergenceError("train_debiased: non-finite parameters at update " +
                              std::to_string(result.updates));
      }
      net.set_parameters(theta);
    }
    result.probe_loglik.push_back(probe_loglik());
    if (on_epoch) {
      on_epoch(epoch, net);
    }
  }
  return result;
}

Vector sample_generator(const Mlp1D& net, std::size_t m, RngStream& rng) {
  if (m < 1) {
    throw DomainError("sample_generator: need m >= 1");
  }
  Vector out(m);
  for (double& z : out) {
    z = mlp_forward(net, rng.normal());
  }
  return out;
}

}  // namespace sagd
