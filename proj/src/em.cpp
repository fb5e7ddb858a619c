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

#include "sagd/em.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "sagd/error.hpp"
#include "sagd/potentials.hpp"

namespace sagd {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": observation must be positive");
  }
}

// Largest value of L(theta; x, .) on a uniform grid over the quadrature
// interval. Subtracting it keeps exp(L) in range without changing ratios.
double log_peak(const GammaParams& theta, double x, const QuadratureSpec& quad) {
  constexpr int kGrid = 256;
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double z = quad.lo + (quad.hi - quad.lo) * i / kGrid;
    peak = std::max(peak, complete_loglik(theta, x, z));
  }
  return peak;
}

void check_normalizer(double mass) {
  if (!(mass > 1e-300)) {
    throw QuadratureError("posterior normalizer vanished");
  }
}

template <typename PerObservation>
double sum_over(const Vector& data, ThreadPool* pool, PerObservation&& fn) {
  std::vector<double> parts(data.size());
  auto body = [&](std::size_t i) { parts[i] = fn(data[i]); };
  if (pool != nullptr) {
    pool->parallel_for(data.size(), body);
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      body(i);
    }
  }
  double total = 0.0;
  for (double v : parts) {
    total += v;
  }
  return total;
}

}  // namespace

GammaLatentModel simulate_gamma_data(std::size_t n, double a, double b,
                                     RngStream& rng) {
  if (n < 1) {
    throw DomainError("simulate_gamma_data: need n >= 1");
  }
  GammaLatentModel model;
  model.truth = {a, b};
  model.data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.normal();
    const double shape = 10.0 * sigmoid(a + b * z);
    double x = rng.gamma(shape);
    // shapes near zero can underflow to exactly 0
    x = std::max(x, std::numeric_limits<double>::min());
    model.data.push_back(x);
  }
  return model;
}

double complete_loglik(const GammaParams& theta, double x, double z) {
  require_positive(x, "complete_loglik");
  const double s = 10.0 * sigmoid(theta.a + theta.b * z);
  return -0.5 * z * z + (s - 1.0) * std::log(x) - log_gamma(s);
}

std::array<double, 2> q_grad_terms(const GammaParams& theta, double x, double z) {
  require_positive(x, "q_grad_terms");
  const double eta = theta.a + theta.b * z;
  const double s = 10.0 * sigmoid(eta);
  const double da = 10.0 * sigmoid_derivative(eta) * (std::log(x) - digamma(s));
  return {da, z * da};
}

double q_value_exact(const GammaParams& theta_k, const GammaParams& theta,
                     const Vector& data, const QuadratureSpec& quad) {
  quad.validate();
  return sum_over(data, nullptr, [&](double x) {
    const double peak = log_peak(theta_k, x, quad);
    const auto r = simpson_adaptive_n<2>(
        [&](double z) {
          const double w = std::exp(complete_loglik(theta_k, x, z) - peak);
          return std::array<double, 2>{w, w * complete_loglik(theta, x, z)};
        },
        quad);
    check_normalizer(r[0]);
    return r[1] / r[0];
  });
}

Vector q_gradient_exact(const GammaParams& theta_k, const GammaParams& theta,
                        const Vector& data, const QuadratureSpec& quad) {
  quad.validate();
  std::vector<std::array<double, 2>> parts(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double x = data[i];
    const double peak = log_peak(theta_k, x, quad);
    const auto r = simpson_adaptive_n<3>(
        [&](double z) {
          const double w = std::exp(complete_loglik(theta_k, x, z) - peak);
          const auto g = q_grad_terms(theta, x, z);
          return std::array<double, 3>{w, w * g[0], w * g[1]};
        },
        quad);
    check_normalizer(r[0]);
    parts[i] = {r[1] / r[0], r[2] / r[0]};
  }
  Vector total(2, 0.0);
  for (const auto& p : parts) {
    total[0] += p[0];
    total[1] += p[1];
  }
  return total;
}

double marginal_loglik(const GammaParams& theta, const Vector& data,
                       const QuadratureSpec& quad, ThreadPool* pool) {
  quad.validate();
  const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi);
  return sum_over(data, pool, [&](double x) {
    const double peak = log_peak(theta, x, quad);
    const double mass = simpson_adaptive(
        [&](double z) { return std::exp(complete_loglik(theta, x, z) - peak); },
        quad);
    check_normalizer(mass);
    return std::log(mass) + peak - log_norm - x;
  });
}

SagdConfig EmConfig::default_inner() {
  SagdConfig c;
  c.iterations = 100;
  c.schedule.kind = Schedule::Kind::convex;
  c.schedule.c1 = 0.1;
  c.schedule.c2 = 1.0;
  c.schedule.k_offset = 20;
  c.schedule.alpha0 = 0.2;
  c.schedule.constant_alpha = true;
  c.gamma = 2.0;
  c.burn_in = 100;
  c.chains = 1;
  c.persistent = true;
  c.return_average = false;
  return c;
}

EmResult em_run(const GammaLatentModel& model, const GammaParams& theta0,
                const EmConfig& cfg, std::uint64_t seed, ThreadPool* pool) {
  const Vector& data = model.data;
  if (data.empty()) {
    throw DomainError("em_run: no observations");
  }
  for (double x : data) {
    require_positive(x, "em_run");
  }
  if (!std::isfinite(theta0.a) || !std::isfinite(theta0.b)) {
    throw DomainError("em_run: initial parameters must be finite");
  }
  const std::size_t n = data.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  EmResult result;
  result.initial_loglik = marginal_loglik(theta0, data, cfg.quad, pool);
  GammaParams theta = theta0;
  const ChainState init = ChainState::at(Vector(n, 0.0));
  std::vector<ChainState> resume;
  std::size_t update = 0;

  for (std::size_t m = 1; m <= cfg.m_steps; ++m) {
    if (cfg.inner.iterations == 0) {
      break;
    }
    const GammaParams theta_k = theta;
    Objective obj;
    obj.dim_theta = 2;
    obj.dim_xi = n;
    // minimize -Q / n
    obj.grad_f = [&](std::span<const double> th, std::span<const double> z,
                     std::span<double> out) {
      const GammaParams p{th[0], th[1]};
      double ga = 0.0;
      double gb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto g = q_grad_terms(p, data[i], z[i]);
        ga += g[0];
        gb += g[1];
      }
      out[0] = -ga * inv_n;
      out[1] = -gb * inv_n;
    };
    obj.exact_gradient = [&](const Vector& th) {
      Vector g = q_gradient_exact(theta_k, {th[0], th[1]}, data, cfg.quad);
      for (double& v : g) {
        v *= -inv_n;
      }
      return g;
    };
    SagdConfig inner = cfg.inner;
    inner.use_exact_gradient = cfg.mode == EmMode::exact_gd;
    if (!inner.use_exact_gradient) {
      obj.fixed_potential = gamma_latent_posterior(data, theta_k.a, theta_k.b);
    }

    SagdResult res = sagd_run(obj, Domain::unconstrained(), inner,
                              {theta_k.a, theta_k.b}, init,
                              derive_stream(seed, m), pool, std::move(resume));
    if (res.diverged) {
      throw DivergenceError("M-step " + std::to_string(m) + ", " + res.failure);
    }
    for (const TrajectoryRecord& rec : res.trajectory) {
      ++update;
      EmRecord row;
      row.update = update;
      row.m_step = m;
      row.theta = {rec.theta[0], rec.theta[1]};
      row.loglik = std::numeric_limits<double>::quiet_NaN();
      if (cfg.loglik_every > 0 && update % cfg.loglik_every == 0) {
        row.loglik = marginal_loglik(row.theta, data, cfg.quad, pool);
      }
      result.path.push_back(row);
    }
    theta = {res.theta_last[0], res.theta_last[1]};
    resume = std::move(res.chains);
  }
  result.final_theta = theta;
  result.final_loglik = marginal_loglik(theta, data, cfg.quad, pool);
  return result;
}

}  // namespace sagd
