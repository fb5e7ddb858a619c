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

#include <quadmath.h>

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sagd/core_math.hpp"
#include "sagd/em.hpp"
#include "sagd/error.hpp"
#include "sagd/oracles.hpp"
#include "sagd/thread_pool.hpp"

using namespace sagd;

namespace {

double complete_loglik_quad(double a, double b, double x, double z) {
  const __float128 eta = static_cast<__float128>(a) + static_cast<__float128>(b) * z;
  const __float128 s = 10 / (1 + expq(-eta));
  const __float128 zq = z;
  const __float128 v = -zq * zq / 2 + (s - 1) * logq(static_cast<__float128>(x)) - lgammaq(s);
  return static_cast<double>(v);
}

}  // namespace

TEST_CASE("complete log-likelihood") {
  CHECK(std::abs(complete_loglik({0.0, 1.0}, 1.0, 0.0) + std::log(24.0)) < 1e-12);

  for (double t : {-2.0, -0.5, 0.0, 1.3}) {
    const GammaParams theta{0.7, -1.1};
    const double s = 10.0 * sigmoid(theta.a + theta.b * t);
    CHECK(std::abs(complete_loglik(theta, 1.0, t) - (-0.5 * t * t - log_gamma(s))) < 1e-13);
  }

  CHECK(std::abs(complete_loglik({2.0, 0.5}, 2.0, 0.3) - complete_loglik_quad(2.0, 0.5, 2.0, 0.3)) <
        1e-10);
  RngStream rng(61);
  for (int i = 0; i < 200; ++i) {
    const double a = 2.0 * rng.normal();
    const double b = rng.normal();
    const double x = 0.05 + 10.0 * rng.uniform();
    const double z = 2.0 * rng.normal();
    CHECK(std::abs(complete_loglik({a, b}, x, z) - complete_loglik_quad(a, b, x, z)) < 1e-10);
  }
  CHECK_THROWS_AS(complete_loglik({0.0, 0.0}, 0.0, 0.0), DomainError);
}

TEST_CASE("q_grad_terms structure and finite differences") {
  RngStream rng(62);
  for (int i = 0; i < 100; ++i) {
    const GammaParams theta{2.0 * rng.normal(), rng.normal()};
    const double x = 0.05 + 10.0 * rng.uniform();
    const double z = 2.0 * rng.normal();
    const auto g = q_grad_terms(theta, x, z);
    CHECK(g[1] == z * g[0]);
    const Vector fd = finite_diff_grad(
        [&](const Vector& p) { return complete_loglik({p[0], p[1]}, x, z); },
        {theta.a, theta.b}, 1e-5);
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(std::abs(g[c] - fd[c]) <= 1e-6 * std::max(1.0, std::abs(fd[c])));
    }
  }

  const GammaParams theta{0.4, 0.9};
  const double z = -0.6;
  const double s = 10.0 * sigmoid(theta.a + theta.b * z);
  const auto zero = q_grad_terms(theta, std::exp(digamma(s)), z);
  CHECK(std::abs(zero[0]) < 1e-14);
  CHECK(std::abs(zero[1]) < 1e-14);
  CHECK_THROWS_AS(q_grad_terms(theta, -1.0, 0.0), DomainError);
}

TEST_CASE("simulated data") {
  RngStream rng(63);
  const GammaLatentModel model = simulate_gamma_data(100, 2.0, 0.5, rng);
  CHECK(model.data.size() == 100);
  for (double x : model.data) {
    CHECK(x > 0.0);
  }
  RngStream again(63);
  CHECK(simulate_gamma_data(100, 2.0, 0.5, again).data == model.data);

  RngStream flat_rng(64);
  const GammaLatentModel flat = simulate_gamma_data(200000, 0.3, 0.0, flat_rng);
  double mean = 0.0;
  for (double x : flat.data) {
    mean += x;
  }
  mean /= static_cast<double>(flat.data.size());
  const double shape = 10.0 * sigmoid(0.3);
  CHECK(std::abs(mean - shape) < 5.0 * std::sqrt(shape / 200000.0));
}

TEST_CASE("exact Q gradient with a flat posterior matches Monte Carlo") {
  // b_k = 0 makes the posterior of z standard normal.
  const GammaParams theta_k{1.0, 0.0};
  const GammaParams theta{0.5, 0.8};
  const Vector data{2.5};
  const QuadratureSpec quad;
  const Vector exact = q_gradient_exact(theta_k, theta, data, quad);

  RngStream rng(65);
  for (std::size_t c = 0; c < 2; ++c) {
    RngStream r(65, c);
    const McEstimate mc = mc_expectation(
        [](RngStream& s) { return s.normal(); },
        [&](double z) { return q_grad_terms(theta, data[0], z)[c]; }, 1000000, r);
    CHECK(std::abs(mc.mean - exact[c]) <= 5e-3 * std::abs(exact[c]) + 4.0 * mc.standard_error);
  }
}

TEST_CASE("exact Q gradient with b = 0 in the target parameters") {
  const GammaParams theta_k{1.5, 0.7};
  const GammaParams theta{0.2, 0.0};
  const Vector data{3.0};
  const QuadratureSpec quad;
  const Vector g = q_gradient_exact(theta_k, theta, data, quad);

  // posterior mean of z under theta_k
  const double peak = complete_loglik(theta_k, 3.0, 0.0);
  const auto moments = simpson_adaptive_n<2>(
      [&](double z) {
        const double w = std::exp(complete_loglik(theta_k, 3.0, z) - peak);
        return std::array<double, 2>{w, w * z};
      },
      quad);
  const double posterior_mean = moments[1] / moments[0];
  CHECK(std::abs(g[1] - posterior_mean * g[0]) < 1e-9);
}

TEST_CASE("quadrature self-convergence") {
  const Vector data{0.4, 2.0, 9.0};
  const GammaParams theta_k{2.0, 0.5};
  const GammaParams theta{1.2, -0.3};
  QuadratureSpec base;
  QuadratureSpec fine = base;
  fine.initial_panels *= 2;
  const Vector g0 = q_gradient_exact(theta_k, theta, data, base);
  const Vector g1 = q_gradient_exact(theta_k, theta, data, fine);
  CHECK(std::abs(g0[0] - g1[0]) < 1e-8);
  CHECK(std::abs(g0[1] - g1[1]) < 1e-8);
  CHECK(std::abs(marginal_loglik(theta, data, base) - marginal_loglik(theta, data, fine)) < 1e-8);
}

TEST_CASE("exact Q gradient is the derivative of exact Q") {
  const Vector data{0.8, 4.0};
  const GammaParams theta_k{1.0, 0.6};
  const QuadratureSpec quad;
  const Vector g = q_gradient_exact(theta_k, theta_k, data, quad);
  const Vector fd = finite_diff_grad(
      [&](const Vector& p) { return q_value_exact(theta_k, {p[0], p[1]}, data, quad); },
      {theta_k.a, theta_k.b}, 1e-4);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(std::abs(g[c] - fd[c]) <= 1e-4 * std::max(std::abs(fd[c]), 1e-3));
  }
}

TEST_CASE("marginal log-likelihood with b = 0 is a gamma log-density") {
  const double a = 0.9;
  const double x = 3.7;
  const double s = 10.0 * sigmoid(a);
  const double closed = (s - 1.0) * std::log(x) - x - log_gamma(s);
  CHECK(std::abs(marginal_loglik({a, 0.0}, {x}, QuadratureSpec{}) - closed) < 1e-9);
}

TEST_CASE("exact EM raises the marginal likelihood across M-steps") {
  RngStream rng(1);
  const GammaLatentModel model = simulate_gamma_data(100, 2.0, 0.5, rng);
  EmConfig cfg;
  cfg.mode = EmMode::exact_gd;
  cfg.loglik_every = 0;
  cfg.m_steps = 3;
  std::vector<double> ends;
  GammaParams theta{0.0, 1.0};
  ends.push_back(marginal_loglik(theta, model.data, cfg.quad));
  for (std::size_t m = 0; m < 3; ++m) {
    EmConfig one = cfg;
    one.m_steps = 1;
    const EmResult res = em_run(model, theta, one, 0);
    theta = res.final_theta;
    ends.push_back(res.final_loglik);
  }
  for (std::size_t i = 1; i < ends.size(); ++i) {
    CHECK(ends[i] >= ends[i - 1] - 1e-6);
  }

  const EmResult full = em_run(model, {0.0, 1.0}, cfg, 0);
  CHECK(full.path.size() == 300);
  CHECK(full.final_theta.a == theta.a);
  CHECK(full.final_theta.b == theta.b);
}

TEST_CASE("em_run bookkeeping") {
  RngStream rng(2);
  const GammaLatentModel model = simulate_gamma_data(20, 2.0, 0.5, rng);
  EmConfig cfg;
  cfg.inner.iterations = 5;
  cfg.m_steps = 2;
  cfg.loglik_every = 2;
  const EmResult res = em_run(model, {0.0, 1.0}, cfg, 7);
  REQUIRE(res.path.size() == 10);
  for (std::size_t i = 0; i < res.path.size(); ++i) {
    CHECK(res.path[i].update == i + 1);
    CHECK(res.path[i].m_step == i / 5 + 1);
    CHECK(std::isnan(res.path[i].loglik) == (i % 2 == 0));
  }

  ThreadPool pool(3);
  const EmResult threaded = em_run(model, {0.0, 1.0}, cfg, 7, &pool);
  CHECK(threaded.final_theta.a == res.final_theta.a);
  CHECK(threaded.final_theta.b == res.final_theta.b);
  CHECK(threaded.final_loglik == res.final_loglik);

  const EmResult other = em_run(model, {0.0, 1.0}, cfg, 8);
  CHECK(other.final_theta.a != res.final_theta.a);

  EmConfig none = cfg;
  none.inner.iterations = 0;
  const EmResult idle = em_run(model, {0.3, -0.2}, none, 7);
  CHECK(idle.path.empty());
  CHECK(idle.final_theta.a == 0.3);
  CHECK(idle.final_theta.b == -0.2);
}
