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

#include <cmath>

#include "doctest.h"
#include "sagd/error.hpp"
#include "sagd/optimizer.hpp"
#include "sagd/potentials.hpp"
#include "sagd/thread_pool.hpp"

using namespace sagd;

namespace {

Objective quadratic_objective(const Vector& mean) {
  Objective obj;
  obj.dim_theta = mean.size();
  obj.dim_xi = mean.size();
  obj.grad_f = [](std::span<const double> th, std::span<const double> xi,
                  std::span<double> out) {
    for (std::size_t i = 0; i < th.size(); ++i) {
      out[i] = th[i] - xi[i];
    }
  };
  obj.fixed_potential = gaussian_potential(mean, mean.size());
  obj.exact_gradient = [mean](const Vector& th) {
    Vector g(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) {
      g[i] = th[i] - mean[i];
    }
    return g;
  };
  return obj;
}

Vector random_point(RngStream& rng, std::size_t r, double scale) {
  Vector v(r);
  for (double& x : v) {
    x = scale * rng.normal();
  }
  return v;
}

}  // namespace

TEST_CASE("schedule values") {
  Schedule s;
  s.kind = Schedule::Kind::convex;
  s.c1 = 0.1;
  s.c2 = 1.0;
  s.k_offset = 20;
  s.alpha0 = 0.2;
  ScheduleValues v = schedule_at(s, 1);
  CHECK(v.delta == doctest::Approx(0.1));
  CHECK(v.steps == 21);
  CHECK(v.alpha == doctest::Approx(0.2));
  v = schedule_at(s, 4);
  CHECK(v.delta == doctest::Approx(0.05));
  CHECK(v.steps == 24);
  CHECK(v.alpha == doctest::Approx(0.1));

  s.constant_alpha = true;
  CHECK(schedule_at(s, 400).alpha == 0.2);

  Schedule nc;
  nc.kind = Schedule::Kind::nonconvex;
  nc.c1 = 1.0;
  nc.c2 = 1.0;
  nc.exponent = 0.5;
  nc.alpha0 = 0.5;
  v = schedule_at(nc, 4);
  CHECK(v.delta == doctest::Approx(0.5));
  CHECK(v.steps == 4);
  CHECK(v.alpha == doctest::Approx(0.125));

  CHECK_THROWS_AS(schedule_at(s, 0), DomainError);
}

TEST_CASE("schedules are monotone") {
  for (auto kind : {Schedule::Kind::convex, Schedule::Kind::nonconvex, Schedule::Kind::fixed}) {
    Schedule s;
    s.kind = kind;
    s.c1 = 0.3;
    s.c2 = 0.7;
    s.alpha0 = 0.4;
    s.exponent = 0.35;
    s.k_offset = 3;
    ScheduleValues prev = schedule_at(s, 1);
    for (std::size_t t = 2; t <= 10000; ++t) {
      const ScheduleValues v = schedule_at(s, t);
      REQUIRE(v.delta > 0.0);
      REQUIRE(v.delta <= prev.delta);
      REQUIRE(v.steps >= prev.steps);
      REQUIRE(v.steps >= 1);
      REQUIRE(v.alpha > 0.0);
      REQUIRE(v.alpha <= prev.alpha);
      prev = v;
    }
  }
}

TEST_CASE("projection examples") {
  const Domain box = Domain::box({-1, -1}, {1, 1});
  CHECK(project({0.2, -0.3}, box) == Vector{0.2, -0.3});
  CHECK(project({2.0, 0.5}, box) == Vector{1.0, 0.5});

  const Domain ball = Domain::ball({0, 0}, 1.0);
  const Vector p = project({3.0, 4.0}, ball);
  CHECK(std::abs(p[0] - 0.6) < 1e-15);
  CHECK(std::abs(p[1] - 0.8) < 1e-15);
  CHECK(project({0.1, 0.1}, ball) == Vector{0.1, 0.1});
  CHECK(project({7.0, -9.0}, Domain::unconstrained()) == Vector{7.0, -9.0});

  CHECK(box.diameter().value() == doctest::Approx(std::sqrt(8.0)));
  CHECK(ball.diameter().value() == 2.0);
  CHECK_FALSE(Domain::unconstrained().diameter().has_value());
  CHECK_THROWS_AS(Domain::box({1.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(Domain::ball({0.0}, 0.0), DomainError);
}

TEST_CASE("projection is idempotent and nonexpansive") {
  RngStream rng(51);
  const std::vector<Domain> domains{
      Domain::unconstrained(), Domain::box({-1.0, 0.0, -2.0}, {1.0, 0.5, 3.0}),
      Domain::ball({0.5, -0.5, 1.0}, 1.5)};
  for (const Domain& dom : domains) {
    for (int i = 0; i < 1000; ++i) {
      const Vector x = random_point(rng, 3, 3.0);
      const Vector y = random_point(rng, 3, 3.0);
      const Vector px = project(x, dom);
      const Vector py = project(y, dom);
      CHECK(distance(project(px, dom), px) <= 1e-12);
      CHECK(distance(px, py) <= distance(x, y) + 1e-12);
    }
  }
}

TEST_CASE("adam update") {
  const Domain free = Domain::unconstrained();
  AdamSettings settings;
  AdamState state;
  Vector theta{1.0, -2.0};
  for (int i = 0; i < 5; ++i) {
    theta = adam_update(theta, {0.0, 0.0}, state, 0.1, settings, free);
  }
  CHECK(theta == Vector{1.0, -2.0});

  AdamState first;
  const Vector g{0.5, -3.0};
  const Vector next = adam_update({0.0, 0.0}, g, first, 0.1, settings, free);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(next[i] + 0.1 * g[i] / (std::abs(g[i]) + settings.epsilon)) < 1e-15);
  }

  AdamSettings memoryless{0.0, 0.0, 1e-8};
  AdamState st;
  Vector th{0.0, 0.0};
  th = adam_update(th, {2.0, -0.5}, st, 0.1, memoryless, free);
  th = adam_update(th, {-4.0, 1.0}, st, 0.1, memoryless, free);
  CHECK(std::abs(th[0] - 0.0) < 1e-9);
  CHECK(std::abs(th[1] - 0.0) < 1e-9);

  AdamState boxed;
  const Vector clipped =
      adam_update({0.95, 0.0}, {-1.0, 0.0}, boxed, 0.1, settings, Domain::box({-1, -1}, {1, 1}));
  CHECK(clipped[0] == 1.0);
}

TEST_CASE("approximate gradient") {
  const PotentialPtr pot = gaussian_potential({}, 2);
  Objective indep;
  indep.dim_theta = 2;
  indep.dim_xi = 2;
  indep.grad_f = [](std::span<const double> th, std::span<const double>, std::span<double> out) {
    out[0] = th[0];
    out[1] = th[1];
  };
  std::vector<ChainState> chains(3, ChainState::at({0, 0}));
  std::vector<RngStream> rngs{RngStream(1, 0), RngStream(1, 1), RngStream(1, 2)};
  const InnerPhase phase{2.0, 0.1, 10, 5};
  const Vector same = approximate_gradient({0.3, -0.7}, indep, *pot, phase, chains, rngs);
  CHECK(std::abs(same[0] - 0.3) < 1e-15);
  CHECK(std::abs(same[1] + 0.7) < 1e-15);

  const Objective quad = quadratic_objective({0.0, 0.0});
  std::vector<ChainState> one(1, ChainState::at({0, 0}));
  std::vector<RngStream> r1{RngStream(2, 0)};
  const Vector g = approximate_gradient({0.4, 0.9}, quad, *pot,
                                        InnerPhase{2.0, 0.05, 200000, 1000}, one, r1);
  CHECK(std::abs(g[0] - 0.4) < 0.05);
  CHECK(std::abs(g[1] - 0.9) < 0.05);
}

TEST_CASE("approximate gradient does not depend on chain order or pool") {
  const Objective quad = quadratic_objective({1.0, 2.0});
  const PotentialPtr pot = quad.fixed_potential;
  const InnerPhase phase{2.0, 0.1, 50, 10};
  auto run = [&](std::vector<std::uint64_t> streams, ThreadPool* pool) {
    std::vector<ChainState> chains(streams.size(), ChainState::at({0, 0}));
    std::vector<RngStream> rngs;
    for (auto s : streams) {
      rngs.emplace_back(9, s);
    }
    return approximate_gradient({0.0, 0.0}, quad, *pot, phase, chains, rngs, pool);
  };
  const Vector forward = run({0, 1}, nullptr);
  const Vector swapped = run({1, 0}, nullptr);
  CHECK(std::abs(forward[0] - swapped[0]) < 1e-14);
  CHECK(std::abs(forward[1] - swapped[1]) < 1e-14);
  ThreadPool pool(4);
  const std::vector<std::uint64_t> many{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(run(many, nullptr) == run(many, &pool));
}

TEST_CASE("zero step size returns the start") {
  Objective quad = quadratic_objective({1.0, -1.0});
  SagdConfig cfg;
  cfg.iterations = 1;
  cfg.schedule.kind = Schedule::Kind::fixed;
  cfg.schedule.alpha0 = 0.0;
  const SagdResult res = sagd_run(quad, Domain::unconstrained(), cfg, {0.25, 0.5},
                                  ChainState::at({0, 0}), 3);
  CHECK(res.theta_hat == Vector{0.25, 0.5});
  CHECK(res.trajectory.size() == 1);
}

TEST_CASE("oracle mode reproduces projected gradient descent bit for bit") {
  const Vector mean{4.0, -7.0};
  Objective quad = quadratic_objective(mean);
  const Domain dom = Domain::box({-5, -5}, {5, 5});
  SagdConfig cfg;
  cfg.iterations = 50;
  cfg.schedule.kind = Schedule::Kind::convex;
  cfg.schedule.alpha0 = 0.3;
  cfg.use_exact_gradient = true;
  cfg.return_average = false;
  const SagdResult res = sagd_run(quad, dom, cfg, {0.0, 0.0}, ChainState::at({0, 0}), 0);

  Vector theta{0.0, 0.0};
  for (std::size_t t = 1; t <= 50; ++t) {
    const double alpha = 0.3 / std::sqrt(static_cast<double>(t));
    Vector next(2);
    for (std::size_t i = 0; i < 2; ++i) {
      next[i] = theta[i] - alpha * (theta[i] - mean[i]);
    }
    theta = project(next, dom);
    REQUIRE(res.trajectory[t - 1].theta == theta);
  }
  CHECK(res.theta_hat == theta);
}

TEST_CASE("iterates stay inside the domain") {
  Objective quad = quadratic_objective({9.0, -9.0});
  const Domain ball = Domain::ball({0.0, 0.0}, 2.0);
  SagdConfig cfg;
  cfg.iterations = 60;
  cfg.schedule.alpha0 = 1.0;
  cfg.burn_in = 10;
  const SagdResult res = sagd_run(quad, ball, cfg, {5.0, 5.0}, ChainState::at({9, -9}), 4);
  for (const TrajectoryRecord& rec : res.trajectory) {
    CHECK(norm(rec.theta) <= 2.0 + 1e-12);
  }
}

TEST_CASE("coupled potentials are rebuilt every iteration") {
  Objective obj = quadratic_objective({0.0});
  obj.fixed_potential = nullptr;
  int builds = 0;
  obj.potential_builder = [&](const Vector& theta) {
    ++builds;
    return gaussian_potential(theta, 1);
  };
  SagdConfig cfg;
  cfg.iterations = 12;
  cfg.burn_in = 5;
  sagd_run(obj, Domain::unconstrained(), cfg, {0.5}, ChainState::at({0.0}), 5);
  CHECK(builds == 12);
}

TEST_CASE("sagd runs are deterministic across thread counts") {
  Objective quad = quadratic_objective({1.0, -1.0});
  SagdConfig cfg;
  cfg.iterations = 40;
  cfg.chains = 6;
  cfg.burn_in = 20;
  const SagdResult serial = sagd_run(quad, Domain::unconstrained(), cfg, {0, 0},
                                     ChainState::at({0, 0}), 77);
  ThreadPool pool(3);
  const SagdResult threaded = sagd_run(quad, Domain::unconstrained(), cfg, {0, 0},
                                       ChainState::at({0, 0}), 77, &pool);
  CHECK(serial.theta_hat == threaded.theta_hat);
  CHECK(serial.theta_last == threaded.theta_last);
}

TEST_CASE("divergence stops the run and keeps the partial trajectory") {
  Objective quad = quadratic_objective({0.0});
  SagdConfig cfg;
  cfg.iterations = 10;
  cfg.gamma = 0.01;
  cfg.schedule.kind = Schedule::Kind::fixed;
  cfg.schedule.c1 = 50.0;
  cfg.schedule.c2 = 500.0;
  cfg.burn_in = 0;
  const SagdResult res = sagd_run(quad, Domain::unconstrained(), cfg, {0.0},
                                  ChainState::at({1.0}), 1);
  CHECK(res.diverged);
  CHECK(res.failure.find("iteration 1") != std::string::npos);
  CHECK(res.trajectory.empty());
}

TEST_CASE("convex quadratic converges toward the optimum") {
  const Vector mean{1.0, -1.0};
  const Objective quad = quadratic_objective(mean);
  const Domain box = Domain::box({-5, -5}, {5, 5});
  SagdConfig cfg;
  cfg.iterations = 400;
  cfg.schedule.c1 = 0.2;
  cfg.schedule.c2 = 10.0;
  cfg.schedule.alpha0 = 1.0;
  const SagdResult res = sagd_run(quad, box, cfg, {0, 0}, ChainState::at({0, 0}), 8);
  CHECK(distance(res.theta_hat, mean) <= 0.1);
}
