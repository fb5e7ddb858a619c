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

#include "sagd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sagd/error.hpp"

namespace sagd {

Domain Domain::unconstrained() { return Domain{}; }

Domain Domain::box(Vector lower, Vector upper) {
  Domain d;
  d.kind = Kind::box;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  d.validate();
  return d;
}

Domain Domain::ball(Vector center, double radius) {
  Domain d;
  d.kind = Kind::ball;
  d.center = std::move(center);
  d.radius = radius;
  d.validate();
  return d;
}

void Domain::validate() const {
  switch (kind) {
    case Kind::unconstrained:
      return;
    case Kind::box:
      require_same_size(lower.size(), upper.size(), "Domain box bounds");
      for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) ||
            !std::isfinite(upper[i])) {
          throw DomainError("Domain: box needs finite lower <= upper");
        }
      }
      return;
    case Kind::ball:
      if (!(radius > 0.0) || !std::isfinite(radius) || !all_finite(center)) {
        throw DomainError("Domain: ball needs a finite center and radius > 0");
      }
      return;
  }
}

std::optional<double> Domain::diameter() const {
  switch (kind) {
    case Kind::box:
      return distance(lower, upper);
    case Kind::ball:
      return 2.0 * radius;
    case Kind::unconstrained:
      break;
  }
  return std::nullopt;
}

Vector project(const Vector& theta, const Domain& dom) {
  switch (dom.kind) {
    case Domain::Kind::unconstrained:
      return theta;
    case Domain::Kind::box: {
      require_same_size(theta.size(), dom.lower.size(), "project box");
      Vector out(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) {
        out[i] = std::clamp(theta[i], dom.lower[i], dom.upper[i]);
      }
      return out;
    }
    case Domain::Kind::ball: {
      require_same_size(theta.size(), dom.center.size(), "project ball");
      const double r = distance(theta, dom.center);
      if (r <= dom.radius) {
        return theta;
      }
      Vector out(theta.size());
      const double scale = dom.radius / r;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        out[i] = dom.center[i] + (theta[i] - dom.center[i]) * scale;
      }
      return out;
    }
  }
  return theta;
}

void Schedule::validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(alpha0 >= 0.0)) {
    throw DomainError("Schedule: need c1 > 0, c2 > 0, alpha0 >= 0");
  }
  if (kind == Kind::nonconvex && !(exponent > 0.0)) {
    throw DomainError("Schedule: nonconvex exponent must be positive");
  }
}

ScheduleValues schedule_at(const Schedule& s, std::size_t t) {
  if (t < 1) {
    throw DomainError("schedule_at: iterations are numbered from 1");
  }
  const double td = static_cast<double>(t);
  ScheduleValues v;
  double raw_steps = 0.0;
  switch (s.kind) {
    case Schedule::Kind::convex:
      v.delta = s.c1 / std::sqrt(td);
      raw_steps = s.c2 * td;
      v.alpha = s.alpha0 / std::sqrt(td);
      break;
    case Schedule::Kind::nonconvex:
      v.delta = s.c1 * std::pow(td, -s.exponent);
      raw_steps = s.c2 * std::pow(td, 2.0 * s.exponent);
      v.alpha = s.alpha0 / td;
      break;
    case Schedule::Kind::fixed:
      v.delta = s.c1;
      raw_steps = s.c2;
      v.alpha = s.alpha0;
      break;
  }
  if (s.constant_alpha) {
    v.alpha = s.alpha0;
  }
  v.steps = static_cast<std::size_t>(std::ceil(raw_steps)) + s.k_offset;
  if (v.steps == 0) {
    v.steps = 1;
  }
  return v;
}

Vector adam_update(const Vector& theta, const Vector& grad, AdamState& state,
                   double alpha, const AdamSettings& settings,
                   const Domain& dom) {
  require_same_size(theta.size(), grad.size(), "adam_update");
  if (state.m.empty()) {
    state.m.assign(theta.size(), 0.0);
    state.v.assign(theta.size(), 0.0);
    state.t = 0;
  }
  require_same_size(state.m.size(), theta.size(), "adam_update state");
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(settings.beta1, t);
  const double correction2 = 1.0 - std::pow(settings.beta2, t);
  Vector next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = settings.beta1 * state.m[i] + (1.0 - settings.beta1) * grad[i];
    state.v[i] =
        settings.beta2 * state.v[i] + (1.0 - settings.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    next[i] = theta[i] - alpha * m_hat / (std::sqrt(v_hat) + settings.epsilon);
  }
  return project(next, dom);
}

void SagdConfig::validate() const {
  if (iterations < 1) {
    throw DomainError("SagdConfig: need at least one outer iteration");
  }
  if (chains < 1) {
    throw DomainError("SagdConfig: need at least one chain");
  }
  if (!(gamma > 0.0)) {
    throw DomainError("SagdConfig: friction must be positive");
  }
  schedule.validate();
}

Vector approximate_gradient(const Vector& theta, const Objective& obj,
                            const Potential& pot, const InnerPhase& phase,
                            std::span<ChainState> chains,
                            std::span<RngStream> rngs, ThreadPool* pool) {
  require_same_size(chains.size(), rngs.size(), "approximate_gradient rngs");
  if (chains.empty()) {
    throw DomainError("approximate_gradient: need at least one chain");
  }
  const std::size_t p = obj.dim_theta;
  const LangevinConfig cfg{phase.gamma, phase.delta, phase.steps, phase.burn_in};
  cfg.validate();
  std::vector<Vector> sums(chains.size(), Vector(p, 0.0));

  auto run_one = [&](std::size_t c) {
    Vector scratch(p);
    Vector& sum = sums[c];
    try {
      chains[c] = run_chain(pot, cfg, std::move(chains[c]), rngs[c],
                            [&](const ChainState& s) {
                              obj.grad_f(theta, s.xi, scratch);
                              for (std::size_t i = 0; i < p; ++i) {
                                sum[i] += scratch[i];
                              }
                            });
    } catch (const DivergenceError& e) {
      throw DivergenceError("chain " + std::to_string(c) + ": " + e.what());
    }
  };
  if (pool != nullptr) {
    pool->parallel_for(chains.size(), run_one);
  } else {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      run_one(c);
    }
  }

  Vector g(p, 0.0);
  for (const Vector& sum : sums) {
    for (std::size_t i = 0; i < p; ++i) {
      g[i] += sum[i];
    }
  }
  const double weight =
      1.0 / (static_cast<double>(chains.size()) * static_cast<double>(phase.steps));
  for (double& v : g) {
    v *= weight;
  }
  return g;
}

SagdResult sagd_run(const Objective& obj, const Domain& dom,
                    const SagdConfig& cfg, const Vector& theta0,
                    const ChainState& init, std::uint64_t seed,
                    ThreadPool* pool, std::vector<ChainState> resume) {
  cfg.validate();
  dom.validate();
  require_same_size(theta0.size(), obj.dim_theta, "sagd_run theta0");
  const bool exact = cfg.use_exact_gradient;
  if (exact && !obj.exact_gradient) {
    throw DomainError("sagd_run: exact-gradient mode needs Objective::exact_gradient");
  }
  if (!exact) {
    if (!obj.grad_f) {
      throw DomainError("sagd_run: objective has no grad_f");
    }
    if (!obj.fixed_potential && !obj.potential_builder) {
      throw DomainError("sagd_run: objective has no sampling target");
    }
    init.validate();
    require_same_size(init.dim(), obj.dim_xi, "sagd_run initial chain");
  }

  SagdResult result;
  std::vector<ChainState> chains;
  if (!resume.empty()) {
    require_same_size(resume.size(), cfg.chains, "sagd_run resume states");
    chains = std::move(resume);
  } else if (!exact) {
    chains.assign(cfg.chains, init);
  }

  Vector theta = project(theta0, dom);
  Vector theta_sum(theta.size(), 0.0);
  AdamState adam;

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const ScheduleValues sv = schedule_at(cfg.schedule, t);
    Vector g;
    try {
      if (exact) {
        g = obj.exact_gradient(theta);
        require_same_size(g.size(), theta.size(), "exact_gradient");
      } else {
        const PotentialPtr pot = obj.potential_builder
                                     ? obj.potential_builder(theta)
                                     : obj.fixed_potential;
        if (!cfg.persistent) {
          chains.assign(cfg.chains, init);
        }
        const InnerPhase phase{cfg.gamma, sv.delta, sv.steps,
                               (t == 1 || !cfg.persistent) ? cfg.burn_in : 0};
        std::vector<RngStream> rngs;
        rngs.reserve(cfg.chains);
        for (std::size_t c = 0; c < cfg.chains; ++c) {
          rngs.emplace_back(seed, derive_stream(t, c));
        }
        g = approximate_gradient(theta, obj, *pot, phase, chains, rngs, pool);
      }
    } catch (const DivergenceError& e) {
      result.diverged = true;
      result.failure = "iteration " + std::to_string(t) + ": " + e.what();
      break;
    }

    Vector next;
    if (cfg.update == UpdateRule::adam) {
      next = adam_update(theta, g, adam, sv.alpha, cfg.adam, dom);
    } else {
      next.resize(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) {
        next[i] = theta[i] - sv.alpha * g[i];
      }
      next = project(next, dom);
    }
    if (!all_finite(next)) {
      result.diverged = true;
      result.failure = "iteration " + std::to_string(t) + ": non-finite parameter";
      break;
    }
    theta = std::move(next);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta_sum[i] += theta[i];
    }
    result.trajectory.push_back({t, theta, sv.delta, sv.steps, sv.alpha, norm(g)});
  }

  result.theta_last = theta;
  const std::size_t done = result.trajectory.size();
  if (cfg.return_average && done > 0) {
    result.theta_hat = theta_sum;
    for (double& v : result.theta_hat) {
      v /= static_cast<double>(done);
    }
  } else {
    result.theta_hat = theta;
  }
  result.chains = std::move(chains);
  return result;
}

}  // namespace sagd
