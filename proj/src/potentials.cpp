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

#include "sagd/potentials.hpp"

#include <string>
#include <utility>

#include "sagd/error.hpp"

namespace sagd {

Vector Potential::gradient(std::span<const double> xi) const {
  Vector out(dim());
  gradient(xi, out);
  return out;
}

namespace {

class GaussianPotential final : public Potential {
 public:
  explicit GaussianPotential(Vector mean) : mean_(std::move(mean)) {}

  std::size_t dim() const override { return mean_.size(); }

  double value(std::span<const double> xi) const override {
    const double r = distance(xi, mean_);
    return 0.5 * r * r;
  }

  void gradient(std::span<const double> xi,
                std::span<double> out) const override {
    require_same_size(xi.size(), mean_.size(), "gaussian_potential");
    require_same_size(out.size(), mean_.size(), "gaussian_potential");
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      out[i] = xi[i] - mean_[i];
    }
  }

  std::optional<double> smoothness() const override { return 1.0; }

 private:
  Vector mean_;
};

class GammaLatentPosterior final : public Potential {
 public:
  GammaLatentPosterior(const Vector& data, double a, double b) : a_(a), b_(b) {
    log_x_.reserve(data.size());
    for (double x : data) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("gamma_latent_posterior: observations must be positive");
      }
      log_x_.push_back(std::log(x));
    }
  }

  std::size_t dim() const override { return log_x_.size(); }

  double value(std::span<const double> z) const override {
    require_same_size(z.size(), log_x_.size(), "gamma_latent_posterior");
    double v = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double s = 10.0 * sigmoid(a_ + b_ * z[i]);
      v += 0.5 * z[i] * z[i] - (s - 1.0) * log_x_[i] + log_gamma(s);
    }
    return v;
  }

  void gradient(std::span<const double> z,
                std::span<double> out) const override {
    require_same_size(z.size(), log_x_.size(), "gamma_latent_posterior");
    require_same_size(out.size(), log_x_.size(), "gamma_latent_posterior");
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double eta = a_ + b_ * z[i];
      const double s = 10.0 * sigmoid(eta);
      out[i] = z[i] - 10.0 * b_ * sigmoid_derivative(eta) *
                          (log_x_[i] - digamma(s));
    }
  }

 private:
  Vector log_x_;
  double a_;
  double b_;
};

class GeneratorPosterior final : public Potential {
 public:
  GeneratorPosterior(double x, Mlp1D net, double noise_var)
      : x_(x), net_(std::move(net)), noise_var_(noise_var) {}

  std::size_t dim() const override { return 1; }

  double value(std::span<const double> u) const override {
    require_same_size(u.size(), 1, "generator_posterior");
    const double r = x_ - mlp_forward(net_, u[0]);
    return 0.5 * r * r / noise_var_ + 0.5 * u[0] * u[0];
  }

  void gradient(std::span<const double> u,
                std::span<double> out) const override {
    require_same_size(u.size(), 1, "generator_posterior");
    require_same_size(out.size(), 1, "generator_posterior");
    const double r = x_ - mlp_forward(net_, u[0]);
    out[0] = -r * mlp_input_derivative(net_, u[0]) / noise_var_ + u[0];
  }

 private:
  double x_;
  Mlp1D net_;
  double noise_var_;
};

}  // namespace

PotentialPtr gaussian_potential(const Vector& mean, std::size_t dim) {
  if (dim == 0) {
    throw DomainError("gaussian_potential: dim must be at least 1");
  }
  if (mean.empty()) {
    return std::make_shared<GaussianPotential>(Vector(dim, 0.0));
  }
  require_same_size(mean.size(), dim, "gaussian_potential mean");
  return std::make_shared<GaussianPotential>(mean);
}

PotentialPtr gamma_latent_posterior(const Vector& data, double a, double b) {
  if (data.empty()) {
    throw DomainError("gamma_latent_posterior: no observations");
  }
  return std::make_shared<GammaLatentPosterior>(data, a, b);
}

PotentialPtr generator_posterior(double x, const Mlp1D& net, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw DomainError("generator_posterior: noise variance must be positive");
  }
  net.validate();
  return std::make_shared<GeneratorPosterior>(x, net, noise_var);
}

double c_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("c_beta: beta must lie in (0, 1)");
  }
  return beta * (2.0 - beta) / (8.0 * (1.0 - beta));
}

double step_size_bound(const StabilityConstants& c) {
  if (!(c.nu > 0.0) || !(c.gamma > 0.0)) {
    throw DomainError("step_size_bound: nu and gamma must be positive");
  }
  const double cb = c_beta(c.beta);
  const double d = std::pow(c.gamma, 4) * cb / (c.nu * c.nu);
  // D + 1 - sqrt(D^2 + 1), rearranged to avoid cancellation at small D
  const double moment_bound =
      (d - d * d / (1.0 + std::sqrt(d * d + 1.0))) / c.gamma;
  return std::min({1.0 / c.gamma, c.gamma / (2.0 * c.nu), moment_bound});
}

}  // namespace sagd
