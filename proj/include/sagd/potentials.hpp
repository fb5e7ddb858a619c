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
#include <memory>
#include <optional>
#include <span>

#include "sagd/core_math.hpp"
#include "sagd/mlp.hpp"

namespace sagd {

// Target density pi(xi) known through V(xi) = -log pi(xi) + C. Only the
// gradient drives the Langevin chain; values are used by quadrature and
// diagnostics. No shift is applied to make V nonnegative since additive
// constants never reach the chain. Implementations are immutable and may be
// evaluated concurrently.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> xi) const = 0;
  virtual void gradient(std::span<const double> xi,
                        std::span<double> out) const = 0;

  // Operator-norm bound nu on the Hessian, when known.
  virtual std::optional<double> smoothness() const { return std::nullopt; }

  Vector gradient(std::span<const double> xi) const;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// V(xi) = |xi - mean|^2 / 2, nu = 1.
PotentialPtr gaussian_potential(const Vector& mean, std::size_t dim);

// Posterior of the latent z in R^n for the gamma-latent model with
// x_i | z_i ~ Gamma(10 sigmoid(a + b z_i)) and z_i ~ N(0, 1):
//   V(z) = sum_i z_i^2/2 - (s_i - 1) ln x_i + ln Gamma(s_i).
PotentialPtr gamma_latent_posterior(const Vector& data, double a, double b);

// Posterior of u for x | u ~ N(h(u), noise_var), u ~ N(0, 1):
//   V(u) = (x - h(u))^2 / (2 noise_var) + u^2 / 2.
PotentialPtr generator_posterior(double x, const Mlp1D& net, double noise_var);

struct StabilityConstants {
  double nu = 0.0;     // Hessian bound
  double beta = 0.5;   // dissipativity, in (0, 1)
  double alpha = 1.0;  // dissipativity offset, > 0
  double gamma = 2.0;  // friction
};

// beta (2 - beta) / (8 (1 - beta))
double c_beta(double beta);

// Largest step size min{1/gamma, gamma/(2 nu), (D + 1 - sqrt(D^2 + 1))/gamma}
// with D = gamma^4 C_beta / nu^2, for which the chain keeps bounded moments.
double step_size_bound(const StabilityConstants& c);

}  // namespace sagd
