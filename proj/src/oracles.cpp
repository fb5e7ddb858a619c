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

#include "sagd/oracles.hpp"

namespace sagd {

void QuadratureSpec::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("quadrature: interval must satisfy lo < hi");
  }
  if (!(tolerance > 0.0)) {
    throw DomainError("quadrature: tolerance must be positive");
  }
  if (initial_panels < 1 || max_doublings < 1) {
    throw DomainError("quadrature: need at least one panel and one doubling");
  }
}

double simpson_adaptive(const std::function<double(double)>& f,
                        const QuadratureSpec& spec) {
  return simpson_adaptive_n<1>(
      [&](double x) { return std::array<double, 1>{f(x)}; }, spec)[0];
}

Vector finite_diff_grad(const std::function<double(const Vector&)>& f,
                        const Vector& x, double h) {
  if (!(h > 0.0)) {
    throw DomainError("finite_diff_grad: step must be positive");
  }
  Vector grad(x.size());
  Vector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

McEstimate mc_expectation(const std::function<double(RngStream&)>& sampler,
                          const std::function<double(double)>& phi,
                          std::size_t m, RngStream& rng) {
  if (m < 2) {
    throw DomainError("mc_expectation: need at least two draws");
  }
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double v = phi(sampler(rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double variance = m2 / static_cast<double>(m - 1);
  return {mean, std::sqrt(variance / static_cast<double>(m))};
}

}  // namespace sagd
