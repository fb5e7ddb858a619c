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

#include "sagd/mlp.hpp"

#include "sagd/error.hpp"

namespace sagd {

Mlp1D Mlp1D::zeros(std::size_t hidden) {
  Mlp1D net;
  net.w1.assign(hidden, 0.0);
  net.b1.assign(hidden, 0.0);
  net.w2.assign(hidden, 0.0);
  return net;
}

Vector Mlp1D::parameters() const {
  Vector flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), w1.begin(), w1.end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  return flat;
}

void Mlp1D::set_parameters(std::span<const double> flat) {
  require_same_size(flat.size(), parameter_count(), "Mlp1D::set_parameters");
  const std::size_t h = hidden();
  for (std::size_t j = 0; j < h; ++j) {
    w1[j] = flat[j];
    b1[j] = flat[h + j];
    w2[j] = flat[2 * h + j];
  }
  b2 = flat[3 * h];
}

void Mlp1D::validate() const {
  if (w1.empty()) {
    throw DomainError("Mlp1D: hidden width must be at least 1");
  }
  require_same_size(b1.size(), w1.size(), "Mlp1D b1");
  require_same_size(w2.size(), w1.size(), "Mlp1D w2");
  if (!all_finite(w1) || !all_finite(b1) || !all_finite(w2) ||
      !std::isfinite(b2)) {
    throw DivergenceError("Mlp1D: non-finite parameter");
  }
}

double mlp_forward(const Mlp1D& net, double u) {
  double h = net.b2;
  for (std::size_t j = 0; j < net.hidden(); ++j) {
    h += net.w2[j] * softplus(net.w1[j] * u + net.b1[j]);
  }
  return h;
}

double mlp_input_derivative(const Mlp1D& net, double u) {
  double d = 0.0;
  for (std::size_t j = 0; j < net.hidden(); ++j) {
    d += net.w2[j] * sigmoid(net.w1[j] * u + net.b1[j]) * net.w1[j];
  }
  return d;
}

MlpGrads mlp_grads(const Mlp1D& net, double u) {
  const std::size_t h = net.hidden();
  MlpGrads g;
  g.d_theta.assign(net.parameter_count(), 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    const double pre = net.w1[j] * u + net.b1[j];
    const double gate = sigmoid(pre);  // softplus'
    g.d_theta[j] = net.w2[j] * gate * u;
    g.d_theta[h + j] = net.w2[j] * gate;
    g.d_theta[2 * h + j] = softplus(pre);
    g.d_u += net.w2[j] * gate * net.w1[j];
  }
  g.d_theta[3 * h] = 1.0;
  return g;
}

}  // namespace sagd
