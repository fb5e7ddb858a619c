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
#include <span>

#include "sagd/core_math.hpp"

namespace sagd {

// Scalar-in, scalar-out network h(u) = sum_j w2_j softplus(w1_j u + b1_j) + b2
// with one softplus hidden layer of width H.
struct Mlp1D {
  Vector w1;
  Vector b1;
  Vector w2;
  double b2 = 0.0;

  // All-zero network of the given hidden width.
  static Mlp1D zeros(std::size_t hidden);

  std::size_t hidden() const { return w1.size(); }

  // 3H + 1, flattened in the order w1, b1, w2, b2.
  std::size_t parameter_count() const { return 3 * hidden() + 1; }
  Vector parameters() const;
  void set_parameters(std::span<const double> flat);

  void validate() const;
};

struct MlpGrads {
  Vector d_theta;  // same layout as Mlp1D::parameters()
  double d_u = 0.0;
};

double mlp_forward(const Mlp1D& net, double u);

// dh/du only; cheaper than mlp_grads when parameters are not needed.
double mlp_input_derivative(const Mlp1D& net, double u);

MlpGrads mlp_grads(const Mlp1D& net, double u);

}  // namespace sagd
