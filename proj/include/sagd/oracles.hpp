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

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "sagd/core_math.hpp"
#include "sagd/error.hpp"
#include "sagd/rng.hpp"

namespace sagd {

struct QuadratureSpec {
  double lo = -8.0;
  double hi = 8.0;
  int initial_panels = 16;
  double tolerance = 1e-10;
  int max_doublings = 20;

  void validate() const;
};

// Composite Simpson on [lo, hi] for a vector-valued integrand returning
// std::array<double, N>. The panel count doubles (reusing every previous
// node) until all components of two successive estimates differ by less than
// spec.tolerance. Throws QuadratureError once max_doublings is exhausted.
template <std::size_t N, typename F>
std::array<double, N> simpson_adaptive_n(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  using Values = std::array<double, N>;
  // intervals = 2 * panels
  std::size_t intervals = 2 * static_cast<std::size_t>(spec.initial_panels);
  const double width = spec.hi - spec.lo;

  Values ends{};
  {
    const Values a = f(spec.lo);
    const Values b = f(spec.hi);
    for (std::size_t c = 0; c < N; ++c) {
      ends[c] = a[c] + b[c];
    }
  }
  // Interior nodes split into those at even and odd offsets.
  Values even{};
  Values odd{};
  double h = width / static_cast<double>(intervals);
  for (std::size_t i = 1; i < intervals; ++i) {
    const Values v = f(spec.lo + h * static_cast<double>(i));
    Values& target = (i % 2 == 0) ? even : odd;
    for (std::size_t c = 0; c < N; ++c) {
      target[c] += v[c];
    }
  }
  auto combine = [&](double step) {
    Values s{};
    for (std::size_t c = 0; c < N; ++c) {
      s[c] = step / 3.0 * (ends[c] + 4.0 * odd[c] + 2.0 * even[c]);
    }
    return s;
  };
  Values previous = combine(h);
  for (int doubling = 0; doubling < spec.max_doublings; ++doubling) {
    for (std::size_t c = 0; c < N; ++c) {
      even[c] += odd[c];
      odd[c] = 0.0;
    }
    intervals *= 2;
    h = width / static_cast<double>(intervals);
    for (std::size_t i = 1; i < intervals; i += 2) {
      const Values v = f(spec.lo + h * static_cast<double>(i));
      for (std::size_t c = 0; c < N; ++c) {
        odd[c] += v[c];
      }
    }
    const Values current = combine(h);
    bool settled = true;
    for (std::size_t c = 0; c < N; ++c) {
      if (!std::isfinite(current[c])) {
        throw QuadratureError("simpson_adaptive: non-finite integrand");
      }
      if (!(std::abs(current[c] - previous[c]) < spec.tolerance)) {
        settled = false;
      }
    }
    if (settled) {
      return current;
    }
    previous = current;
  }
  throw QuadratureError("simpson_adaptive: no convergence after " +
                        std::to_string(spec.max_doublings) + " doublings");
}

double simpson_adaptive(const std::function<double(double)>& f,
                        const QuadratureSpec& spec);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h per coordinate.
Vector finite_diff_grad(const std::function<double(const Vector&)>& f,
                        const Vector& x, double h);

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Plain Monte Carlo: draws m values from `sampler`, averages phi over them.
McEstimate mc_expectation(const std::function<double(RngStream&)>& sampler,
                          const std::function<double(double)>& phi,
                          std::size_t m, RngStream& rng);

}  // namespace sagd
