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

#include "sagd/core_math.hpp"

#include <array>
#include <numbers>
#include <string>

#include "sagd/error.hpp"

namespace sagd {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_lanczos(double s) {
  // valid for s >= 1/2
  const double z = s - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(series);
}

}  // namespace

double log_gamma(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(s));
  }
  if (s < 0.5) {
    // reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * s)) -
           log_gamma_lanczos(1.0 - s);
  }
  return log_gamma_lanczos(s);
}

double digamma(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("digamma: argument must be positive and finite, got " +
                      std::to_string(s));
  }
  double shift = 0.0;
  while (s < 10.0) {
    shift -= 1.0 / s;
    s += 1.0;
  }
  const double inv = 1.0 / s;
  const double inv2 = inv * inv;
  // asymptotic Bernoulli series; the first omitted term is below 1e-15 at s >= 10
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return shift + std::log(s) - 0.5 * inv - tail;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

bool all_finite(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace sagd
