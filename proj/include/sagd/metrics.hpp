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
#include <utility>

#include "sagd/core_math.hpp"

namespace sagd {

// One-dimensional distribution described by its CDF: an empirical sample,
// a point mass, or one of the analytic families used as true latent laws.
class Cdf1D {
 public:
  enum class Kind { empirical, point_mass, normal, exponential, normal_mixture };

  static Cdf1D empirical(Vector sample);
  static Cdf1D point_mass(double at);
  static Cdf1D normal(double mean, double sd);
  static Cdf1D exponential(double mean);
  // weight * N(mean1, sd1^2) + (1 - weight) * N(mean2, sd2^2)
  static Cdf1D normal_mixture(double weight, double mean1, double sd1,
                              double mean2, double sd2);

  Kind kind() const { return kind_; }

  // Atomic laws (empirical, point mass) are step functions.
  bool atomic() const {
    return kind_ == Kind::empirical || kind_ == Kind::point_mass;
  }

  // Sorted support points of an atomic law.
  const Vector& atoms() const { return atoms_; }

  double cdf(double x) const;
  // lim_{y -> x-} F(y)
  double cdf_left(double x) const;
  double mean() const;
  // int_{-inf}^x F(t) dt
  double integrated_cdf(double x) const;
  // Interval outside of which each tail holds less than `mass`.
  std::pair<double, double> support(double mass) const;

 private:
  Kind kind_ = Kind::empirical;
  Vector atoms_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  double p3_ = 0.0;
  double p4_ = 0.0;
  double p5_ = 0.0;
};

// sup_x |F_a(x) - F_b(x)|. Exact (both one-sided limits at every atom) when
// either side is atomic; grid search plus golden-section refinement when
// both are analytic.
double ks_distance(const Cdf1D& a, const Cdf1D& b);

// int |F_a(x) - F_b(x)| dx. Exact when either side is atomic (the analytic
// families have closed-form integrated CDFs); adaptive Simpson over the
// region holding all but 1e-12 of each tail when both are analytic.
double wasserstein1(const Cdf1D& a, const Cdf1D& b);

}  // namespace sagd
