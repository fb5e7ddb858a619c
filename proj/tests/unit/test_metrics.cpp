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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sagd/metrics.hpp"
#include "sagd/rng.hpp"

using namespace sagd;

namespace {

double count_le(const Vector& s, double x) {
  double c = 0.0;
  for (double v : s) {
    c += v <= x ? 1.0 : 0.0;
  }
  return c / static_cast<double>(s.size());
}

// O(n^2) reference: both CDFs are step functions that change only at sample
// points, so the supremum is attained at one of them.
double brute_ks(const Vector& a, const Vector& b) {
  double best = 0.0;
  for (const Vector* s : {&a, &b}) {
    for (double x : *s) {
      best = std::max(best, std::abs(count_le(a, x) - count_le(b, x)));
    }
  }
  return best;
}

// Quantile coupling: W1 = int_0^1 |Qa(u) - Qb(u)| du over the merged
// breakpoints i/na and j/nb.
double brute_w1(Vector a, Vector b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double u = 0.0;
  double total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double next_a = static_cast<double>(i + 1) / na;
    const double next_b = static_cast<double>(j + 1) / nb;
    const double next = std::min(next_a, next_b);
    total += (next - u) * std::abs(a[i] - b[j]);
    u = next;
    if (next_a <= next) {
      ++i;
    }
    if (next_b <= next) {
      ++j;
    }
  }
  return total;
}

Vector random_sample(RngStream& rng, bool ties) {
  const std::size_t n = 1 + rng.below(10);
  Vector s(n);
  for (double& v : s) {
    v = ties ? static_cast<double>(rng.below(4)) : rng.normal();
  }
  return s;
}

}  // namespace

TEST_CASE("distance examples") {
  const Cdf1D a = Cdf1D::empirical({0.3, -1.0, 2.0});
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(wasserstein1(a, a) == 0.0);
  CHECK(ks_distance(Cdf1D::empirical({0.0}), Cdf1D::empirical({1.0})) == 1.0);
  CHECK(wasserstein1(Cdf1D::point_mass(0.0), Cdf1D::point_mass(1.0)) == 1.0);
  const Cdf1D pair = Cdf1D::empirical({0.0, 1.0});
  CHECK(ks_distance(pair, Cdf1D::point_mass(0.5)) == 0.5);
  CHECK(wasserstein1(pair, Cdf1D::point_mass(0.5)) == 0.5);
}

TEST_CASE("sample distances equal a brute-force evaluator") {
  RngStream rng(101);
  for (int i = 0; i < 1000; ++i) {
    const bool ties = i % 2 == 0;
    const Vector a = random_sample(rng, ties);
    const Vector b = random_sample(rng, ties);
    const Cdf1D ca = Cdf1D::empirical(a);
    const Cdf1D cb = Cdf1D::empirical(b);
    CHECK(std::abs(ks_distance(ca, cb) - brute_ks(a, b)) <= 1e-12);
    CHECK(std::abs(wasserstein1(ca, cb) - brute_w1(a, b)) <= 1e-12);
  }
}

TEST_CASE("metric axioms on small samples") {
  RngStream rng(102);
  for (int i = 0; i < 500; ++i) {
    const bool ties = i % 3 == 0;
    const Cdf1D a = Cdf1D::empirical(random_sample(rng, ties));
    const Cdf1D b = Cdf1D::empirical(random_sample(rng, ties));
    const Cdf1D c = Cdf1D::empirical(random_sample(rng, ties));
    for (auto metric : {ks_distance, wasserstein1}) {
      const double ab = metric(a, b);
      CHECK(ab >= 0.0);
      CHECK(std::abs(ab - metric(b, a)) <= 1e-12);
      CHECK(ab <= metric(a, c) + metric(c, b) + 1e-12);
    }
  }
  const Cdf1D x = Cdf1D::empirical({1.0, 2.0, 2.0});
  const Cdf1D y = Cdf1D::empirical({2.0, 1.0, 2.0});
  CHECK(ks_distance(x, y) == 0.0);
  CHECK(wasserstein1(x, y) == 0.0);
  CHECK(ks_distance(x, Cdf1D::empirical({1.0, 2.0})) > 0.0);
}

TEST_CASE("one-sample KS uses both sides of each order statistic") {
  const Vector s{-0.5, 0.1, 1.4, 2.0};
  const Cdf1D normal = Cdf1D::normal(0.0, 1.0);
  double expected = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal.cdf(s[i]);
    expected = std::max(expected, std::max(static_cast<double>(i + 1) / 4.0 - f,
                                           f - static_cast<double>(i) / 4.0));
  }
  CHECK(std::abs(ks_distance(Cdf1D::empirical(s), normal) - expected) < 1e-15);
}

TEST_CASE("sample against analytic law agrees with numerical integration") {
  RngStream rng(103);
  const std::vector<Cdf1D> laws{Cdf1D::normal(1.0, 0.5), Cdf1D::exponential(2.0),
                                Cdf1D::normal_mixture(0.4, 0.0, 0.5, 3.0, 0.5)};
  for (const Cdf1D& law : laws) {
    Vector s(7);
    for (double& v : s) {
      v = 4.0 * rng.uniform() - 1.0;
    }
    const Cdf1D emp = Cdf1D::empirical(s);
    // fine midpoint rule over a wide window
    const double lo = -12.0;
    const double hi = 40.0;
    const int cells = 2000000;
    const double h = (hi - lo) / cells;
    double total = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double x = lo + (i + 0.5) * h;
      total += std::abs(emp.cdf(x) - law.cdf(x)) * h;
    }
    CHECK(std::abs(wasserstein1(emp, law) - total) < 1e-5);
    CHECK(std::abs(wasserstein1(law, emp) - total) < 1e-5);
  }
}

TEST_CASE("analytic against analytic") {
  const Cdf1D a = Cdf1D::normal(0.0, 1.0);
  const Cdf1D b = Cdf1D::normal(0.7, 1.0);
  // location shift: W1 is the shift, KS is 2 Phi(shift / 2) - 1
  CHECK(std::abs(wasserstein1(a, b) - 0.7) < 1e-8);
  const double ks = 2.0 * a.cdf(0.35) - 1.0;
  CHECK(std::abs(ks_distance(a, b) - ks) < 1e-10);
  CHECK(ks_distance(a, a) == 0.0);
  CHECK(std::abs(wasserstein1(Cdf1D::exponential(2.0), Cdf1D::exponential(3.0)) - 1.0) < 1e-8);
}

TEST_CASE("large samples converge to the analytic law") {
  RngStream rng(104);
  Vector s(100000);
  for (double& v : s) {
    v = rng.exponential(2.0);
  }
  const Cdf1D emp = Cdf1D::empirical(s);
  const Cdf1D law = Cdf1D::exponential(2.0);
  CHECK(ks_distance(emp, law) < 0.01);
  CHECK(wasserstein1(emp, law) < 0.03);
  CHECK(std::abs(emp.mean() - 2.0) < 0.03);
}
