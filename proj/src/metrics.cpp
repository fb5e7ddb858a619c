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

#include "sagd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "sagd/error.hpp"

namespace sagd {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// int_{-inf}^x Phi((t - mean)/sd) dt
double normal_integrated(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return (x - mean) * normal_cdf(z) + sd * normal_pdf(z);
}

double normal_tail_width(double mass) {
  // Phi(-z) <= phi(z) / z for z > 0, so this z leaves less than `mass`
  return std::sqrt(2.0 * std::log(1.0 / mass)) + 1.0;
}

std::vector<double> merged_atoms(const Cdf1D& a, const Cdf1D& b) {
  std::vector<double> points;
  if (a.atomic()) {
    points.insert(points.end(), a.atoms().begin(), a.atoms().end());
  }
  if (b.atomic()) {
    points.insert(points.end(), b.atoms().begin(), b.atoms().end());
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  // split into panels first so narrow features are not skipped
  constexpr int kPanels = 64;
  double total = 0.0;
  const double w = (b - a) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + w * i;
    const double hi = lo + w;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = w / 6.0 * (flo + 4.0 * fmid + fhi);
    total += adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol / kPanels, 40);
  }
  return total;
}

// int_a^b |G(x) - c| dx for nondecreasing continuous G with closed-form
// integrated CDF.
double segment_gap(const Cdf1D& g, double a, double b, double c) {
  if (!(b > a)) {
    return 0.0;
  }
  const double ga = g.cdf(a) - c;
  const double gb = g.cdf(b) - c;
  auto mass = [&](double lo, double hi) {
    return g.integrated_cdf(hi) - g.integrated_cdf(lo);
  };
  double v = 0.0;
  if (ga >= 0.0) {
    v = mass(a, b) - c * (b - a);
  } else if (gb <= 0.0) {
    v = c * (b - a) - mass(a, b);
  } else {
    double lo = a;
    double hi = b;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) {
        break;
      }
      if (g.cdf(mid) < c) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double cross = 0.5 * (lo + hi);
    v = (c * (cross - a) - mass(a, cross)) + (mass(cross, b) - c * (b - cross));
  }
  return std::max(v, 0.0);
}

}  // namespace

Cdf1D Cdf1D::empirical(Vector sample) {
  if (sample.empty()) {
    throw DomainError("Cdf1D: empty sample");
  }
  if (!all_finite(sample)) {
    throw DomainError("Cdf1D: non-finite sample value");
  }
  Cdf1D d;
  d.kind_ = Kind::empirical;
  std::sort(sample.begin(), sample.end());
  d.atoms_ = std::move(sample);
  return d;
}

Cdf1D Cdf1D::point_mass(double at) {
  if (!std::isfinite(at)) {
    throw DomainError("Cdf1D: point mass location must be finite");
  }
  Cdf1D d;
  d.kind_ = Kind::point_mass;
  d.atoms_ = {at};
  return d;
}

Cdf1D Cdf1D::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) {
    throw DomainError("Cdf1D: normal needs sd > 0");
  }
  Cdf1D d;
  d.kind_ = Kind::normal;
  d.p1_ = mean;
  d.p2_ = sd;
  return d;
}

Cdf1D Cdf1D::exponential(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("Cdf1D: exponential needs mean > 0");
  }
  Cdf1D d;
  d.kind_ = Kind::exponential;
  d.p1_ = mean;
  return d;
}

Cdf1D Cdf1D::normal_mixture(double weight, double mean1, double sd1,
                            double mean2, double sd2) {
  if (!(weight >= 0.0 && weight <= 1.0) || !(sd1 > 0.0) || !(sd2 > 0.0)) {
    throw DomainError("Cdf1D: mixture needs weight in [0, 1] and sd > 0");
  }
  Cdf1D d;
  d.kind_ = Kind::normal_mixture;
  d.p1_ = weight;
  d.p2_ = mean1;
  d.p3_ = sd1;
  d.p4_ = mean2;
  d.p5_ = sd2;
  return d;
}

double Cdf1D::cdf(double x) const {
  switch (kind_) {
    case Kind::empirical:
    case Kind::point_mass: {
      const auto count = std::upper_bound(atoms_.begin(), atoms_.end(), x) - atoms_.begin();
      return static_cast<double>(count) / static_cast<double>(atoms_.size());
    }
    case Kind::normal:
      return normal_cdf((x - p1_) / p2_);
    case Kind::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-x / p1_);
    case Kind::normal_mixture:
      return p1_ * normal_cdf((x - p2_) / p3_) +
             (1.0 - p1_) * normal_cdf((x - p4_) / p5_);
  }
  return 0.0;
}

double Cdf1D::cdf_left(double x) const {
  if (atomic()) {
    const auto count = std::lower_bound(atoms_.begin(), atoms_.end(), x) - atoms_.begin();
    return static_cast<double>(count) / static_cast<double>(atoms_.size());
  }
  return cdf(x);
}

double Cdf1D::mean() const {
  switch (kind_) {
    case Kind::empirical:
    case Kind::point_mass:
      return std::accumulate(atoms_.begin(), atoms_.end(), 0.0) /
             static_cast<double>(atoms_.size());
    case Kind::normal:
    case Kind::exponential:
      return p1_;
    case Kind::normal_mixture:
      return p1_ * p2_ + (1.0 - p1_) * p4_;
  }
  return 0.0;
}

double Cdf1D::integrated_cdf(double x) const {
  switch (kind_) {
    case Kind::empirical:
    case Kind::point_mass: {
      double acc = 0.0;
      for (double a : atoms_) {
        if (a > x) {
          break;
        }
        acc += x - a;
      }
      return acc / static_cast<double>(atoms_.size());
    }
    case Kind::normal:
      return normal_integrated(x, p1_, p2_);
    case Kind::exponential:
      return x <= 0.0 ? 0.0 : x + p1_ * std::expm1(-x / p1_);
    case Kind::normal_mixture:
      return p1_ * normal_integrated(x, p2_, p3_) +
             (1.0 - p1_) * normal_integrated(x, p4_, p5_);
  }
  return 0.0;
}

std::pair<double, double> Cdf1D::support(double mass) const {
  const double z = normal_tail_width(mass);
  switch (kind_) {
    case Kind::empirical:
    case Kind::point_mass:
      return {atoms_.front(), atoms_.back()};
    case Kind::normal:
      return {p1_ - z * p2_, p1_ + z * p2_};
    case Kind::exponential:
      return {0.0, p1_ * std::log(1.0 / mass)};
    case Kind::normal_mixture:
      return {std::min(p2_ - z * p3_, p4_ - z * p5_),
              std::max(p2_ + z * p3_, p4_ + z * p5_)};
  }
  return {0.0, 0.0};
}

double ks_distance(const Cdf1D& a, const Cdf1D& b) {
  if (a.atomic() || b.atomic()) {
    double best = 0.0;
    for (double x : merged_atoms(a, b)) {
      best = std::max(best, std::abs(a.cdf(x) - b.cdf(x)));
      best = std::max(best, std::abs(a.cdf_left(x) - b.cdf_left(x)));
    }
    return best;
  }
  // both continuous
  const auto [lo_a, hi_a] = a.support(1e-12);
  const auto [lo_b, hi_b] = b.support(1e-12);
  const double lo = std::min(lo_a, lo_b);
  const double hi = std::max(hi_a, hi_b);
  auto gap = [&](double x) { return std::abs(a.cdf(x) - b.cdf(x)); };
  constexpr int kGrid = 4000;
  const double h = (hi - lo) / kGrid;
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = gap(lo + h * i);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // golden-section refinement around the best grid point
  double l = lo + h * (best_i - 1);
  double r = lo + h * (best_i + 1);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = r - phi * (r - l);
    const double m2 = l + phi * (r - l);
    if (gap(m1) < gap(m2)) {
      l = m1;
    } else {
      r = m2;
    }
  }
  return std::max(best, gap(0.5 * (l + r)));
}

double wasserstein1(const Cdf1D& a, const Cdf1D& b) {
  if (a.atomic() && b.atomic()) {
    const std::vector<double> points = merged_atoms(a, b);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
      total += std::abs(a.cdf(points[j]) - b.cdf(points[j])) *
               (points[j + 1] - points[j]);
    }
    return total;
  }
  if (a.atomic() || b.atomic()) {
    const Cdf1D& steps = a.atomic() ? a : b;
    const Cdf1D& smooth = a.atomic() ? b : a;
    const std::vector<double> points = merged_atoms(steps, steps);
    // left of the first atom the step CDF is 0, right of the last it is 1
    double total = smooth.integrated_cdf(points.front());
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
      total += segment_gap(smooth, points[j], points[j + 1], steps.cdf(points[j]));
    }
    const double last = points.back();
    total += std::max(0.0, smooth.mean() - last + smooth.integrated_cdf(last));
    return total;
  }
  const auto [lo_a, hi_a] = a.support(1e-12);
  const auto [lo_b, hi_b] = b.support(1e-12);
  return integrate_adaptive(
      [&](double x) { return std::abs(a.cdf(x) - b.cdf(x)); },
      std::min(lo_a, lo_b), std::max(hi_a, hi_b), 1e-10);
}

}  // namespace sagd
