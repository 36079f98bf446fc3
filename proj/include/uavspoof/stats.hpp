#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "uavspoof/common.hpp"

namespace uavspoof {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, divisor n - 1
  double skewness = 0.0;  // g1 = m3 / m2^(3/2)
  double kurtosis = 0.0;  // excess, g2 = m4 / m2^2 - 3
};

/// Mean, variance, skewness and excess kurtosis in a single streaming pass
/// (Terriberry's update of the central moment sums). A constant series has
/// skewness and kurtosis defined as 0.
inline Moments mvsk(std::span<const double> xs) {
  if (xs.size() < 2) throw Error("mvsk needs at least 2 values");
  double n = 0.0, mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean += delta_n;
    m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
  }
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi || m2 <= 0.0) return {xs.front(), 0.0, 0.0, 0.0};
  const double c2 = m2 / n, c3 = m3 / n, c4 = m4 / n;
  return {mean, m2 / (n - 1.0), c3 / std::pow(c2, 1.5), c4 / (c2 * c2) - 3.0};
}

/// Five-number summary.
struct Quartiles {
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
};

/// Percentile of an ascending-sorted sample, linear interpolation between
/// closest ranks: h = (n - 1) p.
inline double sorted_percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("percentile of empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline Quartiles box(std::span<const double> xs) {
  if (xs.empty()) throw Error("box needs at least 1 value");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  return {s.front(), sorted_percentile(s, 0.25), sorted_percentile(s, 0.5), sorted_percentile(s, 0.75),
          s.back()};
}

/// Order-1 Wasserstein distance between two equal-size empirical
/// distributions: mean absolute difference of the sorted samples.
inline double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("wasserstein_1d of empty sample");
  if (a.size() != b.size())
    throw Error("wasserstein_1d length mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) acc += std::abs(sa[i] - sb[i]);
  return acc / static_cast<double>(sa.size());
}

}  // namespace uavspoof
