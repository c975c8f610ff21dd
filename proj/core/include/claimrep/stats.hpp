#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace claimrep {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty list");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Sample standard deviation (k-1 denominator).
inline double sample_sd(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_sd needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

// Quantile with linear interpolation between order statistics (the R type-7
// rule). `sorted` must be ascending and non-empty.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty list");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, q);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Two-sided p-value for a Wald z statistic.
inline double wald_p_value(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace claimrep
