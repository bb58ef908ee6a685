// Small statistics toolbox: Gaussian tail, Wilson score intervals,
// Kolmogorov-Smirnov uniformity test.
#ifndef LATHOP_STATS_HPP
#define LATHOP_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lathop/common.hpp"

namespace lathop {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion; stays valid at zero
/// counts where the normal approximation collapses.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // the bound is exactly 0 (resp. 1) at empty (resp. full) counts
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

inline bool intervals_overlap(const Interval& a, const Interval& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

/// Two-sided KS statistic of `samples` against the uniform law on [lo, hi).
inline double ks_statistic_uniform(std::vector<double> samples, double lo, double hi) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = (samples[i] - lo) / (hi - lo);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

/// Asymptotic Kolmogorov critical value: reject at level alpha when
/// sqrt(N) * D exceeds this.
inline double ks_critical(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

inline bool ks_uniform_pass(const std::vector<double>& samples, double lo, double hi,
                            double alpha = 0.01) {
  const double d = ks_statistic_uniform(samples, lo, hi);
  return std::sqrt(static_cast<double>(samples.size())) * d <= ks_critical(alpha);
}

}  // namespace lathop

#endif  // LATHOP_STATS_HPP
