// Reproducible random streams for Monte Carlo trials.
//
// Every random draw in a run comes from a RandomStream derived from the run
// seed and a stream index (the trial number).  mt19937_64 and the sampling
// transforms below are fully specified, so a (config, seed) pair determines
// every draw bit-for-bit, independent of worker count or platform.
#ifndef LATHOP_RNG_HPP
#define LATHOP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "lathop/common.hpp"

namespace lathop {

/// SplitMix64 finalizer; the mixing primitive for stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {0, 1, ..., bound-1}, unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via Box-Muller (pair cached per stream).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;          // [0,1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stream for trial `index` of the run with the given seed.  Seed and index
/// are mixed independently so nearby (seed, index) pairs give unrelated
/// streams.
inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ull * (index + 1))));
}

template <typename Scalar = double>
ArrayX<Scalar> normal_array(RandomStream& rng, Eigen::Index n, Scalar stddev) {
  ArrayX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = stddev * static_cast<Scalar>(rng.normal());
  }
  return out;
}

template <typename Scalar = double>
ArrayX<Scalar> uniform_array(RandomStream& rng, Eigen::Index n, Scalar lo, Scalar hi) {
  ArrayX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = static_cast<Scalar>(rng.uniform(static_cast<double>(lo), static_cast<double>(hi)));
  }
  return out;
}

}  // namespace lathop

#endif  // LATHOP_RNG_HPP
