// Measurement utilities for scheme diagnostics.
#ifndef LATHOP_DIAGNOSTICS_HPP
#define LATHOP_DIAGNOSTICS_HPP

#include "lathop/common.hpp"
#include "lathop/lattice.hpp"
#include "lathop/rng.hpp"

namespace lathop {

/// Empirical per-dimension variance of the destination-side folded error
/// (alpha*(x2 + z3) + uq - u2 - t) mod coarse, for every alpha in `alphas`.
///
/// The same trial draws feed every grid point, so the profile's minimizer is
/// a low-noise estimate of the MMSE coefficient snr/(snr+1).
template <typename Scalar>
ArrayX<Scalar> mmse_variance_profile(const NestedChain<Scalar>& chain, Scalar snr,
                                     const ArrayX<Scalar>& alphas, int trials,
                                     std::uint64_t seed) {
  const Eigen::Index n = chain.dim();
  ArrayX<Scalar> sums = ArrayX<Scalar>::Zero(alphas.size());
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng = derive_stream(seed, static_cast<std::uint64_t>(trial));
    Digits w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(chain.k1())));
    }
    const ArrayX<Scalar> t = codebook_point(chain, Codebook::message, w);
    const ArrayX<Scalar> u2 = sample_dither(chain.coarse(), rng);
    const ArrayX<Scalar> uq = sample_dither(chain.quant(), rng);
    const ArrayX<Scalar> z3 = normal_array<Scalar>(rng, n, std::sqrt(Scalar(1) / snr));
    const ArrayX<Scalar> x2 = mod_lattice(chain.coarse(), (t + u2).eval());
    const ArrayX<Scalar> y3 = x2 + z3;
    for (Eigen::Index a = 0; a < alphas.size(); ++a) {
      const ArrayX<Scalar> err =
          mod_lattice(chain.coarse(), (alphas[a] * y3 + uq - u2 - t).eval());
      sums[a] += err.square().sum();
    }
  }
  return sums / (Scalar(trials) * Scalar(n));
}

}  // namespace lathop

#endif  // LATHOP_DIAGNOSTICS_HPP
