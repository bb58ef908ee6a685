// Numeric verification of the scheme derivation chains.
//
// Each helper builds one random instance, runs the real pipeline expression
// on one side, the term-by-term decomposition on the other, and returns the
// largest componentwise gap after folding the difference back into the
// coarse cell.  Exact algebra makes these residuals pure floating-point
// noise, a few ulps of the largest magnitude involved.
#ifndef LATHOP_IDENTITIES_HPP
#define LATHOP_IDENTITIES_HPP

#include <algorithm>

#include "lathop/channel.hpp"
#include "lathop/common.hpp"
#include "lathop/lattice.hpp"
#include "lathop/model1.hpp"
#include "lathop/model2.hpp"
#include "lathop/rng.hpp"

namespace lathop {

/// Model 1 relay chain:
/// (a1*y2 + uq - u1) mod L == (t + Qq(a1*s + uq) + ((a1*s + uq) mod Lq)
///                              - (1-a1)*x1 + a1*z2) mod L.
template <typename Scalar>
Scalar m1_relay_identity_residual(const NestedChain<Scalar>& chain, Scalar s1, Scalar s2,
                                  Scalar alpha1, const ArrayX<Scalar>& s, bool with_noise,
                                  RandomStream& rng) {
  TrialOptions opt;
  opt.alpha1 = static_cast<double>(alpha1);
  const Model1State<Scalar> st = make_model1_state(chain, s1, s2, opt, rng);
  const ArrayX<Scalar> z2 = with_noise
                                ? normal_array<Scalar>(rng, chain.dim(), std::sqrt(Scalar(1) / s1))
                                : ArrayX<Scalar>::Zero(chain.dim()).eval();
  const ArrayX<Scalar> x1 = m1_encode_source(st);
  const ArrayX<Scalar> y2 = x1 + s + z2;
  const ArrayX<Scalar> lhs = m1_relay_scale(st, y2);

  const ArrayX<Scalar> scaled = alpha1 * s + st.uq;
  const ArrayX<Scalar> quantized = nearest_point(chain.quant(), scaled);
  const ArrayX<Scalar> residual = mod_lattice(chain.quant(), scaled);
  const ArrayX<Scalar> rhs = mod_lattice(
      chain.coarse(),
      (st.t + quantized + residual - (Scalar(1) - alpha1) * x1 + alpha1 * z2).eval());
  return mod_lattice(chain.coarse(), (lhs - rhs).eval()).abs().maxCoeff();
}

/// Model 2 relay chain:
/// (a1*y2 - u1) mod L == (T - (1-a1)*x1 + a1*z2) mod L.
template <typename Scalar>
Scalar m2_relay_identity_residual(const NestedChain<Scalar>& chain, Scalar s1, Scalar s2,
                                  Scalar alpha1, const ArrayX<Scalar>& s, bool with_noise,
                                  RandomStream& rng) {
  TrialOptions opt;
  opt.alpha1 = static_cast<double>(alpha1);
  const Model2State<Scalar> st = make_model2_state(chain, s1, s2, opt, rng);
  const ArrayX<Scalar> z2 = with_noise
                                ? normal_array<Scalar>(rng, chain.dim(), std::sqrt(Scalar(1) / s1))
                                : ArrayX<Scalar>::Zero(chain.dim()).eval();
  const ArrayX<Scalar> x1 = m2_encode_source(st, s);
  const ArrayX<Scalar> y2 = x1 + z2;
  const ArrayX<Scalar> lhs =
      mod_lattice(chain.coarse(), (st.alpha1 * y2 - st.u1).eval());

  const ArrayX<Scalar> shifted =
      codebook_point(chain, Codebook::quant, m2_shifted_codeword(st, s));
  const ArrayX<Scalar> rhs = mod_lattice(
      chain.coarse(), (shifted - (Scalar(1) - alpha1) * x1 + alpha1 * z2).eval());
  return mod_lattice(chain.coarse(), (lhs - rhs).eval()).abs().maxCoeff();
}

/// Model 2 destination chain, relay decoding taken as correct:
/// (a2*y3 + uq - u2) mod L == (t + ((a2*s + uq) mod Lq)
///                              - (1-a2)*x2 + a2*z3) mod L.
template <typename Scalar>
Scalar m2_destination_identity_residual(const NestedChain<Scalar>& chain, Scalar s1, Scalar s2,
                                        Scalar alpha2, const ArrayX<Scalar>& s, bool with_noise,
                                        RandomStream& rng) {
  TrialOptions opt;
  opt.alpha2 = static_cast<double>(alpha2);
  const Model2State<Scalar> st = make_model2_state(chain, s1, s2, opt, rng);
  const ArrayX<Scalar> z3 = with_noise
                                ? normal_array<Scalar>(rng, chain.dim(), std::sqrt(Scalar(1) / s2))
                                : ArrayX<Scalar>::Zero(chain.dim()).eval();
  const Digits shifted = m2_shifted_codeword(st, s);
  const ArrayX<Scalar> x2 = m2_relay_reencode(chain, shifted, st.u2);
  const ArrayX<Scalar> y3 = x2 + s + z3;
  const ArrayX<Scalar> lhs =
      mod_lattice(chain.coarse(), (st.alpha2 * y3 + st.uq - st.u2).eval());

  const ArrayX<Scalar> residual = mod_lattice(chain.quant(), (alpha2 * s + st.uq).eval());
  const ArrayX<Scalar> rhs = mod_lattice(
      chain.coarse(), (st.t + residual - (Scalar(1) - alpha2) * x2 + alpha2 * z3).eval());
  return mod_lattice(chain.coarse(), (lhs - rhs).eval()).abs().maxCoeff();
}

/// Tolerance for the identity residuals: 1e-9 relative to the dominant
/// magnitude flowing through the chain.
template <typename Scalar>
Scalar identity_tolerance(const ArrayX<Scalar>& s) {
  return Scalar(1e-9) * std::max(Scalar(1), s.abs().maxCoeff());
}

}  // namespace lathop

#endif  // LATHOP_IDENTITIES_HPP
