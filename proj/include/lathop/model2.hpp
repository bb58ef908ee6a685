// Model 2 pipeline: interference hits the destination, the source knows it.
//
// The source pre-cancels the quantized part of the scaled interference by
// shifting its codeword on the quantization lattice; the relay decodes and
// forwards the shifted codeword; at the destination the channel re-adds the
// interference, whose quantized part cancels the shift and whose residual is
// uniform quantization noise on the quant cell.
#ifndef LATHOP_MODEL2_HPP
#define LATHOP_MODEL2_HPP

#include "lathop/channel.hpp"
#include "lathop/common.hpp"
#include "lathop/lattice.hpp"
#include "lathop/model1.hpp"
#include "lathop/rng.hpp"
#include "lathop/trial.hpp"

namespace lathop {

template <typename Scalar = double>
struct Model2State {
  NestedChain<Scalar> chain;
  Scalar alpha1;       // relay MMSE coefficient
  Scalar alpha2;       // destination MMSE coefficient; also used by the source shift
  ArrayX<Scalar> u1;   // source dither, uniform on the coarse cell
  ArrayX<Scalar> uq;   // quantization dither, uniform on the quant cell
  ArrayX<Scalar> u2;   // relay dither, uniform on the coarse cell
  Digits w;            // message digits, radix k1
  ArrayX<Scalar> t;    // codeword: message-codebook point of w
};

/// Draws message and dithers from `rng` in fixed order (w, u1, uq, u2).
template <typename Scalar>
Model2State<Scalar> make_model2_state(const NestedChain<Scalar>& chain, Scalar s1, Scalar s2,
                                      const TrialOptions& opt, RandomStream& rng) {
  Model2State<Scalar> st{chain,
                         static_cast<Scalar>(opt.alpha1 ? *opt.alpha1 : s1 / (s1 + 1)),
                         static_cast<Scalar>(opt.alpha2 ? *opt.alpha2 : s2 / (s2 + 1)),
                         {},
                         {},
                         {},
                         Digits(chain.dim()),
                         {}};
  for (Eigen::Index i = 0; i < chain.dim(); ++i) {
    st.w[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(chain.k1())));
  }
  st.t = codebook_point(chain, Codebook::message, st.w);
  st.u1 = sample_dither(chain.coarse(), rng);
  st.uq = sample_dither(chain.quant(), rng);
  st.u2 = sample_dither(chain.coarse(), rng);
  return st;
}

/// Shifted codeword T = (t - Q_quant(alpha2*s + uq)) mod coarse, as quant
/// cosets.  Always a quant-codebook coset.
template <typename Scalar>
Digits m2_shifted_codeword(const Model2State<Scalar>& st, const ArrayX<Scalar>& s) {
  const ArrayXi64 g = quantized_offset_coords(st.chain, st.alpha2, s, st.uq);
  const int big_k = st.chain.radix(Codebook::quant);
  Digits shifted(st.w.size());
  for (Eigen::Index i = 0; i < st.w.size(); ++i) {
    const std::int64_t t_coord = digit_rep(st.w[i], st.chain.k1()) * st.chain.k2();
    shifted[i] = coset_digit(t_coord - g[i], big_k);
  }
  return shifted;
}

/// x1 = (T + u1) mod coarse.
template <typename Scalar>
ArrayX<Scalar> m2_encode_source(const Model2State<Scalar>& st, const ArrayX<Scalar>& s) {
  const ArrayX<Scalar> shifted =
      codebook_point(st.chain, Codebook::quant, m2_shifted_codeword(st, s));
  return mod_lattice(st.chain.coarse(), (shifted + st.u1).eval());
}

/// T_hat = quant cosets of Q_quant((alpha1 * y2 - u1) mod coarse).
template <typename Scalar, typename Derived>
Digits m2_relay_decode(const Model2State<Scalar>& st, const Eigen::ArrayBase<Derived>& y2) {
  const ArrayX<Scalar> y2p =
      mod_lattice(st.chain.coarse(), (st.alpha1 * y2.derived() - st.u1).eval());
  return decode_digits(st.chain, Codebook::quant, y2p);
}

/// x2 = (T_hat + u2) mod coarse.
template <typename Scalar>
ArrayX<Scalar> m2_relay_reencode(const NestedChain<Scalar>& chain, const Digits& t_hat,
                                 const ArrayX<Scalar>& u2) {
  return mod_lattice(chain.coarse(), (codebook_point(chain, Codebook::quant, t_hat) + u2).eval());
}

/// y3' = (alpha2 * y3 + uq - u2) mod coarse; decoded straight to the message
/// codebook: t_hat = fine cosets of Q_fine(y3').  The interference residual
/// (alpha2*s + uq) mod quant rides along as quantization noise.
template <typename Scalar, typename Derived>
Digits m2_destination_decode(const Model2State<Scalar>& st, const Eigen::ArrayBase<Derived>& y3) {
  const ArrayX<Scalar> y3p =
      mod_lattice(st.chain.coarse(), (st.alpha2 * y3.derived() + st.uq - st.u2).eval());
  return decode_digits(st.chain, Codebook::message, y3p);
}

/// One end-to-end Model 2 trial.
template <typename Scalar>
TrialOutcome run_model2_trial(const NestedChain<Scalar>& chain, const ChannelParams<Scalar>& cp,
                              const InterferenceSpec& ispec, const TrialOptions& opt,
                              RandomStream& rng, const ArrayX<Scalar>* shared_s = nullptr) {
  const Model2State<Scalar> st = make_model2_state(chain, cp.s1, cp.s2, opt, rng);
  const ArrayX<Scalar> s =
      shared_s ? *shared_s : gen_interference<Scalar>(ispec, chain.dim(), rng);

  const Digits shifted = m2_shifted_codeword(st, s);
  const ArrayX<Scalar> x1 = m2_encode_source(st, s);
  const ArrayX<Scalar> y2 = hop1(Model::m2, x1, s, cp, rng);
  const Digits t_hat_relay = m2_relay_decode(st, y2);

  TrialOutcome out;
  out.relay_error = (t_hat_relay != shifted).any();

  const ArrayX<Scalar> x2 = m2_relay_reencode(st.chain, t_hat_relay, st.u2);
  const ArrayX<Scalar> y3 = hop2(Model::m2, x2, s, cp, rng);
  const Digits decoded = m2_destination_decode(st, y3);

  out.hop2_error = (decoded != st.w).any();
  out.message_error = out.hop2_error;
  return out;
}

}  // namespace lathop

#endif  // LATHOP_MODEL2_HPP
