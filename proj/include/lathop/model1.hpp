// Model 1 pipeline: interference hits the relay, the destination knows it.
//
// The source sends a dithered fine-lattice codeword.  The relay MMSE-scales
// its observation and list-decodes to the quantization lattice: the list is
// the set of quantization points inside a fine-cell-sized window around the
// processed signal, and only the window's index is forwarded over the second
// hop.  The destination rebuilds the window from the index, subtracts the
// quantized interference (it knows S), and keeps the single fine-lattice
// member of the list.
#ifndef LATHOP_MODEL1_HPP
#define LATHOP_MODEL1_HPP

#include <vector>

#include "lathop/channel.hpp"
#include "lathop/common.hpp"
#include "lathop/lattice.hpp"
#include "lathop/rng.hpp"
#include "lathop/trial.hpp"

namespace lathop {

template <typename Scalar = double>
struct Model1State {
  NestedChain<Scalar> chain;
  Scalar alpha1;       // relay MMSE coefficient
  Scalar alpha2;       // destination MMSE coefficient (hop-2 index decode)
  ArrayX<Scalar> u1;   // source dither, uniform on the coarse cell
  ArrayX<Scalar> uq;   // quantization dither, uniform on the quant cell
  ArrayX<Scalar> u2;   // relay dither, uniform on the coarse cell
  Digits w;            // message digits, radix k1
  ArrayX<Scalar> t;    // codeword: message-codebook point of w
};

/// Draws message and dithers from `rng` in fixed order (w, u1, uq, u2).
template <typename Scalar>
Model1State<Scalar> make_model1_state(const NestedChain<Scalar>& chain, Scalar s1, Scalar s2,
                                      const TrialOptions& opt, RandomStream& rng) {
  Model1State<Scalar> st{chain,
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

/// x1 = (t + u1) mod coarse.
template <typename Scalar>
ArrayX<Scalar> m1_encode_source(const Model1State<Scalar>& st) {
  return mod_lattice(st.chain.coarse(), (st.t + st.u1).eval());
}

/// y2' = (alpha1 * y2 + uq - u1) mod coarse.
template <typename Scalar, typename Derived>
ArrayX<Scalar> m1_relay_scale(const Model1State<Scalar>& st, const Eigen::ArrayBase<Derived>& y2) {
  return mod_lattice(st.chain.coarse(), (st.alpha1 * y2.derived() + st.uq - st.u1).eval());
}

/// Integer quant-lattice coordinates of Q_quant(alpha * s + uq); the
/// quantized interference offset both schemes cancel.
template <typename Scalar>
ArrayXi64 quantized_offset_coords(const NestedChain<Scalar>& chain, Scalar alpha,
                                  const ArrayX<Scalar>& s, const ArrayX<Scalar>& uq) {
  return nearest_coords(chain.quant(), (alpha * s + uq).eval());
}

/// Quant-coset digits of the effective signal the relay must capture:
/// v = (t + Q_quant(alpha1*s + uq)) mod coarse.  Simulator-side ground truth.
template <typename Scalar>
Digits m1_quantized_signal(const Model1State<Scalar>& st, const ArrayX<Scalar>& s) {
  const ArrayXi64 g = quantized_offset_coords(st.chain, st.alpha1, s, st.uq);
  const int big_k = st.chain.radix(Codebook::quant);
  Digits v(st.w.size());
  for (Eigen::Index i = 0; i < st.w.size(); ++i) {
    const std::int64_t t_coord = digit_rep(st.w[i], st.chain.k1()) * st.chain.k2();
    v[i] = coset_digit(t_coord + g[i], big_k);
  }
  return v;
}

/// List index: quant-coset digits of the low corner of the fine-cell window
/// around y2'.  There are (k1 k2)^n possible indices, one per quant coset.
template <typename Scalar, typename Derived>
Digits m1_relay_index(const Model1State<Scalar>& st, const Eigen::ArrayBase<Derived>& y2p) {
  return region_index(st.chain, y2p);
}

template <typename Scalar = double>
struct Model1List {
  Digits index;                 // window low-corner cosets, radix k1*k2
  std::vector<Digits> members;  // the k2^n list cosets
};

/// Index plus the explicit k2^n-member list.
template <typename Scalar, typename Derived>
Model1List<Scalar> m1_relay_list(const Model1State<Scalar>& st,
                                 const Eigen::ArrayBase<Derived>& y2p) {
  Model1List<Scalar> out;
  out.index = m1_relay_index(st, y2p);
  out.members = list_members(st.chain, out.index);
  return out;
}

/// Does the window with low corner `index` contain the quant coset `v`?
template <typename Scalar>
bool m1_window_contains(const NestedChain<Scalar>& chain, const Digits& index, const Digits& v) {
  const int big_k = chain.radix(Codebook::quant);
  for (Eigen::Index i = 0; i < index.size(); ++i) {
    if (coset_digit(v[i] - index[i], big_k) >= chain.k2()) return false;
  }
  return true;
}

/// x2 = (quant-codebook point of u + u2) mod coarse: the index is forwarded
/// with a nested (coarse, quant) lattice code at rate Rq.
template <typename Scalar>
ArrayX<Scalar> m1_hop2_encode(const Model1State<Scalar>& st, const Digits& u) {
  return mod_lattice(st.chain.coarse(),
                     (codebook_point(st.chain, Codebook::quant, u) + st.u2).eval());
}

/// u_hat = quant cosets of Q_quant((alpha2 * y3 - u2) mod coarse).
template <typename Scalar, typename Derived>
Digits m1_hop2_decode(const Model1State<Scalar>& st, const Eigen::ArrayBase<Derived>& y3) {
  const ArrayX<Scalar> y3p = mod_lattice(st.chain.coarse(), (st.alpha2 * y3.derived() - st.u2).eval());
  return decode_digits(st.chain, Codebook::quant, y3p);
}

template <typename Scalar = double>
struct ResolveResult {
  bool unique = false;
  int survivors = 0;
  Digits message;  // valid when unique
};

/// Resolution over an explicit list: subtract the quantized interference
/// from every member and keep those landing on the fine lattice.  Exactly
/// one survivor yields the message; zero or several is an ambiguity.
template <typename Scalar>
ResolveResult<Scalar> m1_resolve_list(const NestedChain<Scalar>& chain, Scalar alpha1,
                                      const ArrayX<Scalar>& uq, const std::vector<Digits>& members,
                                      const ArrayX<Scalar>& s) {
  const ArrayXi64 g = quantized_offset_coords(chain, alpha1, s, uq);
  const int big_k = chain.radix(Codebook::quant);
  ResolveResult<Scalar> res;
  for (const Digits& m : members) {
    Digits msg(m.size());
    bool on_fine = true;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const int c = coset_digit(static_cast<std::int64_t>(m[i]) - g[i], big_k);
      if (c % chain.k2() != 0) {
        on_fine = false;
        break;
      }
      msg[i] = c / chain.k2();
    }
    if (on_fine) {
      ++res.survivors;
      res.message = msg;
    }
  }
  res.unique = res.survivors == 1;
  return res;
}

/// Resolution from the decoded index alone.  The window holds exactly one
/// fine-lattice coset per axis, located directly without materializing the
/// k2^n members.
template <typename Scalar>
ResolveResult<Scalar> m1_resolve(const Model1State<Scalar>& st, const Digits& u_hat,
                                 const ArrayX<Scalar>& s) {
  const ArrayXi64 g = quantized_offset_coords(st.chain, st.alpha1, s, st.uq);
  const int big_k = st.chain.radix(Codebook::quant);
  const int k2 = st.chain.k2();
  ResolveResult<Scalar> res;
  res.message = Digits(u_hat.size());
  for (Eigen::Index i = 0; i < u_hat.size(); ++i) {
    const int offset = coset_digit(g[i] - u_hat[i], k2);
    const int c = coset_digit(static_cast<std::int64_t>(u_hat[i]) + offset - g[i], big_k);
    res.message[i] = c / k2;
  }
  res.survivors = 1;
  res.unique = true;
  return res;
}

/// One end-to-end Model 1 trial.  `shared_s` overrides per-trial
/// interference when the run shares a single sequence.
template <typename Scalar>
TrialOutcome run_model1_trial(const NestedChain<Scalar>& chain, const ChannelParams<Scalar>& cp,
                              const InterferenceSpec& ispec, const TrialOptions& opt,
                              RandomStream& rng, const ArrayX<Scalar>* shared_s = nullptr) {
  const Model1State<Scalar> st = make_model1_state(chain, cp.s1, cp.s2, opt, rng);
  const ArrayX<Scalar> s =
      shared_s ? *shared_s : gen_interference<Scalar>(ispec, chain.dim(), rng);

  const ArrayX<Scalar> x1 = m1_encode_source(st);
  const ArrayX<Scalar> y2 = hop1(Model::m1, x1, s, cp, rng);
  const ArrayX<Scalar> y2p = m1_relay_scale(st, y2);
  const Digits u = m1_relay_index(st, y2p);

  TrialOutcome out;
  out.relay_error = !m1_window_contains(st.chain, u, m1_quantized_signal(st, s));

  Digits u_hat;
  if (opt.ideal_hop2) {
    u_hat = u;
  } else {
    const ArrayX<Scalar> x2 = m1_hop2_encode(st, u);
    const ArrayX<Scalar> y3 = hop2(Model::m1, x2, s, cp, rng);
    u_hat = m1_hop2_decode(st, y3);
  }
  out.hop2_error = (u_hat != u).any();

  const ResolveResult<Scalar> res = m1_resolve(st, u_hat, s);
  out.ambiguity = !res.unique;
  out.message_error = !res.unique || (res.message != st.w).any();
  return out;
}

}  // namespace lathop

#endif  // LATHOP_MODEL1_HPP
