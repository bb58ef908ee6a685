// Two-hop AWGN channel laws and interference generators.
//
// Link SNRs s1, s2 fix the noise variances at 1/s1 and 1/s2 with unit power
// budgets at source and relay.  Model 1 adds the interference on the first
// hop, Model 2 on the second.
#ifndef LATHOP_CHANNEL_HPP
#define LATHOP_CHANNEL_HPP

#include <cmath>
#include <string>

#include "lathop/common.hpp"
#include "lathop/rng.hpp"

namespace lathop {

enum class Model : int { m1 = 1, m2 = 2 };

enum class InterferenceKind { constant, gaussian, sinusoid, uniform };

inline InterferenceKind parse_interference_kind(const std::string& name) {
  if (name == "constant") return InterferenceKind::constant;
  if (name == "gaussian") return InterferenceKind::gaussian;
  if (name == "sinusoid") return InterferenceKind::sinusoid;
  if (name == "uniform") return InterferenceKind::uniform;
  throw ConfigError("unknown interference kind '" + name + "'");
}

inline const char* interference_kind_name(InterferenceKind kind) {
  switch (kind) {
    case InterferenceKind::constant: return "constant";
    case InterferenceKind::gaussian: return "gaussian";
    case InterferenceKind::sinusoid: return "sinusoid";
    case InterferenceKind::uniform: return "uniform";
  }
  return "?";
}

/// Interference descriptor.  `param` is the constant value, the Gaussian
/// variance, the sinusoid amplitude, or the uniform half-width, depending on
/// kind.  With fresh_per_trial the sequence is redrawn from each trial's
/// stream; otherwise one sequence is shared by the whole run.
struct InterferenceSpec {
  InterferenceKind kind = InterferenceKind::constant;
  double param = 0.0;
  bool fresh_per_trial = true;
};

template <typename Scalar = double>
ArrayX<Scalar> gen_interference(const InterferenceSpec& spec, Eigen::Index n, RandomStream& rng) {
  if (n < 1) throw InputError("interference length must be >= 1");
  ArrayX<Scalar> s(n);
  switch (spec.kind) {
    case InterferenceKind::constant:
      s.setConstant(static_cast<Scalar>(spec.param));
      break;
    case InterferenceKind::gaussian: {
      if (spec.param < 0) throw ConfigError("gaussian interference variance must be >= 0");
      const Scalar sigma = std::sqrt(static_cast<Scalar>(spec.param));
      for (Eigen::Index i = 0; i < n; ++i) s[i] = sigma * static_cast<Scalar>(rng.normal());
      break;
    }
    case InterferenceKind::sinusoid:
      // one period every 8 samples, independent of n
      for (Eigen::Index i = 0; i < n; ++i) {
        s[i] = static_cast<Scalar>(spec.param * std::sin(kTwoPi * static_cast<double>(i) / 8.0));
      }
      break;
    case InterferenceKind::uniform:
      for (Eigen::Index i = 0; i < n; ++i) {
        s[i] = static_cast<Scalar>(rng.uniform(-spec.param, spec.param));
      }
      break;
  }
  return s;
}

template <typename Scalar = double>
struct ChannelParams {
  Scalar s1;                // SNR of link source -> relay
  Scalar s2;                // SNR of link relay -> destination
  bool noiseless = false;   // debug switch: z2 = z3 = 0 exactly
};

namespace detail {

// Transmit-power contract: the dithered mod-encoder emits points of the
// coarse cube, whose per-dimension mean square never exceeds 3x the unit
// average power (cube corner).  Anything above that is an encoder bug.
template <typename Derived>
void check_power(const Eigen::ArrayBase<Derived>& x, const char* who) {
  const double mean_sq = static_cast<double>(x.derived().square().mean());
  if (!(mean_sq <= 3.0 + 1e-9)) {
    throw ContractError(std::string(who) + ": transmit power " + std::to_string(mean_sq) +
                        " exceeds the encoder bound");
  }
}

}  // namespace detail

/// First hop.  Model 1: y2 = x1 + s + z2.  Model 2: y2 = x1 + z2.
/// z2 ~ N(0, 1/s1) iid, or exactly zero under the noiseless flag.
template <typename DerivedX, typename DerivedS>
ArrayX<typename DerivedX::Scalar> hop1(Model model, const Eigen::ArrayBase<DerivedX>& x1,
                                       const Eigen::ArrayBase<DerivedS>& s,
                                       const ChannelParams<typename DerivedX::Scalar>& params,
                                       RandomStream& rng) {
  using Scalar = typename DerivedX::Scalar;
  if (x1.size() != s.size()) throw InputError("hop1: signal/interference length mismatch");
  detail::check_power(x1, "hop1");
  ArrayX<Scalar> y2 = x1;
  if (model == Model::m1) y2 += s.derived();
  if (!params.noiseless) {
    y2 += normal_array<Scalar>(rng, x1.size(), std::sqrt(Scalar(1) / params.s1));
  }
  return y2;
}

/// Second hop.  Model 1: y3 = x2 + z3.  Model 2: y3 = x2 + s + z3.
/// z3 ~ N(0, 1/s2) iid, or exactly zero under the noiseless flag.
template <typename DerivedX, typename DerivedS>
ArrayX<typename DerivedX::Scalar> hop2(Model model, const Eigen::ArrayBase<DerivedX>& x2,
                                       const Eigen::ArrayBase<DerivedS>& s,
                                       const ChannelParams<typename DerivedX::Scalar>& params,
                                       RandomStream& rng) {
  using Scalar = typename DerivedX::Scalar;
  if (x2.size() != s.size()) throw InputError("hop2: signal/interference length mismatch");
  detail::check_power(x2, "hop2");
  ArrayX<Scalar> y3 = x2;
  if (model == Model::m2) y3 += s.derived();
  if (!params.noiseless) {
    y3 += normal_array<Scalar>(rng, x2.size(), std::sqrt(Scalar(1) / params.s2));
  }
  return y3;
}

}  // namespace lathop

#endif  // LATHOP_CHANNEL_HPP
