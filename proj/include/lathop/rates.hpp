// Closed-form rate and bound calculations for the two-hop schemes, plus the
// parameter planner that maps target SNRs to realizable integer nesting
// factors.
//
// All logs are base 2; rates are bits per real dimension.
#ifndef LATHOP_RATES_HPP
#define LATHOP_RATES_HPP

#include <algorithm>
#include <cmath>
#include <optional>

#include "lathop/channel.hpp"
#include "lathop/common.hpp"

namespace lathop {

namespace detail {

template <typename Scalar>
void check_snr(Scalar s1, Scalar s2) {
  if (!(s1 > Scalar(0)) || !(s2 > Scalar(0))) throw InputError("SNRs must be positive");
}

}  // namespace detail

/// Rate achievable over both two-hop models,
/// [1/2 log2( 1 / (1/(1+s1) + 1/(1+s2)) )]+, clamped at zero.
template <typename Scalar = double>
Scalar achievable_rate(Scalar s1, Scalar s2) {
  detail::check_snr(s1, s2);
  const Scalar denom = Scalar(1) / (Scalar(1) + s1) + Scalar(1) / (Scalar(1) + s2);
  return std::max(Scalar(0), Scalar(0.5) * std::log2(Scalar(1) / denom));
}

/// Same rate via the expanded quotient (s1*s2 + s1 + s2 + 1)/(s1 + s2 + 2);
/// kept as an independent algebraic route for cross-checks.
template <typename Scalar = double>
Scalar achievable_rate_expanded(Scalar s1, Scalar s2) {
  detail::check_snr(s1, s2);
  const Scalar num = s1 * s2 + s1 + s2 + Scalar(1);
  const Scalar den = s1 + s2 + Scalar(2);
  return std::max(Scalar(0), Scalar(0.5) * std::log2(num / den));
}

/// Interference-free two-hop capacity, 1/2 log2(1 + min(s1, s2)).
template <typename Scalar = double>
Scalar clean_capacity(Scalar s1, Scalar s2) {
  if (s1 < Scalar(0) || s2 < Scalar(0)) throw InputError("SNRs must be nonnegative");
  return Scalar(0.5) * std::log2(Scalar(1) + std::min(s1, s2));
}

/// clean_capacity - achievable_rate; at most half a bit everywhere.
template <typename Scalar = double>
Scalar rate_gap(Scalar s1, Scalar s2) {
  detail::check_snr(s1, s2);
  return clean_capacity(s1, s2) - achievable_rate(s1, s2);
}

template <typename Scalar = double>
struct RateReport {
  Scalar r_thm;    // achievable rate, bits/dim
  Scalar r_clean;  // clean-channel capacity, bits/dim
  Scalar gap;      // r_clean - r_thm
};

template <typename Scalar = double>
RateReport<Scalar> rate_report(Scalar s1, Scalar s2) {
  return {achievable_rate(s1, s2), clean_capacity(s1, s2), rate_gap(s1, s2)};
}

/// Slack of each scheme constraint for a candidate (k1, k2) at the given
/// SNRs, before subtracting any requested margin.  Positive slack on every
/// entry means the configuration is admissible.
template <typename Scalar = double>
struct ConstraintMargins {
  Scalar rate_slack;        // list/destination rate bound minus R
  Scalar index_slack;       // forward-link rate bound minus Rq
  Scalar sigma_slack;       // sigma^2(quant) minus its lower bound (linear scale)
  Scalar relay_rate_slack;  // Model 2 relay rate bound minus R (Model 1: same as index bound)

  bool feasible(Scalar margin) const {
    return rate_slack > margin && index_slack > margin && sigma_slack > Scalar(0) &&
           relay_rate_slack > margin;
  }
};

/// Evaluate the scheme constraints for (k1, k2).
///
/// Model 1: R < 1/2 log2(1/(1/(1+s1) + sigma2q)), Rq < 1/2 log2(1+s2),
/// sigma2q > 1/(1+s2).  Model 2 mirrors the roles: R < 1/2 log2(1/(1/(1+s2)
/// + sigma2q)), Rq < 1/2 log2(1+s1), sigma2q > 1/(1+s1), plus the relay
/// message bound R < 1/2 log2(1+s1).
template <typename Scalar = double>
ConstraintMargins<Scalar> evaluate_constraints(Model model, Scalar s1, Scalar s2, int k1, int k2) {
  detail::check_snr(s1, s2);
  if (k1 < 2 || k2 < 1) throw InputError("need k1 >= 2 and k2 >= 1");
  const Scalar big_k = Scalar(k1) * Scalar(k2);
  const Scalar sigma2q = Scalar(1) / (big_k * big_k);
  const Scalar rate = std::log2(Scalar(k1));
  const Scalar quant_rate = std::log2(big_k);

  const Scalar list_snr = model == Model::m1 ? s1 : s2;    // hop carrying the message decode
  const Scalar index_snr = model == Model::m1 ? s2 : s1;   // hop carrying the quant codebook

  ConstraintMargins<Scalar> m;
  m.rate_slack =
      Scalar(0.5) * std::log2(Scalar(1) / (Scalar(1) / (Scalar(1) + list_snr) + sigma2q)) - rate;
  m.index_slack = Scalar(0.5) * std::log2(Scalar(1) + index_snr) - quant_rate;
  m.sigma_slack = sigma2q - Scalar(1) / (Scalar(1) + index_snr);
  m.relay_rate_slack = model == Model::m2
                           ? Scalar(0.5) * std::log2(Scalar(1) + s1) - rate
                           : m.index_slack;
  return m;
}

template <typename Scalar = double>
struct PlannedConfig {
  Eigen::Index n;
  int k1;
  int k2;
  Scalar rate;         // log2 k1
  Scalar quant_rate;   // log2 (k1 k2)
  Scalar sigma2_quant; // 1/(k1 k2)^2
  ConstraintMargins<Scalar> margins;
};

/// Pick the largest k1 (and a k2) such that every scheme constraint holds
/// with slack above `margin` bits.  Among the admissible k2 for that k1 the
/// planner maximizes the smaller of the two rate slacks, breaking ties
/// toward small k2.  Returns nullopt when no k1 >= 2 is admissible.
template <typename Scalar = double>
std::optional<PlannedConfig<Scalar>> plan_parameters(Model model, Scalar s1, Scalar s2,
                                                     Scalar margin, Eigen::Index n,
                                                     std::int64_t max_quant_radix = 1 << 20) {
  detail::check_snr(s1, s2);
  if (margin < Scalar(0)) throw InputError("margin must be >= 0");
  if (n < 1) throw InputError("dimension must be >= 1");

  const Scalar index_snr = model == Model::m1 ? s2 : s1;
  const Scalar list_snr = model == Model::m1 ? s1 : s2;
  // Rq < 1/2 log2(1+index_snr) - margin bounds the whole product k1*k2, and
  // R < 1/2 log2(1+list_snr) - margin bounds k1 alone.
  const Scalar k_limit = std::sqrt(Scalar(1) + index_snr) / std::exp2(margin);
  const Scalar k1_limit = std::min(k_limit, std::sqrt(Scalar(1) + list_snr) / std::exp2(margin));
  const std::int64_t k_cap = std::min<std::int64_t>(
      max_quant_radix, static_cast<std::int64_t>(std::ceil(k_limit)) + 1);

  std::optional<PlannedConfig<Scalar>> best;
  for (int k1 = 2; static_cast<Scalar>(k1) < k1_limit; ++k1) {
    int best_k2 = 0;
    Scalar best_score = Scalar(0);
    for (std::int64_t k2 = 1; k1 * k2 <= k_cap; ++k2) {
      const auto m = evaluate_constraints(model, s1, s2, k1, static_cast<int>(k2));
      if (!m.feasible(margin)) continue;
      const Scalar score = std::min(m.rate_slack, m.index_slack);
      if (best_k2 == 0 || score > best_score) {
        best_k2 = static_cast<int>(k2);
        best_score = score;
      }
    }
    if (best_k2 == 0) continue;
    const auto m = evaluate_constraints(model, s1, s2, k1, best_k2);
    const Scalar big_k = Scalar(k1) * Scalar(best_k2);
    best = PlannedConfig<Scalar>{n,
                                 k1,
                                 best_k2,
                                 std::log2(Scalar(k1)),
                                 std::log2(big_k),
                                 Scalar(1) / (big_k * big_k),
                                 m};
  }
  return best;
}

}  // namespace lathop

#endif  // LATHOP_RATES_HPP
