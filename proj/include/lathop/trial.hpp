// Per-trial outcome flags shared by both scheme pipelines.
#ifndef LATHOP_TRIAL_HPP
#define LATHOP_TRIAL_HPP

#include <optional>

namespace lathop {

struct TrialOutcome {
  bool message_error = false;
  // Model 1: the true codeword fell outside the relay's list.
  // Model 2: the relay decoded the wrong shifted codeword.
  bool relay_error = false;
  // Model 1: the destination decoded the wrong list index.
  // Model 2: the destination decoded the wrong message.
  bool hop2_error = false;
  // Model 1 only: list resolution found zero or several survivors.
  bool ambiguity = false;
};

struct TrialOptions {
  std::optional<double> alpha1;  // default: MMSE coefficient s1/(s1+1)
  std::optional<double> alpha2;  // default: MMSE coefficient s2/(s2+1)
  bool ideal_hop2 = false;       // Model 1: replace hop 2 by an error-free index pipe
};

}  // namespace lathop

#endif  // LATHOP_TRIAL_HPP
