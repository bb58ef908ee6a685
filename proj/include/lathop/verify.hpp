// Self-check battery bundling the structural invariants of the library:
// mod reconstruction, dither uniformity, both derivation chains, effective
// noise, the half-bit gap grid, planner soundness, list cardinality.
#ifndef LATHOP_VERIFY_HPP
#define LATHOP_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lathop {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 0xC0FFEE;
  // Deliberately corrupt the Model 1 pipeline coefficient in the effective
  // noise check; used by mutation tests to prove the check has teeth.
  std::optional<double> alpha1_override;
};

CheckResult check_mod_reconstruction(std::uint64_t seed);
CheckResult check_crypto_uniformity(std::uint64_t seed);
CheckResult check_model1_identity(std::uint64_t seed);
CheckResult check_model2_identity(std::uint64_t seed);
CheckResult check_effective_noise(std::uint64_t seed, std::optional<double> alpha1_override = {});
CheckResult check_gap_grid();
CheckResult check_planner_soundness();
CheckResult check_list_cardinality(std::uint64_t seed);

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options = {});

}  // namespace lathop

#endif  // LATHOP_VERIFY_HPP
