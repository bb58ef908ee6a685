// Experiment orchestration: run configuration, trial execution on a worker
// pool, and aggregated error statistics.
#ifndef LATHOP_RUN_HPP
#define LATHOP_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "lathop/channel.hpp"
#include "lathop/common.hpp"
#include "lathop/rates.hpp"
#include "lathop/stats.hpp"
#include "lathop/trial.hpp"

namespace lathop {

struct RunConfig {
  Model model = Model::m1;
  double s1 = 255.0;
  double s2 = 255.0;
  Eigen::Index n = 8;
  int k1 = 2;
  int k2 = 2;
  bool auto_plan = false;   // resolve k1/k2 through the planner
  double margin = 0.25;     // planner margin (bits/dim) when auto_plan
  InterferenceSpec interference{};
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;     // 0 = hardware concurrency
  bool ideal_hop2 = false;  // Model 1 only
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  bool noiseless = false;
  std::string output;       // output file path; empty writes nothing
  std::string format = "csv";
};

/// Validates every field and resolves auto-planned k1/k2 to concrete values.
/// Throws ConfigError before any trial can run.
RunConfig validated(RunConfig cfg);

struct StageCounts {
  std::uint64_t relay = 0;
  std::uint64_t hop2 = 0;
  std::uint64_t ambiguity = 0;
};

struct RunSummary {
  RunConfig config;  // resolved echo
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double error_rate = 0.0;
  double ci_lo = 0.0;  // 95% Wilson bounds on the error rate
  double ci_hi = 0.0;
  StageCounts stages;
  double wall_seconds = 0.0;  // console diagnostics only, never serialized
};

/// Runs cfg.trials independent end-to-end trials.  Trial i draws everything
/// from derive_stream(seed, i), so the summary is a pure function of the
/// resolved config regardless of worker count.
RunSummary run_trials(const RunConfig& cfg);

}  // namespace lathop

#endif  // LATHOP_RUN_HPP
