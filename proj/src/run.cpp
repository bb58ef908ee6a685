#include "lathop/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

#include "lathop/lattice.hpp"
#include "lathop/model1.hpp"
#include "lathop/model2.hpp"
#include "lathop/rng.hpp"

namespace lathop {

namespace {

// Stream index reserved for the run-shared interference sequence; trial
// indices stay below 2^63 so this can never collide.
constexpr std::uint64_t kSharedInterferenceStream = 0x8000000000000000ull;

}  // namespace

RunConfig validated(RunConfig cfg) {
  if (cfg.s1 <= 0 || cfg.s2 <= 0) throw ConfigError("SNRs must be positive");
  if (cfg.n < 1) throw ConfigError("dimension must be >= 1");
  if (cfg.trials < 1) throw ConfigError("need at least one trial");
  if (cfg.margin < 0) throw ConfigError("planner margin must be >= 0");
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("unknown output format '" + cfg.format + "'");
  }
  if (cfg.alpha1 && !(*cfg.alpha1 > 0 && *cfg.alpha1 <= 1)) {
    throw ConfigError("alpha1 override must lie in (0, 1]");
  }
  if (cfg.alpha2 && !(*cfg.alpha2 > 0 && *cfg.alpha2 <= 1)) {
    throw ConfigError("alpha2 override must lie in (0, 1]");
  }

  if (cfg.auto_plan) {
    const auto planned = plan_parameters(cfg.model, cfg.s1, cfg.s2, cfg.margin, cfg.n);
    if (!planned) {
      throw ConfigError("planner: no feasible (k1, k2) at these SNRs with margin " +
                        std::to_string(cfg.margin));
    }
    cfg.k1 = planned->k1;
    cfg.k2 = planned->k2;
    cfg.auto_plan = false;
  }
  if (cfg.k1 < 2) throw ConfigError("k1 must be >= 2");
  if (cfg.k2 < 1) throw ConfigError("k2 must be >= 1");

  if (cfg.ideal_hop2) {
    if (cfg.model != Model::m1) throw ConfigError("ideal_hop2 applies to model 1 only");
    const double quant_rate = std::log2(double(cfg.k1) * double(cfg.k2));
    const double pipe_capacity = 0.5 * std::log2(1.0 + cfg.s2);
    if (!(quant_rate < pipe_capacity)) {
      throw ConfigError("ideal_hop2 requires Rq < 1/2 log2(1+S2)");
    }
  }
  return cfg;
}

RunSummary run_trials(const RunConfig& raw) {
  const RunConfig cfg = validated(raw);
  const auto t0 = std::chrono::steady_clock::now();

  const NestedChain<double> chain(cfg.n, cfg.k1, cfg.k2, 1.0);
  const ChannelParams<double> cp{cfg.s1, cfg.s2, cfg.noiseless};
  TrialOptions opt;
  opt.alpha1 = cfg.alpha1;
  opt.alpha2 = cfg.alpha2;
  opt.ideal_hop2 = cfg.ideal_hop2;

  ArrayXd shared_s;
  const bool use_shared = !cfg.interference.fresh_per_trial;
  if (use_shared) {
    RandomStream rng = derive_stream(cfg.seed, kSharedInterferenceStream);
    shared_s = gen_interference<double>(cfg.interference, cfg.n, rng);
  }

  unsigned workers = cfg.workers == 0 ? std::thread::hardware_concurrency() : cfg.workers;
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, cfg.trials));

  struct Counts {
    std::uint64_t errors = 0;
    StageCounts stages;
    void add(const TrialOutcome& o) {
      errors += o.message_error;
      stages.relay += o.relay_error;
      stages.hop2 += o.hop2_error;
      stages.ambiguity += o.ambiguity;
    }
    void merge(const Counts& c) {
      errors += c.errors;
      stages.relay += c.stages.relay;
      stages.hop2 += c.stages.hop2;
      stages.ambiguity += c.stages.ambiguity;
    }
  };

  std::vector<Counts> partial(workers);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&](unsigned slot) {
    Counts local;
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= cfg.trials) break;
      RandomStream rng = derive_stream(cfg.seed, i);
      const TrialOutcome o =
          cfg.model == Model::m1
              ? run_model1_trial(chain, cp, cfg.interference, opt, rng,
                                 use_shared ? &shared_s : nullptr)
              : run_model2_trial(chain, cp, cfg.interference, opt, rng,
                                 use_shared ? &shared_s : nullptr);
      local.add(o);
    }
    partial[slot] = local;
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned slot = 0; slot < workers; ++slot) pool.emplace_back(worker, slot);
    for (auto& th : pool) th.join();
  }

  Counts total;
  for (const Counts& c : partial) total.merge(c);

  RunSummary summary;
  summary.config = cfg;
  summary.trials = cfg.trials;
  summary.errors = total.errors;
  summary.error_rate = static_cast<double>(total.errors) / static_cast<double>(cfg.trials);
  const Interval ci = wilson_interval(total.errors, cfg.trials);
  summary.ci_lo = ci.lo;
  summary.ci_hi = ci.hi;
  summary.stages = total.stages;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

}  // namespace lathop
