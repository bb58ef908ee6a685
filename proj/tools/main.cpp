// Command-line front end: rate/gap tables, Monte Carlo simulation, and the
// self-check suite.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lathop/io.hpp"
#include "lathop/rates.hpp"
#include "lathop/run.hpp"
#include "lathop/stats.hpp"
#include "lathop/verify.hpp"

namespace {

using namespace lathop;

void emit_rates_line(std::ostream& out, double s1, double s2) {
  const auto report = rate_report(s1, s2);
  out << format_double(s1) << ',' << format_double(s2) << ',' << format_double(report.r_thm)
      << ',' << format_double(report.r_clean) << ',' << format_double(report.gap) << '\n';
}

int run_rates(const std::optional<double>& s1, const std::optional<double>& s2, bool grid,
              int grid_points, double grid_min, double grid_max, const std::string& output) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output.empty()) {
    file.open(output, std::ios::binary);
    if (!file) throw IoError("cannot open output file '" + output + "'");
    out = &file;
  }
  *out << "S1,S2,R_thm,R_clean,gap\n";
  if (grid) {
    const double lo = std::log10(grid_min), hi = std::log10(grid_max);
    for (int i = 0; i < grid_points; ++i) {
      const double si = std::pow(10.0, lo + (hi - lo) * i / (grid_points - 1));
      for (int j = 0; j < grid_points; ++j) {
        const double sj = std::pow(10.0, lo + (hi - lo) * j / (grid_points - 1));
        emit_rates_line(*out, si, sj);
      }
    }
  } else {
    if (!s1 || !s2) throw ConfigError("rates needs --s1 and --s2 (or --grid)");
    emit_rates_line(*out, *s1, *s2);
  }
  out->flush();
  return 0;
}

void print_summary(const RunSummary& s) {
  const RunConfig& c = s.config;
  std::cout << "model " << int(c.model) << "  S1=" << format_double(c.s1)
            << " S2=" << format_double(c.s2) << "  n=" << c.n << "  k1=" << c.k1
            << " k2=" << c.k2 << "\n";
  std::cout << "interference " << interference_kind_name(c.interference.kind) << "("
            << format_double(c.interference.param) << ")"
            << (c.interference.fresh_per_trial ? " per-trial" : " shared")
            << (c.noiseless ? "  noiseless" : "") << (c.ideal_hop2 ? "  ideal_hop2" : "") << "\n";
  std::cout << "trials " << s.trials << "  seed " << c.seed << "  errors " << s.errors
            << "  rate " << format_double(s.error_rate) << "  95% CI ["
            << format_double(s.ci_lo) << ", " << format_double(s.ci_hi) << "]\n";
  std::cout << "stages: relay " << s.stages.relay << ", hop2 " << s.stages.hop2 << ", ambiguity "
            << s.stages.ambiguity << "\n";
  std::cout << "wall " << s.wall_seconds << " s\n";
}

int run_simulate(RunConfig cfg, bool s_independence) {
  if (!s_independence) {
    const RunSummary summary = run_trials(cfg);
    print_summary(summary);
    if (!summary.config.output.empty()) {
      write_output(summary, summary.config.format, summary.config.output);
      std::cout << "wrote " << summary.config.output << "\n";
    }
    return 0;
  }

  // Paired experiment: identical config except for the interference spec.
  struct Variant {
    const char* label;
    InterferenceSpec spec;
  };
  const std::vector<Variant> variants = {
      {"constant 0", {InterferenceKind::constant, 0.0, true}},
      {"constant 1e6", {InterferenceKind::constant, 1e6, true}},
      {"gaussian var 1e12", {InterferenceKind::gaussian, 1e12, true}},
  };
  std::vector<RunSummary> summaries;
  for (const Variant& v : variants) {
    RunConfig variant_cfg = cfg;
    variant_cfg.interference = v.spec;
    summaries.push_back(run_trials(variant_cfg));
    std::cout << "--- interference " << v.label << "\n";
    print_summary(summaries.back());
  }
  bool all_overlap = true;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (std::size_t j = i + 1; j < summaries.size(); ++j) {
      const Interval a{summaries[i].ci_lo, summaries[i].ci_hi};
      const Interval b{summaries[j].ci_lo, summaries[j].ci_hi};
      if (!intervals_overlap(a, b)) {
        all_overlap = false;
        std::cout << "intervals " << variants[i].label << " and " << variants[j].label
                  << " do not overlap\n";
      }
    }
  }
  std::cout << (all_overlap ? "all 95% intervals overlap pairwise\n"
                            : "interval overlap FAILED\n");
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + cfg.output + "'");
    out << summary_csv_header() << "\n";
    for (const RunSummary& s : summaries) out << summary_csv_row(s) << "\n";
  }
  return 0;
}

int run_verify_cmd(std::uint64_t seed) {
  VerifyOptions options;
  options.seed = seed;
  int failures = 0;
  for (const CheckResult& r : run_verify_suite(options)) {
    std::cout << (r.passed ? "[ ok ] " : "[FAIL] ") << r.name << " - " << r.detail << "\n";
    failures += r.passed ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-lattice coding over two-hop interference networks"};
  app.require_subcommand(1);

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "achievable rate, clean capacity, and gap");
  std::optional<double> s1_opt, s2_opt;
  bool grid = false;
  int grid_points = 50;
  double grid_min = 0.1, grid_max = 1e4;
  std::string rates_output;
  rates_cmd->add_option("--s1", s1_opt, "link-1 SNR");
  rates_cmd->add_option("--s2", s2_opt, "link-2 SNR");
  rates_cmd->add_flag("--grid", grid, "sweep a log-spaced SNR grid");
  rates_cmd->add_option("--grid-points", grid_points, "grid points per axis");
  rates_cmd->add_option("--grid-min", grid_min, "grid lower SNR");
  rates_cmd->add_option("--grid-max", grid_max, "grid upper SNR");
  rates_cmd->add_option("-o,--output", rates_output, "write the CSV here instead of stdout");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run Monte Carlo trials of a scheme");
  std::string config_path;
  bool s_independence = false;
  sim_cmd->add_option("--config", config_path, "key = value config file");
  sim_cmd->add_flag("--s-independence", s_independence,
                    "run paired configs differing only in interference and compare intervals");
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const char* key :
       {"model", "s1", "s2", "n", "k1", "k2", "margin", "interference", "interference_param",
        "interference_fresh", "trials", "seed", "workers", "ideal_hop2", "alpha1", "alpha2",
        "noiseless", "output", "format"}) {
    overrides.emplace_back(key, "");
  }
  for (auto& [key, slot] : overrides) {
    sim_cmd->add_option("--" + key, slot, "override config key '" + key + "'");
  }

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant self-check battery");
  std::uint64_t verify_seed = 0xC0FFEE;
  verify_cmd->add_option("--seed", verify_seed, "seed for the randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rates_cmd->parsed()) {
      return run_rates(s1_opt, s2_opt, grid, grid_points, grid_min, grid_max, rates_output);
    }
    if (sim_cmd->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) load_config_file(config_path, cfg);
      for (const auto& [key, slot] : overrides) {
        if (!slot.empty()) apply_config_entry(cfg, key, slot);
      }
      return run_simulate(cfg, s_independence);
    }
    if (verify_cmd->parsed()) {
      return run_verify_cmd(verify_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
