#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lathop/io.hpp"
#include "lathop/rng.hpp"
#include "lathop/run.hpp"
#include "lathop/stats.hpp"
#include "lathop/verify.hpp"

using namespace lathop;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

RunConfig noisy_reference_config() {
  RunConfig cfg;
  cfg.model = Model::m1;
  cfg.s1 = 15.0;
  cfg.s2 = 15.0;
  cfg.n = 4;
  cfg.k1 = 2;
  cfg.k2 = 2;
  cfg.interference = {InterferenceKind::gaussian, 4.0, true};
  cfg.trials = 2000;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.0625) == "0.0625");
  CHECK(format_double(255.0) == "255");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-12) == "1e-12");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("wilson interval against precomputed values") {
  const Interval i = wilson_interval(50, 1000);
  CHECK(i.lo == doctest::Approx(0.03813026239274882).epsilon(1e-12));
  CHECK(i.hi == doctest::Approx(0.06531382024425081).epsilon(1e-12));

  CHECK(wilson_interval(0, 100).lo == 0.0);
  CHECK(wilson_interval(0, 100).hi == doctest::Approx(0.03699349820698568).epsilon(1e-12));
  CHECK(wilson_interval(100, 100).hi == 1.0);
  CHECK(wilson_interval(100, 100).lo == doctest::Approx(0.9630065017930143).epsilon(1e-12));

  CHECK(intervals_overlap({0.1, 0.2}, {0.15, 0.3}));
  CHECK(!intervals_overlap({0.1, 0.2}, {0.25, 0.3}));
}

TEST_CASE("gaussian tail function") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(q_function(kZ95) == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(q_function(6.928203230275509) ==
        doctest::Approx(2.131095798921832e-12).epsilon(1e-6));
  CHECK(ks_critical(0.01) == doctest::Approx(1.6276236307187293).epsilon(1e-12));
}

TEST_CASE("ks test separates uniform from biased samples") {
  RandomStream rng = derive_stream(71, 0);
  std::vector<double> uniform, biased;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    uniform.push_back(u);
    biased.push_back(u * u);
  }
  CHECK(ks_uniform_pass(uniform, 0.0, 1.0, 0.01));
  CHECK(!ks_uniform_pass(biased, 0.0, 1.0, 0.01));
}

TEST_CASE("stream derivation is reproducible and index-separated") {
  RandomStream a = derive_stream(42, 7);
  RandomStream b = derive_stream(42, 7);
  RandomStream c = derive_stream(42, 8);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());

  RandomStream d = derive_stream(43, 0);
  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t v = d.uniform_int(5);
    REQUIRE(v < 5);
    seen[v] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("config file parsing with overrides") {
  const auto path = temp_file("lathop_test_config.txt");
  write_file(path,
             "# reference run\n"
             "model = 2\n"
             "s1 = 63\n"
             "s2 = 127\n"
             "n = 4\n"
             "k1 = auto\n"
             "margin = 0.5\n"
             "trials = 5\n"
             "seed = 11\n"
             "interference = sinusoid\n"
             "interference_param = 2.5\n"
             "noiseless = true\n");
  RunConfig cfg;
  load_config_file(path.string(), cfg);
  CHECK(cfg.model == Model::m2);
  CHECK(cfg.s1 == 63.0);
  CHECK(cfg.s2 == 127.0);
  CHECK(cfg.auto_plan);
  CHECK(cfg.margin == 0.5);
  CHECK(cfg.trials == 5);
  CHECK(cfg.interference.kind == InterferenceKind::sinusoid);
  CHECK(cfg.interference.param == 2.5);
  CHECK(cfg.noiseless);

  apply_config_entry(cfg, "trials", "7");  // flags win over file values
  CHECK(cfg.trials == 7);

  CHECK_THROWS_AS(apply_config_entry(cfg, "bogus_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "s1", "fast"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "noiseless", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "model", "3"), ConfigError);

  RunConfig fresh;
  CHECK_THROWS_AS(load_config_file("/nonexistent/lathop.cfg", fresh), ConfigError);
  const auto bad = temp_file("lathop_bad_config.txt");
  write_file(bad, "model 2\n");
  CHECK_THROWS_AS(load_config_file(bad.string(), fresh), ConfigError);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}

TEST_CASE("config validation happens before any trial or file output") {
  RunConfig cfg;
  cfg.trials = 0;
  cfg.output = temp_file("lathop_never_written.csv").string();
  std::filesystem::remove(cfg.output);
  CHECK_THROWS_AS(run_trials(cfg), ConfigError);
  CHECK(!std::filesystem::exists(cfg.output));

  RunConfig bad;
  bad.s1 = -1.0;
  CHECK_THROWS_AS(validated(bad), ConfigError);
  bad = RunConfig{};
  bad.format = "xml";
  CHECK_THROWS_AS(validated(bad), ConfigError);
  bad = RunConfig{};
  bad.alpha1 = 1.5;
  CHECK_THROWS_AS(validated(bad), ConfigError);
  bad = RunConfig{};
  bad.k1 = 1;
  CHECK_THROWS_AS(validated(bad), ConfigError);

  // ideal_hop2 is a model-1 device and requires headroom on the second hop
  bad = RunConfig{};
  bad.model = Model::m2;
  bad.ideal_hop2 = true;
  CHECK_THROWS_AS(validated(bad), ConfigError);
  bad = RunConfig{};
  bad.ideal_hop2 = true;
  bad.k1 = 4;
  bad.k2 = 4;  // Rq = 4 = 1/2 log2(1+255): no margin left
  CHECK_THROWS_AS(validated(bad), ConfigError);
  bad.k2 = 2;
  CHECK_NOTHROW(validated(bad));

  // auto planning resolves to the maximal feasible k1
  RunConfig autocfg;
  autocfg.auto_plan = true;
  autocfg.margin = 0.5;
  const RunConfig resolved = validated(autocfg);
  CHECK(resolved.k1 == 5);
  CHECK(resolved.k2 == 2);
  CHECK(!resolved.auto_plan);

  autocfg.s1 = 3.0;
  autocfg.s2 = 3.0;
  autocfg.margin = 0.0;
  CHECK_THROWS_AS(validated(autocfg), ConfigError);
}

TEST_CASE("noiseless runs make no errors; summaries are deterministic") {
  for (Model model : {Model::m1, Model::m2}) {
    RunConfig cfg;
    cfg.model = model;
    cfg.noiseless = true;
    cfg.alpha1 = 1.0;
    cfg.alpha2 = 1.0;
    cfg.trials = 100;
    cfg.interference = {InterferenceKind::constant, 1e6, true};
    const RunSummary s = run_trials(cfg);
    CHECK(s.errors == 0);
    CHECK(s.error_rate == 0.0);
    CHECK(s.ci_lo == 0.0);
    CHECK(s.stages.relay == 0);
    CHECK(s.stages.hop2 == 0);
    CHECK(s.stages.ambiguity == 0);
  }
}

TEST_CASE("identical config and seed give byte-identical output at any worker count") {
  RunConfig cfg = noisy_reference_config();
  const RunSummary first = run_trials(cfg);
  const RunSummary second = run_trials(cfg);
  cfg.workers = 4;
  const RunSummary pooled = run_trials(cfg);

  CHECK(summary_csv(first) == summary_csv(second));
  CHECK(summary_csv(first) == summary_csv(pooled));
  CHECK(summary_json(first) == summary_json(pooled));
  CHECK(first.errors == pooled.errors);
  CHECK(first.stages.relay == pooled.stages.relay);
  CHECK(first.stages.hop2 == pooled.stages.hop2);

  // stage checkpoints can each fire on a failed trial, never fewer
  CHECK(first.stages.relay + first.stages.hop2 + first.stages.ambiguity >= first.errors);
  CHECK(first.errors > 0);  // this config is genuinely noisy
}

TEST_CASE("shared interference differs from per-trial interference") {
  RunConfig cfg = noisy_reference_config();
  cfg.interference = {InterferenceKind::gaussian, 1e12, true};
  const RunSummary fresh = run_trials(cfg);
  cfg.interference.fresh_per_trial = false;
  const RunSummary shared_a = run_trials(cfg);
  const RunSummary shared_b = run_trials(cfg);
  CHECK(summary_csv(shared_a) == summary_csv(shared_b));
  CHECK(fresh.errors != shared_a.errors);
}

TEST_CASE("CSV and JSON serialization round-trip") {
  const RunSummary s = run_trials(noisy_reference_config());
  const std::string csv = summary_csv(s);
  CHECK(csv.rfind(summary_csv_header(), 0) == 0);

  const RunSummary parsed = parse_summary_csv(csv);
  CHECK(parsed.config.model == s.config.model);
  CHECK(parsed.config.s1 == s.config.s1);
  CHECK(parsed.config.s2 == s.config.s2);
  CHECK(parsed.config.n == s.config.n);
  CHECK(parsed.config.k1 == s.config.k1);
  CHECK(parsed.config.k2 == s.config.k2);
  CHECK(parsed.trials == s.trials);
  CHECK(parsed.errors == s.errors);
  CHECK(parsed.error_rate == s.error_rate);
  CHECK(parsed.ci_lo == s.ci_lo);
  CHECK(parsed.ci_hi == s.ci_hi);
  CHECK(parsed.config.seed == s.config.seed);
  CHECK(summary_csv(parsed) == csv);  // byte-exact after a full round trip

  const std::string json = summary_json(s);
  for (const char* key : {"\"model\"", "\"S1\"", "\"S2\"", "\"n\"", "\"k1\"", "\"k2\"", "\"R\"",
                          "\"Rq\"", "\"sigma2q\"", "\"trials\"", "\"errors\"", "\"rate\"",
                          "\"ci_lo\"", "\"ci_hi\"", "\"seed\""}) {
    CHECK(json.find(key) != std::string::npos);
  }

  CHECK_THROWS_AS(parse_summary_csv("not,a,summary\n1,2,3\n"), IoError);
}

TEST_CASE("write_output hits the filesystem exactly as serialized") {
  const RunSummary s = run_trials(noisy_reference_config());
  const auto csv_path = temp_file("lathop_summary.csv");
  const auto json_path = temp_file("lathop_summary.json");
  write_output(s, "csv", csv_path.string());
  write_output(s, "json", json_path.string());
  CHECK(read_file(csv_path) == summary_csv(s));
  CHECK(read_file(json_path) == summary_json(s));
  std::filesystem::remove(csv_path);
  std::filesystem::remove(json_path);

  CHECK_THROWS_AS(write_output(s, "csv", "/nonexistent_dir/out.csv"), IoError);
}

TEST_CASE("verify suite passes on a fresh build") {
  const auto results = run_verify_suite();
  REQUIRE(results.size() == 8);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("corrupting the pipeline coefficient trips only the noise check") {
  const auto broken = check_effective_noise(0xC0FFEE, 0.1);
  CHECK(!broken.passed);
  const auto intact = check_effective_noise(0xC0FFEE);
  CHECK(intact.passed);
  CHECK(check_gap_grid().passed);
  CHECK(check_planner_soundness().passed);
}
