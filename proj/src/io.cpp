#include "lathop/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include <json.hpp>

namespace lathop {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("bad numeric value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("bad integer value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("bad unsigned value '" + value + "' for key '" + key + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean value '" + value + "' for key '" + key + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("failed to format a double");
  return std::string(buf, ptr);
}

void apply_config_entry(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "model") {
    const std::int64_t m = parse_int(key, value);
    if (m != 1 && m != 2) throw ConfigError("model must be 1 or 2");
    cfg.model = m == 1 ? Model::m1 : Model::m2;
  } else if (key == "s1") {
    cfg.s1 = parse_double(key, value);
  } else if (key == "s2") {
    cfg.s2 = parse_double(key, value);
  } else if (key == "n") {
    cfg.n = static_cast<Eigen::Index>(parse_int(key, value));
  } else if (key == "k1") {
    if (lower(value) == "auto") {
      cfg.auto_plan = true;
    } else {
      cfg.k1 = static_cast<int>(parse_int(key, value));
    }
  } else if (key == "k2") {
    if (lower(value) == "auto") {
      cfg.auto_plan = true;
    } else {
      cfg.k2 = static_cast<int>(parse_int(key, value));
    }
  } else if (key == "margin") {
    cfg.margin = parse_double(key, value);
  } else if (key == "interference") {
    cfg.interference.kind = parse_interference_kind(lower(value));
  } else if (key == "interference_param") {
    cfg.interference.param = parse_double(key, value);
  } else if (key == "interference_fresh") {
    cfg.interference.fresh_per_trial = parse_bool(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_uint(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, value);
  } else if (key == "workers") {
    cfg.workers = static_cast<unsigned>(parse_uint(key, value));
  } else if (key == "ideal_hop2") {
    cfg.ideal_hop2 = parse_bool(key, value);
  } else if (key == "alpha1") {
    if (lower(value) == "auto") {
      cfg.alpha1.reset();
    } else {
      cfg.alpha1 = parse_double(key, value);
    }
  } else if (key == "alpha2") {
    if (lower(value) == "auto") {
      cfg.alpha2.reset();
    } else {
      cfg.alpha2 = parse_double(key, value);
    }
  } else if (key == "noiseless") {
    cfg.noiseless = parse_bool(key, value);
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "format") {
    cfg.format = lower(value);
  } else {
    throw ConfigError("unknown config key '" + raw_key + "'");
  }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " is not 'key = value': " +
                        stripped);
    }
    apply_config_entry(cfg, stripped.substr(0, eq), stripped.substr(eq + 1));
  }
}

namespace {

double chain_rate(const RunConfig& c) { return std::log2(static_cast<double>(c.k1)); }
double chain_quant_rate(const RunConfig& c) {
  return std::log2(static_cast<double>(c.k1) * static_cast<double>(c.k2));
}
double chain_sigma2q(const RunConfig& c) {
  const double k = static_cast<double>(c.k1) * static_cast<double>(c.k2);
  return 1.0 / (k * k);
}

}  // namespace

std::string summary_csv_header() {
  return "model,S1,S2,n,k1,k2,R,Rq,sigma2q,trials,errors,rate,ci_lo,ci_hi,seed";
}

std::string summary_csv_row(const RunSummary& s) {
  const RunConfig& c = s.config;
  std::ostringstream out;
  out << static_cast<int>(c.model) << ',' << format_double(c.s1) << ',' << format_double(c.s2)
      << ',' << c.n << ',' << c.k1 << ',' << c.k2 << ',' << format_double(chain_rate(c)) << ','
      << format_double(chain_quant_rate(c)) << ',' << format_double(chain_sigma2q(c)) << ','
      << s.trials << ',' << s.errors << ',' << format_double(s.error_rate) << ','
      << format_double(s.ci_lo) << ',' << format_double(s.ci_hi) << ',' << c.seed;
  return out.str();
}

std::string summary_csv(const RunSummary& s) {
  return summary_csv_header() + "\n" + summary_csv_row(s) + "\n";
}

std::string summary_json(const RunSummary& s) {
  const RunConfig& c = s.config;
  nlohmann::ordered_json j;
  j["model"] = static_cast<int>(c.model);
  j["S1"] = c.s1;
  j["S2"] = c.s2;
  j["n"] = static_cast<std::int64_t>(c.n);
  j["k1"] = c.k1;
  j["k2"] = c.k2;
  j["R"] = chain_rate(c);
  j["Rq"] = chain_quant_rate(c);
  j["sigma2q"] = chain_sigma2q(c);
  j["trials"] = s.trials;
  j["errors"] = s.errors;
  j["rate"] = s.error_rate;
  j["ci_lo"] = s.ci_lo;
  j["ci_hi"] = s.ci_hi;
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

RunSummary parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header, row;
  if (!std::getline(in, header) || trim(header) != summary_csv_header()) {
    throw IoError("summary CSV header mismatch");
  }
  if (!std::getline(in, row)) throw IoError("summary CSV has no data row");

  std::vector<std::string> fields;
  std::string field;
  std::istringstream rowstream(trim(row));
  while (std::getline(rowstream, field, ',')) fields.push_back(field);
  if (fields.size() != 15) throw IoError("summary CSV row must have 15 fields");

  RunSummary s;
  s.config.model = parse_int("model", fields[0]) == 1 ? Model::m1 : Model::m2;
  s.config.s1 = parse_double("S1", fields[1]);
  s.config.s2 = parse_double("S2", fields[2]);
  s.config.n = static_cast<Eigen::Index>(parse_int("n", fields[3]));
  s.config.k1 = static_cast<int>(parse_int("k1", fields[4]));
  s.config.k2 = static_cast<int>(parse_int("k2", fields[5]));
  // fields 6..8 (R, Rq, sigma2q) are derived from k1/k2; validated on re-emit
  s.trials = parse_uint("trials", fields[9]);
  s.errors = parse_uint("errors", fields[10]);
  s.error_rate = parse_double("rate", fields[11]);
  s.ci_lo = parse_double("ci_lo", fields[12]);
  s.ci_hi = parse_double("ci_hi", fields[13]);
  s.config.seed = parse_uint("seed", fields[14]);
  s.config.trials = s.trials;
  return s;
}

void write_output(const RunSummary& summary, const std::string& format, const std::string& path) {
  if (path.empty()) throw IoError("output path is empty");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  if (format == "csv") {
    out << summary_csv(summary);
  } else if (format == "json") {
    out << summary_json(summary);
  } else {
    throw ConfigError("unknown output format '" + format + "'");
  }
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace lathop
