// Config-file parsing and result serialization.
//
// Config files are flat key = value text; CLI flags override file values.
// Result files are a fixed-column CSV or a JSON object mirroring the same
// fields, both byte-stable for identical runs.
#ifndef LATHOP_IO_HPP
#define LATHOP_IO_HPP

#include <string>

#include "lathop/run.hpp"

namespace lathop {

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Parse a key = value file into `cfg` (later keys win within the file).
/// Unknown keys are configuration errors.
void load_config_file(const std::string& path, RunConfig& cfg);

/// Apply one key/value pair; shared by the file parser and flag overrides.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// CSV with header row:
/// model,S1,S2,n,k1,k2,R,Rq,sigma2q,trials,errors,rate,ci_lo,ci_hi,seed
std::string summary_csv_header();
std::string summary_csv_row(const RunSummary& summary);
std::string summary_csv(const RunSummary& summary);

/// JSON object with exactly the CSV fields, in the same order.
std::string summary_json(const RunSummary& summary);

/// Inverse of summary_csv for a single-row document; field-exact.
RunSummary parse_summary_csv(const std::string& text);

/// Write the summary in the given format ("csv" or "json").
void write_output(const RunSummary& summary, const std::string& format, const std::string& path);

}  // namespace lathop

#endif  // LATHOP_IO_HPP
