#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limsup/config.hpp"

namespace limsup {

enum ExitStatus : int { kExitPass = 0, kExitCheckFailed = 1, kExitInvalid = 2 };

// One emitted statistic. Non-MC commands use n = 0 and leave reference and
// ratio NaN.
struct StatRow {
  std::string key;
  std::uint64_t n = 0;
  double statistic = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
};

struct RunOutcome {
  int status = kExitPass;
  std::string csv;  // body, RFC 4180, 17 significant digits
  std::vector<StatRow> statistics;
  std::vector<std::string> messages;  // diagnostics for stderr
};

// Validates and executes a config. Never throws on bad input: invalid
// configs and domain errors come back as status 2 with a message.
RunOutcome run(const RunConfig& config);

// One manifest line (JSON). Wall clock and timestamp live under "metadata"
// so everything else is reproducible byte for byte.
std::string manifest_record(const RunConfig& config, const RunOutcome& outcome, double wall_seconds,
                            const std::string& timestamp);

struct ReportOutcome {
  int status = kExitPass;
  std::string csv;
  std::vector<std::string> messages;
};

// Merges manifest lines from runs of the same command and space into one
// table keyed by (schedule, key, N) with a statistic column per seed and
// log columns for plotting.
ReportOutcome report(const std::vector<std::string>& manifest_lines);

struct ReplayOutcome {
  int status = kExitPass;  // 1 when the CSV body differs
  RunOutcome rerun;
  std::string recorded_csv;
  std::vector<std::string> messages;
};

// Re-runs the config stored in a manifest line and compares CSV bodies.
ReplayOutcome replay(const std::string& manifest_line);

// RFC 4180 field quoting.
std::string csv_field(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace limsup
