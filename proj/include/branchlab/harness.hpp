#pragma once

/**
 * Experiment drivers: turn a validated config into output files. Progress
 * and warnings go to the log stream; result data goes to the configured
 * output path ("-" for the primary stream) as CSV, JSON, or certificate
 * text. Given equal configs, two runs emit identical bytes.
 *
 * Exit codes: 0 success, 1 validation failure (reported by the config
 * layer before run is called), 2 computation failure (for instance an
 * exact-mode size cap).
 */

#include <iosfwd>
#include <string>
#include <vector>

#include "branchlab/config.hpp"
#include "branchlab/csv.hpp"

namespace branchlab::harness {

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files_written;
};

/// Executes the configured experiment. `log` receives human-readable
/// progress lines; `primary` receives the payload when out = "-".
RunResult run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& primary);

/// Tabular payload of a maverick or sweep config, exposed for tests.
csv::Table sweep_table(const ExperimentConfig& cfg, std::vector<std::string>* cell_errors);

/// Full self-check against the brute-force enumeration path: n from 1 to
/// 12, p in {1/2, 2/3, 9/10}, epsilon in {1/10, 1/4}. Logs one line per n
/// and returns true only if every exact comparison agrees.
bool selftest(std::ostream& log);

}  // namespace branchlab::harness
