#pragma once

/**
 * Experiment configuration: a flat "key = value" document ('#' starts a
 * comment) or the equivalent command-line flags. Parsing validates every
 * field and reports all problems at once; a config that parses cleanly
 * round-trips through serialize() unchanged.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "branchlab/exact.hpp"
#include "branchlab/measures.hpp"

namespace branchlab::harness {

enum class Experiment { maverick, sweep, envariance, decoherence, ratefn, selftest };

std::string experiment_str(Experiment e);
std::optional<Experiment> experiment_parse(const std::string& s);

enum class Format { csv, json };

struct ExperimentConfig {
  Experiment experiment = Experiment::selftest;
  std::vector<std::uint64_t> n_values;     // n for maverick, n list for sweep,
                                           // environment sizes for decoherence
  ExactProb p = ExactProb(1, 2);
  ExactProb epsilon = ExactProb(1, 10);
  std::vector<BigRat> alphas = {BigRat(0), BigRat(1)};
  ExactProb gamma = ExactProb(1, 2);
  std::vector<BigRat> a_values = {BigRat(7, 10)};  // ratefn thresholds
  measures::Mode mode = measures::Mode::exact;
  measures::MaverickRule::Cmp comparison = measures::MaverickRule::Cmp::strict;
  Format format = Format::csv;
  std::string out;  // output path; empty picks <experiment>.<format>, "-" is stdout
  std::uint64_t cap = measures::kDefaultExactCap;

  bool operator==(const ExperimentConfig& o) const = default;

  /// Canonical text form, fixed key order, every field explicit.
  std::string serialize() const;

  /// Output path with the default applied.
  std::string resolved_out() const;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;  // set only when errors is empty
  std::vector<std::string> errors;
};

/// Parses and validates a config document. Unknown keys, malformed values,
/// and out-of-range values are all collected; nothing short-circuits.
ParseResult parse_config(const std::string& text);

/// Applies key = value overrides (command-line flags) on top of a base
/// config, then re-validates. Same error contract as parse_config.
ParseResult apply_overrides(ExperimentConfig base,
                            const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace branchlab::harness
