#pragma once

/**
 * Deterministic table rendering. Fields are plain strings; numbers must be
 * formatted upstream (rationals as num/den, log-scale reals via
 * format_fixed_sig), so two runs with equal inputs emit identical bytes.
 */

#include <string>
#include <vector>

namespace branchlab::csv {

using Row = std::vector<std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

/// Header plus rows, comma-separated, newline-terminated. Throws
/// std::invalid_argument when a row's arity differs from the header or a
/// field contains a comma, quote, or line break.
std::string emit(const Table& table);

}  // namespace branchlab::csv
