#include "branchlab/csv.hpp"

#include <stdexcept>

namespace branchlab::csv {

namespace {

void check_field(const std::string& field) {
  for (char c : field)
    if (c == ',' || c == '"' || c == '\n' || c == '\r')
      throw std::invalid_argument("field contains a delimiter: '" + field + "'");
}

void append_row(std::string& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    check_field(row[i]);
    if (i > 0) out += ',';
    out += row[i];
  }
  out += '\n';
}

}  // namespace

std::string emit(const Table& table) {
  if (table.columns.empty()) throw std::invalid_argument("table needs at least one column");
  std::string out;
  append_row(out, table.columns);
  for (const Row& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("row arity differs from the header");
    append_row(out, row);
  }
  return out;
}

}  // namespace branchlab::csv
