#pragma once

// Tabular result records with CSV and JSON rendering. Both formats share one
// number formatter (17 significant digits) so artifacts round-trip and
// identical runs stay byte-identical.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rqsl::io {

using Value = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

enum class OutputFormat { Csv, Json };

// One header row plus data rows; every row must match the column count.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

std::string format_real(double x);

// CSV: single header row, RFC-style quoting where needed. JSON: array of
// objects keyed by column, with non-finite reals emitted as the quoted
// strings "nan", "inf", "-inf".
std::string render(const Table& table, OutputFormat format);
void write_table(std::ostream& os, const Table& table, OutputFormat format);

OutputFormat parse_format(const std::string& name);  // "csv" | "json"

}  // namespace rqsl::io
