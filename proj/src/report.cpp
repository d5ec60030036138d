#include "rqsl/report.hpp"

#include <cmath>
#include <cstdio>

#include "rqsl/errors.hpp"

namespace rqsl::io {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string value_to_csv(const Value& v) {
  struct Visitor {
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return csv_escape(x); }
  };
  return std::visit(Visitor{}, v);
}

std::string value_to_json(const Value& v) {
  struct Visitor {
    std::string operator()(double x) const {
      if (std::isnan(x)) return "\"nan\"";
      if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
      return format_real(x);
    }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return json_escape(x); }
  };
  return std::visit(Visitor{}, v);
}

void check_shape(const Table& table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw InvalidArgument("table row width does not match the column count");
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string render(const Table& table, OutputFormat format) {
  check_shape(table);
  std::string out;
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += csv_escape(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += value_to_csv(row[c]);
      }
      out += '\n';
    }
    return out;
  }
  out += "[\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += "  {";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ", ";
      out += json_escape(table.columns[c]);
      out += ": ";
      out += value_to_json(table.rows[r][c]);
    }
    out += r + 1 < table.rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void write_table(std::ostream& os, const Table& table, OutputFormat format) {
  os << render(table, format);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw InvalidArgument("unknown output format '" + name + "' (expected csv or json)");
}

}  // namespace rqsl::io
