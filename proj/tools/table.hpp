#ifndef GENCS_TOOLS_TABLE_HPP
#define GENCS_TOOLS_TABLE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gencs::cli {

/// Empty cells stand for values that could not be computed; they become empty
/// CSV fields and JSON nulls. Non-finite doubles are stored as empty.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

Cell number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal that round-trips.
std::string format_double(double v);

/// RFC 4180: CRLF line ends, fields with comma, quote or line break quoted.
void write_csv(std::ostream& os, const Table& table);
std::string csv_field(const std::string& text);

/// Array of objects keyed by column name.
nlohmann::ordered_json table_json(const Table& table);
nlohmann::ordered_json cell_json(const Cell& cell);

}  // namespace gencs::cli

#endif  // GENCS_TOOLS_TABLE_HPP
