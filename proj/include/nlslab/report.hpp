#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlslab::report {

enum class Format { Csv, Json };

std::string_view to_string(Format f);

using Value = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// A homogeneous record list: every row has one value per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
};

/// Numbers use 17 significant digits. CSV follows RFC 4180 quoting; JSON is
/// an array of flat objects with non-finite numbers written as null.
std::string to_csv(const Table& t);
std::string to_json(const Table& t);
std::string render(const Table& t, Format f);

/// Writes to a temporary file next to `path` and renames it into place.
/// Throws IoError on failure.
void write_atomic(const std::string& path, std::string_view content);

void emit_report(const Table& t, Format f, const std::string& path);

}  // namespace nlslab::report
