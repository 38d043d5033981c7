#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace deltakit::csv {

/// Comma-separated table with a mandatory header row. Cells are kept as
/// text; numeric parsing is explicit so errors carry row/column context.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name, -1 when absent.
  int column(std::string_view name) const;
  /// Column index by header name; throws InputError when absent.
  int require_column(std::string_view name, std::string_view file) const;
};

Table parse(std::string_view text, std::string_view origin = "<memory>");
Table read(const std::filesystem::path& path);

/// Writes header + rows; an optional '#'-prefixed comment line documents the
/// columns above the header. Creates parent directories.
void write(const std::filesystem::path& path, const Table& table,
           std::string_view comment = {});

/// Shortest round-trip formatting: parse(format(x)) == x exactly, so data
/// files survive write→read cycles without loss.
std::string format_double(double value);

/// Strict double parse; throws InputError mentioning `context`.
double parse_double(std::string_view cell, std::string_view context);

/// Strict integer parse; throws InputError mentioning `context`.
long parse_long(std::string_view cell, std::string_view context);

}  // namespace deltakit::csv
