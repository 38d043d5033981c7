#include "deltakit/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deltakit/errors.hpp"

namespace deltakit::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(begin)));
      break;
    }
    cells.push_back(trim(line.substr(begin, comma - begin)));
    begin = comma + 1;
  }
  return cells;
}

}  // namespace

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int Table::require_column(std::string_view name, std::string_view file) const {
  const int idx = column(name);
  if (idx < 0) {
    throw InputError(std::string(file) + ": missing required column '" +
                     std::string(name) + "'");
  }
  return idx;
}

Table parse(std::string_view text, std::string_view origin) {
  Table table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                      : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InputError(std::string(origin) + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(table.header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) {
    throw InputError(std::string(origin) + ": missing header row");
  }
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void write(const std::filesystem::path& path, const Table& table,
           std::string_view comment) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  if (!comment.empty()) out << "# " << comment << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
  if (!out) throw InputError("short write to " + path.string());
}

std::string format_double(double value) {
  // Shortest digit string that parses back to exactly the same double.
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view cell, std::string_view context) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw InputError(std::string(context) + ": '" + std::string(cell) +
                     "' is not a number");
  }
  return value;
}

long parse_long(std::string_view cell, std::string_view context) {
  long value = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw InputError(std::string(context) + ": '" + std::string(cell) +
                     "' is not an integer");
  }
  return value;
}

}  // namespace deltakit::csv
