#pragma once

#include <string>
#include <vector>

namespace regemp::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

/// Reads a comma-separated file with a mandatory header row. Fields are
/// trimmed of surrounding whitespace; quoting is not supported (none of the
/// formats here need it). Blank lines are skipped.
Table read_file(const std::string& path);

void write_file(const std::string& path, const Table& table);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

double parse_double(const std::string& text, const std::string& context);
int parse_int(const std::string& text, const std::string& context);

}  // namespace regemp::csv
