#pragma once

#include "motoclass/types.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace motoclass::csv {

/// 6 significant digits for reports, 17 for round-trip-exact storage.
inline std::string format_double(double v, bool full_precision = false) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), full_precision ? "%.17g" : "%.6g", v);
  return buf;
}

/// Quotes a cell when it contains separators, quotes or newlines.
inline std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Splits one line into cells, honoring quoted cells with doubled quotes.
inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw InvalidInputError("csv: unterminated quote: " + line);
  cells.push_back(cell);
  return cells;
}

/// Strips a trailing CR (files written on other platforms).
inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace motoclass::csv
