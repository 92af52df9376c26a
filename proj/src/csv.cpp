#include "ellgof/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ellgof/errors.hpp"

namespace ellgof {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_cell(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cells;
}

}  // namespace

Sample parse_csv(std::string_view text, const std::string& origin) {
  std::vector<std::pair<int, std::string_view>> lines;  // (1-based row, content)
  {
    std::size_t start = 0;
    int row = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        ++row;
        std::string_view line = text.substr(start, i - start);
        if (!trim(line).empty()) lines.emplace_back(row, line);
        start = i + 1;
      }
    }
  }
  if (lines.empty()) {
    throw data_error(origin + ": empty CSV input");
  }

  // Header detection: if any cell of the first row fails numeric parsing,
  // treat the whole row as a header.
  std::size_t first_data = 0;
  {
    double v;
    for (auto cell : split_line(lines[0].second)) {
      if (!parse_cell(cell, v)) {
        first_data = 1;
        break;
      }
    }
  }
  if (first_data == lines.size()) {
    throw data_error(origin + ": no data rows after the header");
  }

  const int p = static_cast<int>(split_line(lines[first_data].second).size());
  const int n = static_cast<int>(lines.size() - first_data);
  Sample out(n, p);
  for (int i = 0; i < n; ++i) {
    const auto& [row_no, line] = lines[first_data + i];
    const auto cells = split_line(line);
    if (static_cast<int>(cells.size()) != p) {
      throw data_error(origin + ": row " + std::to_string(row_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(p));
    }
    for (int j = 0; j < p; ++j) {
      double v;
      if (!parse_cell(cells[j], v) || !std::isfinite(v)) {
        throw data_error(origin + ": row " + std::to_string(row_no) + ", column " +
                         std::to_string(j + 1) + ": not a finite number: '" +
                         std::string(trim(cells[j])) + "'");
      }
      out.at(i, j) = v;
    }
  }
  return out;
}

Sample load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open CSV file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

void write_csv(const Sample& x, std::ostream& os,
               const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) os << ',';
      os << header[j];
    }
    os << '\n';
  }
  char buf[32];
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.p; ++j) {
      if (j) os << ',';
      std::snprintf(buf, sizeof buf, "%.17g", x.at(i, j));
      os << buf;
    }
    os << '\n';
  }
}

void save_csv(const Sample& x, const std::string& path,
              const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  write_csv(x, out, header);
}

}  // namespace ellgof
