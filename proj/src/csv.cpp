#include "mied/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mied {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  for (const auto& c : table.comments) out << "# " << c << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ",";
    out << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::runtime_error("write_csv: row width does not match header");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_double(row[i]);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: failed while writing '" + path + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
      table.comments.push_back(line.substr(start));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_seen) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      double v = std::stod(cell, &pos);
      if (pos != cell.size())
        throw std::runtime_error("read_csv: bad numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("read_csv: ragged row in '" + path + "'");
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error("read_csv: no header row in '" + path + "'");
  return table;
}

}  // namespace mied
