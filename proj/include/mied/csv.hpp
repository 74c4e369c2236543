#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mied {

/// Round-trip exact float formatting (17 significant digits).
std::string format_double(double v);

/// CSV table with optional '#'-prefixed header comment lines. Rows are
/// comma-separated, lines LF-terminated.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace mied
