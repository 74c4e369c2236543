#include "mied/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mied {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  return begin == std::string::npos ? "" : s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" + raw + "'");
  }
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(line_no) +
                               " is not 'key = value': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
    cfg.set(key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Config::set(const std::string& key, const std::string& value) {
  if (values_.find(key) == values_.end()) order_.push_back(key);
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::runtime_error("config: missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long(const std::string& key) const {
  double v = get_double(key);
  auto l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw std::runtime_error("config: key '" + key + "' must be an integer");
  return l;
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::uint64_t Config::get_seed(const std::string& key) const {
  long v = get_long(key);
  if (v < 0) throw std::runtime_error("config: key '" + key + "' must be a nonnegative seed");
  return static_cast<std::uint64_t>(v);
}

Eigen::VectorXd Config::get_vector(const std::string& key) const {
  std::string raw = get_string(key);
  std::vector<double> parts;
  std::stringstream ss(raw);
  std::string cell;
  while (std::getline(ss, cell, ',')) parts.push_back(parse_double(key, trim(cell)));
  if (parts.empty()) throw std::runtime_error("config: key '" + key + "' is an empty list");
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parts[i];
  return v;
}

Eigen::MatrixXd Config::get_matrix(const std::string& key) const {
  std::string raw = get_string(key);
  std::vector<std::vector<double>> rows;
  std::stringstream ss(raw);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<double> cells;
    std::stringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) cells.push_back(parse_double(key, trim(cell)));
    if (!cells.empty()) rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw std::runtime_error("config: key '" + key + "' is an empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::runtime_error("config: key '" + key + "' has ragged rows");
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::vector<std::string> Config::lines() const {
  std::vector<std::string> out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.push_back(key + " = " + values_.at(key));
  return out;
}

}  // namespace mied
