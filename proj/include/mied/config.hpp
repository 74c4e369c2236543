#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mied {

/// Flat `key = value` configuration with dotted section names. Lines starting
/// with '#' and blank lines are ignored. Keys are tracked in first-seen order
/// so a config can be echoed back verbatim.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_seed(const std::string& key) const;
  /// Comma-separated list of doubles.
  Eigen::VectorXd get_vector(const std::string& key) const;
  /// Semicolon-separated rows of comma-separated doubles.
  Eigen::MatrixXd get_matrix(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  /// `key = value` lines in insertion order.
  std::vector<std::string> lines() const;

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

}  // namespace mied
