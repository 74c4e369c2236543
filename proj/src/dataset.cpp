#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mied/rng.hpp"
#include "mied/target.hpp"

namespace mied {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    auto begin = cell.find_first_not_of(" \t\r");
    auto end = cell.find_last_not_of(" \t\r");
    cells.push_back(begin == std::string::npos ? "" : cell.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_number(const std::string& cell, int row, const std::string& column) {
  try {
    size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("load_csv_dataset: non-numeric cell '" + cell + "' in column '" +
                             column + "', data row " + std::to_string(row));
  }
}

double map_label(double raw) {
  if (raw == 0.0 || raw == -1.0) return -1.0;
  if (raw == 1.0) return 1.0;
  throw std::runtime_error("load_csv_dataset: unknown label value " + std::to_string(raw) +
                           " (expected 0/1 or -1/+1)");
}

}  // namespace

LabeledDataset make_dataset(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                            double split_fraction, std::uint64_t seed) {
  const Eigen::Index m = features.rows();
  if (m == 0) throw std::invalid_argument("make_dataset: empty dataset");
  if (labels.size() != m) throw std::invalid_argument("make_dataset: label count mismatch");
  if (!(split_fraction >= 0.0 && split_fraction <= 1.0))
    throw std::invalid_argument("make_dataset: split_fraction must be in [0, 1]");
  if (!features.allFinite()) throw std::invalid_argument("make_dataset: non-finite feature");

  LabeledDataset ds;
  ds.features = features;
  ds.labels = labels;

  // Fisher-Yates shuffle driven by the seeded stream, then a prefix split.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (Eigen::Index i = m - 1; i > 0; --i) {
    auto j = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[i], order[j]);
  }
  auto n_train = static_cast<Eigen::Index>(std::llround(split_fraction * static_cast<double>(m)));
  n_train = std::clamp<Eigen::Index>(n_train, 0, m);
  ds.train_indices.assign(order.begin(), order.begin() + n_train);
  ds.test_indices.assign(order.begin() + n_train, order.end());

  // Standardize with train statistics only; constant columns become zeros.
  const Eigen::Index d = features.cols();
  for (Eigen::Index c = 0; c < d; ++c) {
    double mean = 0.0;
    for (int idx : ds.train_indices) mean += features(idx, c);
    if (!ds.train_indices.empty()) mean /= static_cast<double>(ds.train_indices.size());
    double var = 0.0;
    for (int idx : ds.train_indices) {
      double delta = features(idx, c) - mean;
      var += delta * delta;
    }
    if (!ds.train_indices.empty()) var /= static_cast<double>(ds.train_indices.size());
    double scale = 1.0 / std::sqrt(std::max(var, 1e-12));
    ds.features.col(c) = (features.col(c).array() - mean) * scale;
  }
  return ds;
}

LabeledDataset load_csv_dataset(const std::string& path, const std::string& label_column,
                                double split_fraction, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv_dataset: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv_dataset: empty file");
  std::vector<std::string> header = split_csv_line(line);
  int label_idx = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = static_cast<int>(i);
  if (label_idx < 0)
    throw std::runtime_error("load_csv_dataset: label column '" + label_column + "' not found");

  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  int row_no = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row_no;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("load_csv_dataset: row " + std::to_string(row_no) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    std::vector<double> feats;
    feats.reserve(header.size() - 1);
    for (size_t c = 0; c < cells.size(); ++c) {
      double v = parse_number(cells[c], row_no, header[c]);
      if (static_cast<int>(c) == label_idx)
        labels.push_back(map_label(v));
      else
        feats.push_back(v);
    }
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw std::runtime_error("load_csv_dataset: no data rows");

  Eigen::MatrixXd features(rows.size(), rows[0].size());
  Eigen::VectorXd label_vec(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) features(i, j) = rows[i][j];
    label_vec[static_cast<Eigen::Index>(i)] = labels[i];
  }
  return make_dataset(features, label_vec, split_fraction, seed);
}

}  // namespace mied
