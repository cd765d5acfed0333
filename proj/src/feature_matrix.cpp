// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/feature_matrix.hpp"

#include <numeric>
#include <stdexcept>

namespace ibp {

FeatureMatrix::FeatureMatrix(int n_rows) : n_rows_(n_rows) {
  if (n_rows < 0) throw std::invalid_argument("FeatureMatrix: negative row count");
}

void FeatureMatrix::set(int row, int col, bool value) {
  std::uint8_t& cell = columns_[col][row];
  const std::uint8_t next = value ? 1 : 0;
  if (cell == next) return;
  counts_[col] += value ? 1 : -1;
  cell = next;
}

int FeatureMatrix::append_column() {
  columns_.emplace_back(n_rows_, std::uint8_t{0});
  counts_.push_back(0);
  return n_cols() - 1;
}

int FeatureMatrix::append_column(const std::vector<std::uint8_t>& column) {
  if (static_cast<int>(column.size()) != n_rows_) {
    throw std::invalid_argument("FeatureMatrix: column length mismatch");
  }
  int m = 0;
  for (const auto v : column) {
    if (v > 1) throw std::invalid_argument("FeatureMatrix: entries must be 0 or 1");
    m += v;
  }
  columns_.push_back(column);
  counts_.push_back(m);
  return n_cols() - 1;
}

void FeatureMatrix::remove_column(int col) {
  columns_.erase(columns_.begin() + col);
  counts_.erase(counts_.begin() + col);
}

void FeatureMatrix::keep_columns(const std::vector<int>& keep) {
  std::vector<std::vector<std::uint8_t>> columns;
  std::vector<int> counts;
  columns.reserve(keep.size());
  counts.reserve(keep.size());
  for (const int k : keep) {
    columns.push_back(std::move(columns_[k]));
    counts.push_back(counts_[k]);
  }
  columns_ = std::move(columns);
  counts_ = std::move(counts);
}

std::vector<std::uint8_t> FeatureMatrix::row(int r) const {
  std::vector<std::uint8_t> out(columns_.size());
  for (std::size_t k = 0; k < columns_.size(); ++k) out[k] = columns_[k][r];
  return out;
}

void FeatureMatrix::set_row(int r, const std::vector<std::uint8_t>& values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("FeatureMatrix: row length mismatch");
  }
  for (std::size_t k = 0; k < values.size(); ++k) set(r, static_cast<int>(k), values[k] != 0);
}

Eigen::MatrixXd FeatureMatrix::dense() const {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n_rows_, n_cols());
  for (int k = 0; k < n_cols(); ++k) {
    for (int n = 0; n < n_rows_; ++n) z(n, k) = columns_[k][n];
  }
  return z;
}

bool FeatureMatrix::counts_consistent() const {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    const int m = std::accumulate(columns_[k].begin(), columns_[k].end(), 0);
    if (m != counts_[k]) return false;
  }
  return true;
}

}  // namespace ibp
