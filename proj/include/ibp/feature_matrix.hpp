// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ibp {

/// Binary assignment matrix Z with a fixed row count and a dynamic set of
/// columns. Per-column active counts m_k are cached and kept in sync with
/// every mutation.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(int n_rows);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return static_cast<int>(columns_.size()); }

  bool get(int row, int col) const { return columns_[col][row] != 0; }
  void set(int row, int col, bool value);

  /// Active count m_k of column k.
  int count(int col) const { return counts_[col]; }
  const std::vector<int>& counts() const { return counts_; }

  /// Appends an all-zero column; returns its index.
  int append_column();
  /// Appends a column given as 0/1 bytes of length n_rows().
  int append_column(const std::vector<std::uint8_t>& column);

  void remove_column(int col);
  /// Keeps exactly the listed columns, in the listed order.
  void keep_columns(const std::vector<int>& keep);
  void clear() { columns_.clear(); counts_.clear(); }

  const std::vector<std::uint8_t>& column(int col) const { return columns_[col]; }
  std::vector<std::uint8_t> row(int r) const;
  void set_row(int r, const std::vector<std::uint8_t>& values);

  Eigen::MatrixXd dense() const;

  /// True when every cached count equals its recomputed column sum.
  bool counts_consistent() const;

  bool operator==(const FeatureMatrix& other) const = default;

 private:
  int n_rows_;
  std::vector<std::vector<std::uint8_t>> columns_;
  std::vector<int> counts_;
};

}  // namespace ibp
