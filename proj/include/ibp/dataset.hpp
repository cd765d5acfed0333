// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>

#include "ibp/feature_matrix.hpp"
#include "ibp/random.hpp"

namespace ibp {

struct DatasetMeta {
  std::uint64_t seed = 0;
  double noise = 0.5;
  int n_rows = 0;
  int d = 0;
  int n_features = 0;
};

/// Synthetic six-by-six image benchmark: rows are random subsets of four fixed
/// binary glyphs plus Gaussian pixel noise.
struct CambridgeData {
  Eigen::MatrixXd x;        // n_rows x 36
  FeatureMatrix z;          // generating assignments
  Eigen::MatrixXd a;        // the 4 x 36 glyph templates
  DatasetMeta meta;
};

/// The four corner glyphs, one per quadrant of the 6x6 grid; their active
/// pixels never overlap.
const Eigen::MatrixXd& cambridge_templates();

/// Each row activates each glyph independently with probability
/// feature_probability and is redrawn while all four are inactive.
CambridgeData generate_cambridge(int n_rows, double noise_sigma,
                                 double feature_probability, RngStream& rng);

/// Last `test_fraction` of the rows become the held-out block.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_train_test(const Eigen::MatrixXd& x,
                                                             double test_fraction);

void write_dataset_csv(const std::string& path, const Eigen::MatrixXd& x);
Eigen::MatrixXd read_dataset_csv(const std::string& path);

/// Companion key=value metadata; lives next to the CSV with a .meta extension.
std::string meta_path_for(const std::string& dataset_path);
void write_dataset_meta(const std::string& path, const DatasetMeta& meta);
DatasetMeta read_dataset_meta(const std::string& path);

}  // namespace ibp
