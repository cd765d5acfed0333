// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ibp {

namespace {

// One string per glyph, 36 characters row-major on the 6x6 grid.
constexpr const char* kGlyphs[4] = {
    // top-left box outline
    "111000"
    "101000"
    "111000"
    "000000"
    "000000"
    "000000",
    // top-right plus
    "000010"
    "000111"
    "000010"
    "000000"
    "000000"
    "000000",
    // bottom-left triangle
    "000000"
    "000000"
    "000000"
    "100000"
    "110000"
    "111000",
    // bottom-right cross
    "000000"
    "000000"
    "000000"
    "000101"
    "000010"
    "000101",
};

}  // namespace

const Eigen::MatrixXd& cambridge_templates() {
  static const Eigen::MatrixXd templates = [] {
    Eigen::MatrixXd t(4, 36);
    for (int k = 0; k < 4; ++k) {
      for (int p = 0; p < 36; ++p) t(k, p) = kGlyphs[k][p] == '1' ? 1.0 : 0.0;
    }
    return t;
  }();
  return templates;
}

CambridgeData generate_cambridge(int n_rows, double noise_sigma,
                                 double feature_probability, RngStream& rng) {
  if (n_rows < 1) throw std::invalid_argument("generate_cambridge: n_rows must be >= 1");
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("generate_cambridge: noise must be >= 0");
  }
  if (feature_probability <= 0.0 || feature_probability >= 1.0) {
    throw std::invalid_argument("generate_cambridge: feature probability must be in (0,1)");
  }
  CambridgeData data{Eigen::MatrixXd(n_rows, 36), FeatureMatrix(n_rows),
                     cambridge_templates(), {}};
  for (int k = 0; k < 4; ++k) data.z.append_column();
  for (int n = 0; n < n_rows; ++n) {
    // Redraw until at least one glyph is active.
    for (;;) {
      bool any = false;
      bool draw[4];
      for (int k = 0; k < 4; ++k) {
        draw[k] = rng.bernoulli(feature_probability);
        any |= draw[k];
      }
      if (!any) continue;
      for (int k = 0; k < 4; ++k) data.z.set(n, k, draw[k]);
      break;
    }
  }
  data.x = data.z.dense() * data.a;
  for (int n = 0; n < n_rows; ++n) {
    for (int p = 0; p < 36; ++p) data.x(n, p) += noise_sigma * rng.normal();
  }
  data.meta.noise = noise_sigma;
  data.meta.n_rows = n_rows;
  data.meta.d = 36;
  data.meta.n_features = 4;
  return data;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split_train_test(const Eigen::MatrixXd& x,
                                                             double test_fraction) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw std::invalid_argument("split_train_test: fraction must be in [0,1)");
  }
  const int n = static_cast<int>(x.rows());
  const int n_test = static_cast<int>(std::llround(n * test_fraction));
  return {x.topRows(n - n_test), x.bottomRows(n_test)};
}

void write_dataset_csv(const std::string& path, const Eigen::MatrixXd& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot open '" + path + "' for writing");
  char buffer[40];
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", x(r, c));
      out << (c == 0 ? "" : ",") << buffer;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("dataset: write failed for '" + path + "'");
}

Eigen::MatrixXd read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream split(line);
    std::string field;
    while (std::getline(split, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw std::runtime_error("dataset: line " + std::to_string(line_number) +
                                 ": bad value '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("dataset: line " + std::to_string(line_number) +
                               ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("dataset: '" + path + "' has no rows");
  Eigen::MatrixXd x(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) x(r, c) = rows[r][c];
  }
  return x;
}

std::string meta_path_for(const std::string& dataset_path) {
  const auto dot = dataset_path.find_last_of('.');
  const auto slash = dataset_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return dataset_path + ".meta";
  }
  return dataset_path.substr(0, dot) + ".meta";
}

void write_dataset_meta(const std::string& path, const DatasetMeta& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dataset: cannot open '" + path + "' for writing");
  char noise[40];
  std::snprintf(noise, sizeof(noise), "%.17g", meta.noise);
  out << "seed=" << meta.seed << '\n'
      << "noise=" << noise << '\n'
      << "n_rows=" << meta.n_rows << '\n'
      << "d=" << meta.d << '\n'
      << "n_features=" << meta.n_features << '\n';
}

DatasetMeta read_dataset_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataset: cannot open '" + path + "'");
  DatasetMeta meta;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("dataset meta: line " + std::to_string(line_number) +
                               ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "seed") meta.seed = std::stoull(value);
      else if (key == "noise") meta.noise = std::stod(value);
      else if (key == "n_rows") meta.n_rows = std::stoi(value);
      else if (key == "d") meta.d = std::stoi(value);
      else if (key == "n_features") meta.n_features = std::stoi(value);
      else throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw std::runtime_error("dataset meta: line " + std::to_string(line_number) +
                               ": bad entry '" + line + "'");
    }
  }
  return meta;
}

}  // namespace ibp
