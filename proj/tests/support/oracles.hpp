// Apache License, Version 2.0, refer to LICENSE.txt
//
// Independent oracles used by the test suites. Everything here recomputes its
// target quantity by brute force (Monte Carlo integration, path enumeration,
// entrywise sums) without touching the code paths under test.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ibp/feature_matrix.hpp"
#include "ibp/random.hpp"

namespace oracle {

constexpr double kLogTwoPi = 1.8378770664093454836;

inline double mean(const std::vector<double>& v) {
  double total = 0.0;
  for (const double x : v) total += x;
  return total / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double total = 0.0;
  for (const double x : v) total += (x - m) * (x - m);
  return std::sqrt(total / static_cast<double>(v.size() - 1));
}

inline double std_err(const std::vector<double>& v) {
  return sample_sd(v) / std::sqrt(static_cast<double>(v.size()));
}

/// Entrywise sum of scalar Gaussian log densities; oracle for log_lik_full.
inline double entrywise_gaussian_loglik(const Eigen::MatrixXd& x,
                                        const Eigen::MatrixXd& mean_matrix,
                                        double sigma) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double z = (x(r, c) - mean_matrix(r, c)) / sigma;
      total += -0.5 * kLogTwoPi - std::log(sigma) - 0.5 * z * z;
    }
  }
  return total;
}

struct McEstimate {
  double log_mean = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo estimate of log integral P(X | Z, A) P(A) dA by sampling A from
/// its prior; the standard error of the log is by the delta method.
inline McEstimate mc_collapsed_loglik(const Eigen::MatrixXd& x, const ibp::FeatureMatrix& z,
                                      double sigma_x, double sigma_a, int samples,
                                      ibp::RngStream& rng) {
  const int k = z.n_cols();
  const int d = static_cast<int>(x.cols());
  const Eigen::MatrixXd zd = z.dense();
  std::vector<double> logs(samples);
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXd a(k, d);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = sigma_a * rng.normal();
    }
    const Eigen::MatrixXd mean_matrix =
        k > 0 ? Eigen::MatrixXd(zd * a) : Eigen::MatrixXd::Zero(x.rows(), d);
    logs[s] = entrywise_gaussian_loglik(x, mean_matrix, sigma_x);
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> weights(samples);
  for (int s = 0; s < samples; ++s) weights[s] = std::exp(logs[s] - top);
  const double w_mean = mean(weights);
  const double w_se = std_err(weights);
  return {top + std::log(w_mean), w_se / w_mean};
}

/// Restaurant path enumeration for N = 2 with per-row births capped. Classes
/// are multisets of column patterns; the key counts columns of pattern (1,1),
/// (1,0), (0,1).
struct RestaurantClass {
  int both = 0;
  int first_only = 0;
  int second_only = 0;
  auto operator<=>(const RestaurantClass&) const = default;
};

struct RestaurantEnumeration {
  std::map<RestaurantClass, double> probability;
  double total_mass = 0.0;
};

inline double poisson_pmf(double mean, int k) {
  return std::exp(-mean + k * std::log(mean > 0 ? mean : 1.0) -
                  std::lgamma(static_cast<double>(k) + 1.0)) *
         (mean == 0.0 && k > 0 ? 0.0 : 1.0);
}

inline double binomial_coefficient(int n, int k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(n - k + 1.0)));
}

inline RestaurantEnumeration enumerate_restaurant_two_rows(double alpha, int max_births) {
  RestaurantEnumeration out;
  for (int j1 = 0; j1 <= max_births; ++j1) {
    const double p1 = poisson_pmf(alpha, j1);
    for (int taken = 0; taken <= j1; ++taken) {
      // Row 2 takes each row-1 dish independently with probability 1/2.
      const double p_take = binomial_coefficient(j1, taken) * std::pow(0.5, j1);
      for (int j2 = 0; j2 <= max_births; ++j2) {
        const double p2 = poisson_pmf(alpha / 2.0, j2);
        const double p = p1 * p_take * p2;
        out.probability[{taken, j1 - taken, j2}] += p;
        out.total_mass += p;
      }
    }
  }
  return out;
}

/// A representative matrix of the class, columns in creation order.
inline ibp::FeatureMatrix restaurant_class_matrix(const RestaurantClass& c) {
  ibp::FeatureMatrix z(2);
  for (int i = 0; i < c.both; ++i) {
    const int k = z.append_column();
    z.set(0, k, true);
    z.set(1, k, true);
  }
  for (int i = 0; i < c.first_only; ++i) {
    const int k = z.append_column();
    z.set(0, k, true);
  }
  for (int i = 0; i < c.second_only; ++i) {
    const int k = z.append_column();
    z.set(1, k, true);
  }
  return z;
}

/// Multivariate normal log density with a dense covariance.
inline double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& cov) {
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd diff = x - mu;
  const Eigen::VectorXd solved = llt.solve(diff);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (x.size() * kLogTwoPi + log_det + diff.dot(solved));
}

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    p += sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Total variation distance between two distributions on indexed states.
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace oracle
