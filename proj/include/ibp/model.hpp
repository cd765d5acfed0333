// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ibp/feature_matrix.hpp"
#include "ibp/hyper.hpp"
#include "ibp/random.hpp"

namespace ibp {

/// H_n = sum_{i=1..n} 1/i.
double harmonic_number(int n);

/// Draws Z from the IBP prior by the sequential buffet scheme: row 1 opens
/// Poisson(alpha) columns, row n joins column k with probability m_k / n and
/// opens Poisson(alpha / n) new columns. Columns appear in creation order.
FeatureMatrix sample_ibp_restaurant(int n_rows, double alpha, RngStream& rng);

/// Log prior mass of Z under the exchangeable-class convention: columns born
/// in the same row are unordered, so duplicated column patterns divide the
/// mass by the factorial of their multiplicity. Rejects all-zero columns.
double log_ibp_prior(const FeatureMatrix& z, double alpha);

/// Log marginal of Z under the finite K-feature beta-Bernoulli model with
/// per-feature pseudo count a0 (= alpha / K), pi integrated out.
double log_finite_bb_prior(const std::vector<int>& counts, int n_rows, double pseudo_count);

struct FiniteBetaBernoulliDraw {
  Eigen::VectorXd pi;
  FeatureMatrix z;
};

/// Finite-model draw: pi_k ~ Beta(alpha / K, 1), Z_nk ~ Bernoulli(pi_k).
FiniteBetaBernoulliDraw sample_finite_beta_bernoulli(int n_rows, int k, double alpha,
                                                     RngStream& rng);

/// Sum over entries of log Normal(X_nd; (ZA)_nd, sigma_x^2).
double log_lik_full(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                    const Eigen::MatrixXd& a, double sigma_x);

/// Sufficient statistics of (X, Z) for the collapsed marginal and the
/// loadings posterior: G = Z^T Z, W = Z^T X, and tr(X^T X).
struct CollapsedStats {
  Eigen::MatrixXd ztz;
  Eigen::MatrixXd ztx;
  double x_sq_norm = 0.0;
  int n_rows = 0;
  int d = 0;
};

CollapsedStats collapsed_stats(const Eigen::MatrixXd& x, const FeatureMatrix& z);

/// log integral P(X | Z, A) P(A) dA with A_k ~ Normal(0, sigma_a^2 I).
/// Evaluated through a Cholesky factorization of Z^T Z + (sigma_x^2/sigma_a^2) I.
double collapsed_log_lik(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                         double sigma_x, double sigma_a);
double collapsed_log_lik_stats(const CollapsedStats& stats, double sigma_x, double sigma_a);
double collapsed_log_lik_core(const Eigen::MatrixXd& ztz, const Eigen::MatrixXd& ztx,
                              double x_sq_norm, int n_rows, int d, double sigma_x,
                              double sigma_a);

/// Gaussian posterior of the loadings A given (X, Z): a K x D mean and one
/// K x K covariance shared by all D output dimensions.
struct LoadingsPosterior {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd covariance;
};

LoadingsPosterior posterior_loadings(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                                     double sigma_x, double sigma_a);
LoadingsPosterior posterior_loadings_stats(const Eigen::MatrixXd& ztz,
                                           const Eigen::MatrixXd& ztx, double sigma_x,
                                           double sigma_a);

/// Draws A from the posterior, each output dimension independently.
Eigen::MatrixXd sample_loadings(const LoadingsPosterior& posterior, RngStream& rng);

/// pi_k | Z ~ Beta(m_k, 1 + N - m_k) for instantiated features (m_k >= 1).
Eigen::VectorXd sample_pi(const std::vector<int>& counts, int n_rows, RngStream& rng);

/// Finite-model variant, pi_k ~ Beta(a0 + m_k, 1 + N - m_k); tolerates m_k = 0.
Eigen::VectorXd sample_pi_finite(const std::vector<int>& counts, int n_rows,
                                 double pseudo_count, RngStream& rng);

/// alpha | K+ ~ Gamma(a + K+, b + H_N).
double sample_alpha(int k_plus, int n_total, const GammaPrior& prior, RngStream& rng);

struct Variances {
  double sigma_x;
  double sigma_a;
};

/// One random-walk Metropolis move on log sigma_x and log sigma_a against the
/// conditional posterior given (X, Z, A) under log-uniform priors. Flags in
/// hyper.resample gate each move; disabled moves return the input unchanged.
Variances sample_variances(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                           const Eigen::MatrixXd& a, const HyperParams& hyper,
                           RngStream& rng);
Variances sample_variances_stats(double ssr, long nd, double a_sq_norm, long kd,
                                 const HyperParams& hyper, RngStream& rng);

}  // namespace ibp
