// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>

#include "ibp/feature_matrix.hpp"
#include "ibp/hyper.hpp"
#include "ibp/random.hpp"

namespace ibp {

struct HeldoutResult {
  double joint_ll = 0.0;
  FeatureMatrix z;
};

/// Held-out joint log-likelihood under point parameters (A, pi, sigma_x): each
/// row's z starts at independent Bernoulli(pi_k) draws, is refined by
/// `gibbs_passes` uncollapsed sweeps, and contributes
/// log P(x | z, A, sigma_x) + sum_k log Bernoulli(z_k; pi_k).
HeldoutResult heldout_impute(const Eigen::MatrixXd& x_test, const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& pi, const HyperParams& hyper,
                             int gibbs_passes, RngStream& rng);

double heldout_joint_loglik(const Eigen::MatrixXd& x_test, const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& pi, const HyperParams& hyper,
                            int gibbs_passes, RngStream& rng);

/// Train-side joint log P(X, Z) = log_lik_full + log_ibp_prior.
double train_joint_loglik(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                          const Eigen::MatrixXd& a, double sigma_x, double alpha);

/// Pinned-K variant with the finite beta-Bernoulli prior in place of the
/// buffet prior.
double train_joint_loglik_finite(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                                 const Eigen::MatrixXd& a, double sigma_x,
                                 double pseudo_count);

}  // namespace ibp
