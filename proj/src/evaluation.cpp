// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/evaluation.hpp"

#include <cmath>

#include "ibp/model.hpp"
#include "ibp/samplers.hpp"

namespace ibp {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;
}

HeldoutResult heldout_impute(const Eigen::MatrixXd& x_test, const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& pi, const HyperParams& hyper,
                             int gibbs_passes, RngStream& rng) {
  const int n = static_cast<int>(x_test.rows());
  const int d = static_cast<int>(x_test.cols());
  const int k = static_cast<int>(a.rows());
  const double sx = hyper.sigma_x;
  HeldoutResult result{0.0, FeatureMatrix(n)};
  for (int j = 0; j < k; ++j) result.z.append_column();

  const double row_const = -0.5 * d * (kLogTwoPi + 2.0 * std::log(sx));
  for (int row = 0; row < n; ++row) {
    std::vector<std::uint8_t> z(k);
    for (int j = 0; j < k; ++j) z[j] = rng.bernoulli(pi[j]) ? 1 : 0;
    RowContext ctx = make_row_context(x_test.row(row), std::move(z), a);
    for (int pass = 0; pass < gibbs_passes; ++pass) {
      uncollapsed_row_sweep(ctx, a, pi, sx, rng);
    }
    double row_ll = row_const - ctx.residual.squaredNorm() / (2.0 * sx * sx);
    for (int j = 0; j < k; ++j) {
      row_ll += ctx.z[j] ? std::log(pi[j]) : std::log1p(-pi[j]);
      result.z.set(row, j, ctx.z[j] != 0);
    }
    result.joint_ll += row_ll;
  }
  return result;
}

double heldout_joint_loglik(const Eigen::MatrixXd& x_test, const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& pi, const HyperParams& hyper,
                            int gibbs_passes, RngStream& rng) {
  return heldout_impute(x_test, a, pi, hyper, gibbs_passes, rng).joint_ll;
}

double train_joint_loglik(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                          const Eigen::MatrixXd& a, double sigma_x, double alpha) {
  return log_lik_full(x, z, a, sigma_x) + log_ibp_prior(z, alpha);
}

double train_joint_loglik_finite(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                                 const Eigen::MatrixXd& a, double sigma_x,
                                 double pseudo_count) {
  return log_lik_full(x, z, a, sigma_x) +
         log_finite_bb_prior(z.counts(), z.n_rows(), pseudo_count);
}

}  // namespace ibp
