// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ibp/feature_matrix.hpp"
#include "ibp/hyper.hpp"
#include "ibp/model.hpp"
#include "ibp/random.hpp"

namespace ibp {

/// One observation row during an uncollapsed sweep: data, instantiated
/// assignments, and the cached residual x - z A.
struct RowContext {
  Eigen::RowVectorXd x;
  std::vector<std::uint8_t> z;
  Eigen::RowVectorXd residual;
};

RowContext make_row_context(Eigen::RowVectorXd x, std::vector<std::uint8_t> z,
                            const Eigen::MatrixXd& a);

/// Resamples each instantiated Z_nk in order from the two-point conditional
/// with weights pi_k P(x | z:k=1, A) and (1 - pi_k) P(x | z:k=0, A). The
/// residual is updated incrementally per flip.
void uncollapsed_row_sweep(RowContext& ctx, const Eigen::MatrixXd& a,
                           const Eigen::VectorXd& pi, double sigma_x, RngStream& rng);

/// Locally-born features still in the collapsed partition. Column order is
/// birth order; birth_ids carries a monotone id per column.
struct TailState {
  FeatureMatrix columns;
  std::vector<long> birth_ids;
  long next_birth_id = 0;

  explicit TailState(int n_rows) : columns(n_rows) {}
  int n_cols() const { return columns.n_cols(); }
};

struct SweepOptions {
  bool births = true;
  bool prune = true;
  /// Finite-model regularization a0 = alpha / K for pinned-K runs; 0 gives
  /// the buffet-limit weights (m_k - Z_nk) / N.
  double prior_pseudo_count = 0.0;
};

/// One collapsed Gibbs pass over the tail columns of a shard: for every local
/// row and tail column, Z_nk is resampled with prior weight
/// (m_k - Z_nk) / n_total against the collapsed marginal of the shard residual
/// X - Z+ A+, dead columns are pruned immediately, and a Metropolis-Hastings
/// birth step runs after each row.
void collapsed_tail_sweep(const Eigen::MatrixXd& x_shard, const FeatureMatrix& z_inst,
                          const Eigen::MatrixXd& a_inst, TailState& tail,
                          const HyperParams& hyper, int n_total, RngStream& rng);

/// Draws K_new ~ Poisson(alpha / n_total) and proposes replacing the row's
/// singleton tail columns with K_new fresh columns active only in that row,
/// accepting on the collapsed marginal ratio (the Poisson terms cancel).
void propose_new_features(const Eigen::MatrixXd& residual, int row, TailState& tail,
                          double alpha, int n_total, const HyperParams& hyper,
                          RngStream& rng);

/// One sweep of the fully collapsed single-machine baseline over all of Z.
void collapsed_reference_sweep(const Eigen::MatrixXd& x, FeatureMatrix& z,
                               const HyperParams& hyper, RngStream& rng,
                               const SweepOptions& options = {});

/// 1 / (1 + exp(log_w_off - log_w_on)), with zero-weight edge cases.
double two_point_on_probability(double log_w_on, double log_w_off);

/// The exact two-point collapsed conditional P(T_nk = 1 | rest) used by the
/// sweeps, recomputed from scratch. Exposed for verification against the
/// incremental path.
double tail_on_probability(const Eigen::MatrixXd& residual, const FeatureMatrix& tail,
                           int row, int col, int n_total, const HyperParams& hyper,
                           double prior_pseudo_count = 0.0);

}  // namespace ibp
