// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ibp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd tail_row_vector(const FeatureMatrix& t, int row) {
  Eigen::VectorXd z(t.n_cols());
  for (int k = 0; k < t.n_cols(); ++k) z[k] = t.get(row, k) ? 1.0 : 0.0;
  return z;
}

/// Sufficient statistics G = T^T T, W = T^T R for the collapsed column block
/// T being swept, maintained incrementally across flips, deletions and births.
class SweptBlock {
 public:
  SweptBlock(const Eigen::MatrixXd& residual, TailState& tail, const HyperParams& hyper,
             int n_total, double prior_pseudo_count)
      : residual_(residual),
        tail_(tail),
        hyper_(hyper),
        n_total_(n_total),
        pseudo_(prior_pseudo_count) {
    const Eigen::MatrixXd t = tail_.columns.dense();
    g_ = t.transpose() * t;
    w_ = t.transpose() * residual_;
    rr_ = residual_.squaredNorm();
  }

  double log_marginal() const {
    return collapsed_log_lik_core(g_, w_, rr_, static_cast<int>(residual_.rows()),
                                  static_cast<int>(residual_.cols()), hyper_.sigma_x,
                                  hyper_.sigma_a);
  }

  double log_marginal_with(int row, int col, bool value) const {
    if (tail_.columns.get(row, col) == value) return log_marginal();
    Eigen::MatrixXd g = g_;
    Eigen::MatrixXd w = w_;
    apply_flip(g, w, row, col, value);
    return collapsed_log_lik_core(g, w, rr_, static_cast<int>(residual_.rows()),
                                  static_cast<int>(residual_.cols()), hyper_.sigma_x,
                                  hyper_.sigma_a);
  }

  void set(int row, int col, bool value) {
    if (tail_.columns.get(row, col) == value) return;
    apply_flip(g_, w_, row, col, value);
    tail_.columns.set(row, col, value);
  }

  void remove_column(int col) {
    drop_index(g_, w_, col);
    tail_.columns.remove_column(col);
    tail_.birth_ids.erase(tail_.birth_ids.begin() + col);
  }

  /// Resamples T_row,col from its two-point collapsed conditional. Returns the
  /// new value.
  bool resample_entry(int row, int col, RngStream& rng) {
    const bool current = tail_.columns.get(row, col);
    const int m_minus = tail_.columns.count(col) - (current ? 1 : 0);
    const double prior_on =
        (m_minus + pseudo_) / (static_cast<double>(n_total_) + pseudo_);
    bool value = false;
    if (prior_on > 0.0) {
      const double log_w_on = std::log(prior_on) + log_marginal_with(row, col, true);
      const double log_w_off =
          std::log1p(-prior_on) + log_marginal_with(row, col, false);
      value = rng.bernoulli(two_point_on_probability(log_w_on, log_w_off));
    }
    set(row, col, value);
    return value;
  }

  /// MH birth step for one row: propose replacing the row's singleton columns
  /// with k_new fresh ones, accept on the collapsed marginal ratio.
  void birth_move(int row, double alpha, RngStream& rng) {
    std::vector<int> singletons;
    for (int k = 0; k < tail_.n_cols(); ++k) {
      if (tail_.columns.count(k) == 1 && tail_.columns.get(row, k)) singletons.push_back(k);
    }
    const int k_new = rng.poisson(alpha / static_cast<double>(n_total_));
    if (k_new == 0 && singletons.empty()) return;

    std::vector<int> kept;
    for (int k = 0; k < tail_.n_cols(); ++k) {
      bool is_singleton = false;
      for (const int s : singletons) is_singleton |= (s == k);
      if (!is_singleton) kept.push_back(k);
    }
    auto [g, w] = proposal_stats(kept, row, k_new);
    const double proposal_ll =
        collapsed_log_lik_core(g, w, rr_, static_cast<int>(residual_.rows()),
                               static_cast<int>(residual_.cols()), hyper_.sigma_x,
                               hyper_.sigma_a);
    if (!mh_accept(proposal_ll - log_marginal(), rng)) return;

    for (auto it = singletons.rbegin(); it != singletons.rend(); ++it) {
      tail_.columns.remove_column(*it);
      tail_.birth_ids.erase(tail_.birth_ids.begin() + *it);
    }
    for (int b = 0; b < k_new; ++b) {
      const int col = tail_.columns.append_column();
      tail_.columns.set(row, col, true);
      tail_.birth_ids.push_back(tail_.next_birth_id++);
    }
    g_ = std::move(g);
    w_ = std::move(w);
  }

 private:
  void apply_flip(Eigen::MatrixXd& g, Eigen::MatrixXd& w, int row, int col,
                  bool turning_on) const {
    const Eigen::VectorXd z = tail_row_vector(tail_.columns, row);
    const double sign = turning_on ? 1.0 : -1.0;
    g.col(col) += sign * z;
    g.row(col) += sign * z.transpose();
    g(col, col) += 1.0;
    w.row(col) += sign * residual_.row(row);
  }

  static void drop_index(Eigen::MatrixXd& g, Eigen::MatrixXd& w, int col) {
    const int k = static_cast<int>(g.rows());
    Eigen::MatrixXd g2(k - 1, k - 1);
    Eigen::MatrixXd w2(k - 1, w.cols());
    int ti = 0;
    for (int i = 0; i < k; ++i) {
      if (i == col) continue;
      int tj = 0;
      for (int j = 0; j < k; ++j) {
        if (j == col) continue;
        g2(ti, tj++) = g(i, j);
      }
      w2.row(ti++) = w.row(i);
    }
    g = std::move(g2);
    w = std::move(w2);
  }

  /// Stats for the birth proposal: kept columns followed by k_new singletons
  /// active only at `row`.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> proposal_stats(const std::vector<int>& kept,
                                                             int row, int k_new) const {
    const int kk = static_cast<int>(kept.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(kk + k_new, kk + k_new);
    Eigen::MatrixXd w(kk + k_new, residual_.cols());
    for (int i = 0; i < kk; ++i) {
      for (int j = 0; j < kk; ++j) g(i, j) = g_(kept[i], kept[j]);
      w.row(i) = w_.row(kept[i]);
    }
    for (int b = 0; b < k_new; ++b) {
      const int i = kk + b;
      for (int j = 0; j < kk; ++j) {
        const double v = tail_.columns.get(row, kept[j]) ? 1.0 : 0.0;
        g(i, j) = v;
        g(j, i) = v;
      }
      // Fresh singletons overlap each other exactly at `row`.
      for (int b2 = 0; b2 <= b; ++b2) {
        g(i, kk + b2) = 1.0;
        g(kk + b2, i) = 1.0;
      }
      w.row(i) = residual_.row(row);
    }
    return {std::move(g), std::move(w)};
  }

  const Eigen::MatrixXd& residual_;
  TailState& tail_;
  const HyperParams& hyper_;
  int n_total_;
  double pseudo_;
  Eigen::MatrixXd g_;
  Eigen::MatrixXd w_;
  double rr_;
};

void sweep_block(const Eigen::MatrixXd& residual, TailState& tail, const HyperParams& hyper,
                 int n_total, const SweepOptions& options, RngStream& rng) {
  SweptBlock block(residual, tail, hyper, n_total, options.prior_pseudo_count);
  for (int row = 0; row < residual.rows(); ++row) {
    int k = 0;
    while (k < tail.n_cols()) {
      block.resample_entry(row, k, rng);
      if (options.prune && tail.columns.count(k) == 0) {
        block.remove_column(k);
        continue;
      }
      ++k;
    }
    if (options.births) block.birth_move(row, hyper.alpha, rng);
  }
}

}  // namespace

RowContext make_row_context(Eigen::RowVectorXd x, std::vector<std::uint8_t> z,
                            const Eigen::MatrixXd& a) {
  if (static_cast<int>(z.size()) != a.rows()) {
    throw std::invalid_argument("make_row_context: z length must equal rows of A");
  }
  RowContext ctx{std::move(x), std::move(z), {}};
  ctx.residual = ctx.x;
  for (std::size_t k = 0; k < ctx.z.size(); ++k) {
    if (ctx.z[k]) ctx.residual -= a.row(static_cast<int>(k));
  }
  return ctx;
}

void uncollapsed_row_sweep(RowContext& ctx, const Eigen::MatrixXd& a,
                           const Eigen::VectorXd& pi, double sigma_x, RngStream& rng) {
  if (pi.size() != a.rows() || static_cast<int>(ctx.z.size()) != a.rows()) {
    throw std::invalid_argument("uncollapsed_row_sweep: pi, A and z sizes must agree");
  }
  const double inv_two_var = 1.0 / (2.0 * sigma_x * sigma_x);
  for (int k = 0; k < a.rows(); ++k) {
    // Residual with feature k absent.
    Eigen::RowVectorXd base = ctx.residual;
    if (ctx.z[k]) base += a.row(k);
    const double log_w_on =
        std::log(pi[k]) - (base - a.row(k)).squaredNorm() * inv_two_var;
    const double log_w_off = std::log1p(-pi[k]) - base.squaredNorm() * inv_two_var;
    const bool on = rng.bernoulli(two_point_on_probability(log_w_on, log_w_off));
    ctx.z[k] = on ? 1 : 0;
    ctx.residual = on ? Eigen::RowVectorXd(base - a.row(k)) : std::move(base);
  }
}

void collapsed_tail_sweep(const Eigen::MatrixXd& x_shard, const FeatureMatrix& z_inst,
                          const Eigen::MatrixXd& a_inst, TailState& tail,
                          const HyperParams& hyper, int n_total, RngStream& rng) {
  if (x_shard.rows() != z_inst.n_rows() || x_shard.rows() != tail.columns.n_rows()) {
    throw std::invalid_argument("collapsed_tail_sweep: shard row counts must agree");
  }
  Eigen::MatrixXd residual = x_shard;
  if (z_inst.n_cols() > 0) residual -= z_inst.dense() * a_inst;
  SweepOptions options;
  sweep_block(residual, tail, hyper, n_total, options, rng);
}

void propose_new_features(const Eigen::MatrixXd& residual, int row, TailState& tail,
                          double alpha, int n_total, const HyperParams& hyper,
                          RngStream& rng) {
  SweptBlock block(residual, tail, hyper, n_total, 0.0);
  block.birth_move(row, alpha, rng);
}

void collapsed_reference_sweep(const Eigen::MatrixXd& x, FeatureMatrix& z,
                               const HyperParams& hyper, RngStream& rng,
                               const SweepOptions& options) {
  TailState block(static_cast<int>(x.rows()));
  block.columns = std::move(z);
  block.birth_ids.resize(block.columns.n_cols());
  for (std::size_t k = 0; k < block.birth_ids.size(); ++k) {
    block.birth_ids[k] = static_cast<long>(k);
  }
  block.next_birth_id = block.n_cols();
  sweep_block(x, block, hyper, static_cast<int>(x.rows()), options, rng);
  z = std::move(block.columns);
}

double two_point_on_probability(double log_w_on, double log_w_off) {
  if (!(log_w_on > kNegInf)) return 0.0;
  if (!(log_w_off > kNegInf)) return 1.0;
  return 1.0 / (1.0 + std::exp(log_w_off - log_w_on));
}

double tail_on_probability(const Eigen::MatrixXd& residual, const FeatureMatrix& tail,
                           int row, int col, int n_total, const HyperParams& hyper,
                           double prior_pseudo_count) {
  const bool current = tail.get(row, col);
  const int m_minus = tail.count(col) - (current ? 1 : 0);
  const double prior_on =
      (m_minus + prior_pseudo_count) / (static_cast<double>(n_total) + prior_pseudo_count);
  if (prior_on <= 0.0) return 0.0;
  FeatureMatrix on = tail;
  on.set(row, col, true);
  FeatureMatrix off = tail;
  off.set(row, col, false);
  const double log_w_on =
      std::log(prior_on) + collapsed_log_lik(residual, on, hyper.sigma_x, hyper.sigma_a);
  const double log_w_off = std::log1p(-prior_on) +
                           collapsed_log_lik(residual, off, hyper.sigma_x, hyper.sigma_a);
  return two_point_on_probability(log_w_on, log_w_off);
}

}  // namespace ibp
