// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ibp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Cholesky with one jitter retry: on failure, add 1e-10 * (trace / K) to the
/// diagonal and try again.
Eigen::LLT<Eigen::MatrixXd> cholesky_with_jitter(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const double jitter = 1e-10 * m.trace() / static_cast<double>(m.rows());
  Eigen::MatrixXd padded = m;
  padded.diagonal().array() += jitter;
  llt.compute(padded);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("cholesky failed even after jitter retry");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

void check_dims(const Eigen::MatrixXd& x, const FeatureMatrix& z) {
  if (x.rows() != z.n_rows()) {
    throw std::invalid_argument("row count of X and Z must match");
  }
  if (!x.allFinite()) throw std::invalid_argument("X must be finite");
}

}  // namespace

double harmonic_number(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

FeatureMatrix sample_ibp_restaurant(int n_rows, double alpha, RngStream& rng) {
  if (n_rows < 1) throw std::invalid_argument("sample_ibp_restaurant: n_rows must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("sample_ibp_restaurant: alpha must be >= 0");
  FeatureMatrix z(n_rows);
  for (int n = 0; n < n_rows; ++n) {
    const double customer = static_cast<double>(n + 1);
    for (int k = 0; k < z.n_cols(); ++k) {
      if (rng.bernoulli(z.count(k) / customer)) z.set(n, k, true);
    }
    const int births = rng.poisson(alpha / customer);
    for (int b = 0; b < births; ++b) {
      const int k = z.append_column();
      z.set(n, k, true);
    }
  }
  return z;
}

double log_ibp_prior(const FeatureMatrix& z, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("log_ibp_prior: alpha must be > 0");
  const int n = z.n_rows();
  const int k_plus = z.n_cols();
  double logp = k_plus * std::log(alpha) - alpha * harmonic_number(n);
  for (int k = 0; k < k_plus; ++k) {
    const int m = z.count(k);
    if (m == 0) {
      throw std::invalid_argument("log_ibp_prior: all-zero column has no buffet realization");
    }
    logp += std::lgamma(static_cast<double>(m)) + log_factorial(n - m) - log_factorial(n);
  }
  // Duplicate column patterns are unordered copies of one another; divide by
  // the factorial of each pattern's multiplicity.
  std::map<std::vector<std::uint8_t>, int> multiplicity;
  for (int k = 0; k < k_plus; ++k) ++multiplicity[z.column(k)];
  for (const auto& [pattern, copies] : multiplicity) {
    if (copies > 1) logp -= log_factorial(copies);
  }
  return logp;
}

double log_finite_bb_prior(const std::vector<int>& counts, int n_rows, double pseudo_count) {
  if (pseudo_count <= 0.0) {
    throw std::invalid_argument("log_finite_bb_prior: pseudo_count must be > 0");
  }
  // Per column: B(a0 + m, N - m + 1) / B(a0, 1), with B(a0, 1) = 1 / a0.
  const double n = static_cast<double>(n_rows);
  double logp = 0.0;
  for (const int m : counts) {
    logp += std::lgamma(pseudo_count + m) + std::lgamma(n - m + 1.0) -
            std::lgamma(pseudo_count + n + 1.0) + std::log(pseudo_count);
  }
  return logp;
}

FiniteBetaBernoulliDraw sample_finite_beta_bernoulli(int n_rows, int k, double alpha,
                                                     RngStream& rng) {
  if (k < 1) throw std::invalid_argument("sample_finite_beta_bernoulli: K must be >= 1");
  if (alpha <= 0.0) {
    throw std::invalid_argument("sample_finite_beta_bernoulli: alpha must be > 0");
  }
  FiniteBetaBernoulliDraw draw{Eigen::VectorXd(k), FeatureMatrix(n_rows)};
  for (int j = 0; j < k; ++j) {
    draw.pi[j] = rng.beta(alpha / k, 1.0);
    const int col = draw.z.append_column();
    for (int n = 0; n < n_rows; ++n) {
      if (rng.bernoulli(draw.pi[j])) draw.z.set(n, col, true);
    }
  }
  return draw;
}

double log_lik_full(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                    const Eigen::MatrixXd& a, double sigma_x) {
  check_dims(x, z);
  if (z.n_cols() != a.rows() || (z.n_cols() > 0 && x.cols() != a.cols())) {
    throw std::invalid_argument("log_lik_full: Z and A dimensions must agree");
  }
  const double nd = static_cast<double>(x.rows() * x.cols());
  Eigen::MatrixXd residual = x;
  if (z.n_cols() > 0) residual -= z.dense() * a;
  return -0.5 * nd * (kLogTwoPi + 2.0 * std::log(sigma_x)) -
         residual.squaredNorm() / (2.0 * sigma_x * sigma_x);
}

CollapsedStats collapsed_stats(const Eigen::MatrixXd& x, const FeatureMatrix& z) {
  check_dims(x, z);
  const Eigen::MatrixXd zd = z.dense();
  CollapsedStats stats;
  stats.ztz = zd.transpose() * zd;
  stats.ztx = zd.transpose() * x;
  stats.x_sq_norm = x.squaredNorm();
  stats.n_rows = static_cast<int>(x.rows());
  stats.d = static_cast<int>(x.cols());
  return stats;
}

double collapsed_log_lik_core(const Eigen::MatrixXd& ztz, const Eigen::MatrixXd& ztx,
                              double x_sq_norm, int n_rows, int d, double sigma_x,
                              double sigma_a) {
  const int k = static_cast<int>(ztz.rows());
  const double sx2 = sigma_x * sigma_x;
  double logp = -0.5 * n_rows * d * kLogTwoPi - (n_rows - k) * d * std::log(sigma_x) -
                k * d * std::log(sigma_a);
  double quad = 0.0;
  if (k > 0) {
    Eigen::MatrixXd m = ztz;
    m.diagonal().array() += sx2 / (sigma_a * sigma_a);
    const auto llt = cholesky_with_jitter(m);
    logp -= 0.5 * d * log_det_from_llt(llt);
    quad = (ztx.array() * llt.solve(ztx).array()).sum();
  }
  logp -= (x_sq_norm - quad) / (2.0 * sx2);
  return logp;
}

double collapsed_log_lik_stats(const CollapsedStats& stats, double sigma_x, double sigma_a) {
  return collapsed_log_lik_core(stats.ztz, stats.ztx, stats.x_sq_norm, stats.n_rows,
                                stats.d, sigma_x, sigma_a);
}

double collapsed_log_lik(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                         double sigma_x, double sigma_a) {
  return collapsed_log_lik_stats(collapsed_stats(x, z), sigma_x, sigma_a);
}

LoadingsPosterior posterior_loadings_stats(const Eigen::MatrixXd& ztz,
                                           const Eigen::MatrixXd& ztx, double sigma_x,
                                           double sigma_a) {
  if (ztz.rows() == 0) throw std::invalid_argument("posterior_loadings: K must be >= 1");
  Eigen::MatrixXd m = ztz;
  m.diagonal().array() += (sigma_x * sigma_x) / (sigma_a * sigma_a);
  const auto llt = cholesky_with_jitter(m);
  LoadingsPosterior posterior;
  posterior.mean = llt.solve(ztx);
  posterior.covariance =
      sigma_x * sigma_x * llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return posterior;
}

LoadingsPosterior posterior_loadings(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                                     double sigma_x, double sigma_a) {
  const auto stats = collapsed_stats(x, z);
  return posterior_loadings_stats(stats.ztz, stats.ztx, sigma_x, sigma_a);
}

Eigen::MatrixXd sample_loadings(const LoadingsPosterior& posterior, RngStream& rng) {
  const int k = static_cast<int>(posterior.mean.rows());
  const int d = static_cast<int>(posterior.mean.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(posterior.covariance);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * posterior.covariance.trace() / static_cast<double>(k);
    Eigen::MatrixXd padded = posterior.covariance;
    padded.diagonal().array() += jitter;
    llt.compute(padded);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("sample_loadings: covariance is not positive definite");
    }
  }
  Eigen::MatrixXd noise(k, d);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) noise(i, j) = rng.normal();
  }
  return posterior.mean + llt.matrixL() * noise;
}

Eigen::VectorXd sample_pi(const std::vector<int>& counts, int n_rows, RngStream& rng) {
  Eigen::VectorXd pi(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 1) {
      throw std::invalid_argument("sample_pi: dead feature (m_k = 0) must be pruned first");
    }
    pi[k] = rng.beta(static_cast<double>(counts[k]),
                     1.0 + static_cast<double>(n_rows - counts[k]));
  }
  return pi;
}

Eigen::VectorXd sample_pi_finite(const std::vector<int>& counts, int n_rows,
                                 double pseudo_count, RngStream& rng) {
  if (pseudo_count <= 0.0) {
    throw std::invalid_argument("sample_pi_finite: pseudo_count must be > 0");
  }
  Eigen::VectorXd pi(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    pi[k] = rng.beta(pseudo_count + counts[k],
                     1.0 + static_cast<double>(n_rows - counts[k]));
  }
  return pi;
}

double sample_alpha(int k_plus, int n_total, const GammaPrior& prior, RngStream& rng) {
  if (k_plus < 0 || n_total < 1) {
    throw std::invalid_argument("sample_alpha: need k_plus >= 0 and n_total >= 1");
  }
  return rng.gamma(prior.shape + k_plus, prior.rate + harmonic_number(n_total));
}

Variances sample_variances_stats(double ssr, long nd, double a_sq_norm, long kd,
                                 const HyperParams& hyper, RngStream& rng) {
  Variances out{hyper.sigma_x, hyper.sigma_a};
  // Log posterior in t = log sigma under a log-uniform prior on sigma:
  // -count * t - sq / (2 exp(2t)); the prior's 1/sigma cancels the Jacobian.
  const auto log_post = [](double t, long count, double sq) {
    return -static_cast<double>(count) * t - 0.5 * sq * std::exp(-2.0 * t);
  };
  if (hyper.resample.sigma_x) {
    const double t = std::log(out.sigma_x);
    const double proposal = t + hyper.variance_step * rng.normal();
    if (mh_accept(log_post(proposal, nd, ssr) - log_post(t, nd, ssr), rng)) {
      out.sigma_x = std::exp(proposal);
    }
  }
  if (hyper.resample.sigma_a && kd > 0) {
    const double t = std::log(out.sigma_a);
    const double proposal = t + hyper.variance_step * rng.normal();
    if (mh_accept(log_post(proposal, kd, a_sq_norm) - log_post(t, kd, a_sq_norm), rng)) {
      out.sigma_a = std::exp(proposal);
    }
  }
  return out;
}

Variances sample_variances(const Eigen::MatrixXd& x, const FeatureMatrix& z,
                           const Eigen::MatrixXd& a, const HyperParams& hyper,
                           RngStream& rng) {
  check_dims(x, z);
  if (z.n_cols() != a.rows()) {
    throw std::invalid_argument("sample_variances: Z and A dimensions must agree");
  }
  Eigen::MatrixXd residual = x;
  if (z.n_cols() > 0) residual -= z.dense() * a;
  return sample_variances_stats(residual.squaredNorm(), x.rows() * x.cols(),
                                a.squaredNorm(), a.rows() * a.cols(), hyper, rng);
}

}  // namespace ibp
