// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/engine.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "ibp/evaluation.hpp"
#include "ibp/model.hpp"

namespace ibp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

// Fixed stream layout: master 0, workers 1..P, evaluator P+1, initializer P+2.
constexpr std::uint64_t kMasterStream = 0;
std::uint64_t worker_stream(int p) { return 1 + static_cast<std::uint64_t>(p); }
std::uint64_t eval_stream(int processors) { return 1 + static_cast<std::uint64_t>(processors); }
std::uint64_t init_stream(int processors) { return 2 + static_cast<std::uint64_t>(processors); }

SyncMessage build_sync_message(const WorkerShard& shard, std::int64_t iteration) {
  SyncMessage msg;
  msg.shard_id = shard.id;
  msg.iteration = iteration;
  msg.instantiated_counts.assign(shard.z.counts().begin(), shard.z.counts().end());
  for (int k = 0; k < shard.tail.n_cols(); ++k) {
    TailColumnBlock block;
    const auto& column = shard.tail.columns.column(k);
    for (int r = 0; r < shard.n_rows(); ++r) {
      if (column[r]) block.rows.push_back(r);
    }
    msg.tail_columns.push_back(std::move(block));
  }
  const int k_inst = shard.z.n_cols();
  const int k_star = shard.tail.n_cols();
  Eigen::MatrixXd full(shard.n_rows(), k_inst + k_star);
  if (k_inst > 0) full.leftCols(k_inst) = shard.z.dense();
  if (k_star > 0) full.rightCols(k_star) = shard.tail.columns.dense();
  msg.ztz = full.transpose() * full;
  msg.ztx = full.transpose() * shard.x;
  Eigen::MatrixXd residual = shard.x;
  if (k_inst > 0 && shard.loadings.rows() == k_inst) {
    residual -= shard.z.dense() * shard.loadings;
  }
  const double sx = shard.hyper.sigma_x;
  msg.local_loglik =
      -0.5 * shard.n_rows() * shard.x.cols() * (kLogTwoPi + 2.0 * std::log(sx)) -
      residual.squaredNorm() / (2.0 * sx * sx);
  return msg;
}

void apply_broadcast(WorkerShard& shard, const BroadcastMessage& broadcast) {
  const int previous_k = shard.z.n_cols();
  if (broadcast.k_plus !=
      static_cast<std::int32_t>(broadcast.kept_columns.size()) + broadcast.promoted_count) {
    throw std::runtime_error("broadcast: k_plus does not match kept + promoted");
  }
  if (broadcast.loadings.rows() != broadcast.k_plus ||
      broadcast.pi.size() != broadcast.k_plus) {
    throw std::runtime_error("broadcast: parameter sizes do not match k_plus");
  }
  std::vector<int> kept;
  kept.reserve(broadcast.kept_columns.size());
  for (const auto k : broadcast.kept_columns) {
    if (k < 0 || k >= previous_k) throw std::runtime_error("broadcast: kept index out of range");
    kept.push_back(k);
  }
  shard.z.keep_columns(kept);
  if (shard.is_feature_worker) {
    if (shard.tail.n_cols() != broadcast.promoted_count) {
      throw std::runtime_error("broadcast: promoted count does not match local tail");
    }
    for (int k = 0; k < shard.tail.n_cols(); ++k) {
      shard.z.append_column(shard.tail.columns.column(k));
    }
    const long next_id = shard.tail.next_birth_id;
    shard.tail = TailState(shard.n_rows());
    shard.tail.next_birth_id = next_id;
  } else {
    if (shard.tail.n_cols() != 0) {
      throw std::runtime_error("broadcast: non-feature worker holds tail columns");
    }
    for (int k = 0; k < broadcast.promoted_count; ++k) shard.z.append_column();
  }
  shard.loadings = broadcast.loadings;
  shard.pi = broadcast.pi;
  shard.hyper = broadcast.hyper;
  shard.is_feature_worker = (broadcast.p_prime == shard.id);
  const auto bytes = serialize(broadcast);
  shard.last_broadcast_digest = digest(bytes);
}

/// Everything master_sync does after protocol validation; also used by the
/// bootstrap sync, which has no protocol to validate.
BroadcastMessage sync_core(const std::vector<SyncMessage>& ordered, MasterState& state) {
  const int p_count = state.processors;
  const int k_old = state.k_plus;

  int tail_owner = -1;
  for (int p = 0; p < p_count; ++p) {
    if (!ordered[p].tail_columns.empty()) {
      if (tail_owner >= 0) {
        throw std::runtime_error("master_sync: multiple workers offered tail columns");
      }
      tail_owner = p;
    }
  }
  const int k_star = tail_owner >= 0
                         ? static_cast<int>(ordered[tail_owner].tail_columns.size())
                         : 0;
  const int k_full = k_old + k_star;

  std::vector<int> counts(k_full, 0);
  for (int p = 0; p < p_count; ++p) {
    for (int k = 0; k < k_old; ++k) counts[k] += ordered[p].instantiated_counts[k];
  }
  if (tail_owner >= 0) {
    for (int t = 0; t < k_star; ++t) {
      const auto& block = ordered[tail_owner].tail_columns[t];
      if (block.rows.empty()) {
        throw std::runtime_error("master_sync: empty tail column offered for promotion");
      }
      counts[k_old + t] = static_cast<int>(block.rows.size());
    }
  }

  Eigen::MatrixXd ztz = Eigen::MatrixXd::Zero(k_full, k_full);
  Eigen::MatrixXd ztx = Eigen::MatrixXd::Zero(k_full, state.d);
  for (int p = 0; p < p_count; ++p) {
    const int local_k = static_cast<int>(ordered[p].ztz.rows());
    ztz.topLeftCorner(local_k, local_k) += ordered[p].ztz;
    ztx.topRows(local_k) += ordered[p].ztx;
  }

  std::vector<std::int32_t> kept;
  for (int k = 0; k < k_old; ++k) {
    if (!state.prune || counts[k] > 0) kept.push_back(k);
  }
  std::vector<int> order;
  for (const auto k : kept) order.push_back(k);
  for (int t = 0; t < k_star; ++t) order.push_back(k_old + t);

  const int k_new = static_cast<int>(order.size());
  Eigen::MatrixXd ztz_sel(k_new, k_new);
  Eigen::MatrixXd ztx_sel(k_new, state.d);
  std::vector<int> counts_new(k_new);
  for (int i = 0; i < k_new; ++i) {
    for (int j = 0; j < k_new; ++j) ztz_sel(i, j) = ztz(order[i], order[j]);
    ztx_sel.row(i) = ztx.row(order[i]);
    counts_new[i] = counts[order[i]];
  }

  // Resampling order is fixed: loadings, pi, alpha, variances, next p'.
  Eigen::MatrixXd loadings(0, state.d);
  Eigen::VectorXd pi(0);
  if (k_new > 0) {
    const auto posterior =
        posterior_loadings_stats(ztz_sel, ztx_sel, state.hyper.sigma_x, state.hyper.sigma_a);
    loadings = sample_loadings(posterior, state.rng);
    pi = state.pi_pseudo_count > 0.0
             ? sample_pi_finite(counts_new, state.n_total, state.pi_pseudo_count, state.rng)
             : sample_pi(counts_new, state.n_total, state.rng);
  }
  if (state.hyper.resample.alpha) {
    state.hyper.alpha =
        sample_alpha(k_new, state.n_total, state.hyper.alpha_prior, state.rng);
  }
  if (state.hyper.resample.sigma_x || state.hyper.resample.sigma_a) {
    const double ssr = state.x_sq_norm - 2.0 * (loadings.array() * ztx_sel.array()).sum() +
                       ((ztz_sel * loadings).array() * loadings.array()).sum();
    const auto vars = sample_variances_stats(
        ssr, static_cast<long>(state.n_total) * state.d, loadings.squaredNorm(),
        static_cast<long>(k_new) * state.d, state.hyper, state.rng);
    state.hyper.sigma_x = vars.sigma_x;
    state.hyper.sigma_a = vars.sigma_a;
  }
  int next_p = static_cast<int>(state.rng.uniform01() * p_count);
  if (next_p >= p_count) next_p = p_count - 1;

  state.k_plus = k_new;
  state.loadings = loadings;
  state.pi = pi;
  state.p_prime = next_p;
  ++state.iteration;

  BroadcastMessage broadcast;
  broadcast.iteration = state.iteration;
  broadcast.k_plus = k_new;
  broadcast.loadings = std::move(loadings);
  broadcast.pi = std::move(pi);
  broadcast.hyper = state.hyper;
  broadcast.kept_columns = std::move(kept);
  broadcast.promoted_count = k_star;
  broadcast.p_prime = next_p;
  return broadcast;
}

}  // namespace

void RunConfig::validate(int n_train) const {
  hyper.validate();
  if (processors < 1) throw std::invalid_argument("config: processors must be >= 1");
  if (processors > n_train) {
    throw std::invalid_argument("config: more processors than observations");
  }
  if (iterations < 0) throw std::invalid_argument("config: iterations must be >= 0");
  if (sub_iterations < 0) throw std::invalid_argument("config: sub_iterations must be >= 0");
  if (heldout_gibbs_passes < 0) {
    throw std::invalid_argument("config: heldout_gibbs_passes must be >= 0");
  }
  if (init_k < 0 || pinned_k < 0) {
    throw std::invalid_argument("config: init_k and pinned_k must be >= 0");
  }
  if (algorithm != Algorithm::hybrid && processors != 1) {
    throw std::invalid_argument("config: the single-machine baselines require processors=1");
  }
  if (algorithm == Algorithm::uncollapsed && pinned_k == 0 && init_k < 1) {
    throw std::invalid_argument("config: the uncollapsed baseline requires init_k >= 1");
  }
}

std::vector<WorkerShard> shard_data(const Eigen::MatrixXd& x, int processors,
                                    std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  if (processors < 1) throw std::invalid_argument("shard_data: processors must be >= 1");
  if (processors > n) throw std::invalid_argument("shard_data: more shards than rows");
  std::vector<WorkerShard> shards(processors);
  const int base = n / processors;
  const int extra = n % processors;
  int begin = 0;
  for (int p = 0; p < processors; ++p) {
    const int rows = base + (p < extra ? 1 : 0);
    WorkerShard& shard = shards[p];
    shard.id = p;
    shard.row_begin = begin;
    shard.row_end = begin + rows;
    shard.n_total = n;
    shard.x = x.middleRows(begin, rows);
    shard.z = FeatureMatrix(rows);
    shard.tail = TailState(rows);
    shard.rng = RngStream(seed, worker_stream(p));
    shard.rows_swept.assign(rows, 0);
    begin += rows;
  }
  return shards;
}

SyncMessage worker_step(WorkerShard& shard, const BroadcastMessage& broadcast,
                        int sub_iterations) {
  if (broadcast.iteration != shard.iteration) {
    throw std::runtime_error("worker_step: stale broadcast (iteration " +
                             std::to_string(broadcast.iteration) + ", expected " +
                             std::to_string(shard.iteration) + ")");
  }
  apply_broadcast(shard, broadcast);
  for (int l = 0; l < sub_iterations; ++l) {
    for (int r = 0; r < shard.n_rows(); ++r) {
      RowContext ctx = make_row_context(shard.x.row(r), shard.z.row(r), shard.loadings);
      uncollapsed_row_sweep(ctx, shard.loadings, shard.pi, shard.hyper.sigma_x, shard.rng);
      shard.z.set_row(r, ctx.z);
      ++shard.rows_swept[r];
    }
    if (shard.is_feature_worker && shard.births) {
      collapsed_tail_sweep(shard.x, shard.z, shard.loadings, shard.tail, shard.hyper,
                           shard.n_total, shard.rng);
    }
  }
  SyncMessage msg = build_sync_message(shard, broadcast.iteration);
  shard.iteration = broadcast.iteration + 1;
  return msg;
}

BroadcastMessage master_sync(const std::vector<SyncMessage>& messages, MasterState& state) {
  if (static_cast<int>(messages.size()) != state.processors) {
    throw std::runtime_error("master_sync: expected " + std::to_string(state.processors) +
                             " messages, got " + std::to_string(messages.size()));
  }
  std::vector<const SyncMessage*> by_id(state.processors, nullptr);
  for (const auto& msg : messages) {
    if (msg.shard_id < 0 || msg.shard_id >= state.processors) {
      throw std::runtime_error("master_sync: unknown shard id");
    }
    if (by_id[msg.shard_id] != nullptr) {
      throw std::runtime_error("master_sync: duplicate message from shard " +
                               std::to_string(msg.shard_id));
    }
    by_id[msg.shard_id] = &msg;
  }
  std::vector<SyncMessage> ordered;
  ordered.reserve(state.processors);
  for (int p = 0; p < state.processors; ++p) {
    const SyncMessage& msg = *by_id[p];
    if (msg.iteration != state.iteration) {
      throw std::runtime_error("master_sync: message iteration " +
                               std::to_string(msg.iteration) + " does not match " +
                               std::to_string(state.iteration));
    }
    if (static_cast<int>(msg.instantiated_counts.size()) != state.k_plus) {
      throw std::runtime_error("master_sync: count vector length mismatch from shard " +
                               std::to_string(p));
    }
    for (const auto c : msg.instantiated_counts) {
      if (c < 0 || c > state.shard_sizes[p]) {
        throw std::runtime_error("master_sync: local count exceeds shard size");
      }
    }
    if (!msg.tail_columns.empty() && p != state.p_prime) {
      throw std::runtime_error("master_sync: tail columns from a non-p' shard");
    }
    const int expected_k = state.k_plus + static_cast<int>(msg.tail_columns.size());
    if (msg.ztz.rows() != expected_k || msg.ztz.cols() != expected_k ||
        msg.ztx.rows() != expected_k || msg.ztx.cols() != state.d) {
      throw std::runtime_error("master_sync: sufficient statistic dimensions mismatch");
    }
    ordered.push_back(msg);
  }
  return sync_core(ordered, state);
}

FeatureMatrix assemble_global_z(const std::vector<WorkerShard>& shards,
                                const std::vector<std::int32_t>& kept_columns,
                                int previous_feature_worker) {
  int n = 0;
  for (const auto& s : shards) n += s.n_rows();
  FeatureMatrix z(n);
  for (const auto k : kept_columns) {
    std::vector<std::uint8_t> column(n, 0);
    for (const auto& s : shards) {
      const auto& local = s.z.column(k);
      for (int r = 0; r < s.n_rows(); ++r) column[s.row_begin + r] = local[r];
    }
    z.append_column(column);
  }
  if (previous_feature_worker >= 0) {
    const WorkerShard& owner = shards[previous_feature_worker];
    for (int t = 0; t < owner.tail.n_cols(); ++t) {
      std::vector<std::uint8_t> column(n, 0);
      const auto& local = owner.tail.columns.column(t);
      for (int r = 0; r < owner.n_rows(); ++r) column[owner.row_begin + r] = local[r];
      z.append_column(column);
    }
  }
  return z;
}

namespace {

/// Initial global Z with k columns of Bernoulli(1/2) entries.
FeatureMatrix initial_z(int n, int k, std::uint64_t seed, int processors) {
  FeatureMatrix z(n);
  RngStream rng(seed, init_stream(processors));
  for (int col = 0; col < k; ++col) {
    const int c = z.append_column();
    for (int r = 0; r < n; ++r) z.set(r, c, rng.bernoulli(0.5));
  }
  return z;
}

std::vector<SyncMessage> run_workers(std::vector<WorkerShard>& shards,
                                     const BroadcastMessage& broadcast, int sub_iterations,
                                     Scheduler scheduler) {
  const int p_count = static_cast<int>(shards.size());
  std::vector<SyncMessage> messages(p_count);
  if (scheduler == Scheduler::serial || p_count == 1) {
    for (int p = 0; p < p_count; ++p) {
      messages[p] = worker_step(shards[p], broadcast, sub_iterations);
    }
    return messages;
  }
  std::vector<std::exception_ptr> errors(p_count);
  std::vector<std::thread> pool;
  pool.reserve(p_count - 1);
  for (int p = 1; p < p_count; ++p) {
    pool.emplace_back([&, p] {
      try {
        messages[p] = worker_step(shards[p], broadcast, sub_iterations);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    });
  }
  try {
    messages[0] = worker_step(shards[0], broadcast, sub_iterations);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return messages;
}

}  // namespace

RunResult run_hybrid(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
                     const RunConfig& config, TraceWriter* writer) {
  const int n = static_cast<int>(x_train.rows());
  const int d = static_cast<int>(x_train.cols());
  config.validate(n);

  auto shards = shard_data(x_train, config.processors, config.seed);
  const int k0 = config.pinned_k > 0 ? config.pinned_k : config.init_k;
  if (k0 > 0) {
    const FeatureMatrix z0 = initial_z(n, k0, config.seed, config.processors);
    for (auto& shard : shards) {
      for (int k = 0; k < k0; ++k) {
        std::vector<std::uint8_t> column(shard.n_rows());
        for (int r = 0; r < shard.n_rows(); ++r) {
          column[r] = z0.get(shard.row_begin + r, k) ? 1 : 0;
        }
        shard.z.append_column(column);
      }
    }
  }
  for (auto& shard : shards) shard.births = config.births_enabled();

  MasterState state;
  state.n_total = n;
  state.d = d;
  state.processors = config.processors;
  state.k_plus = k0;
  state.hyper = config.hyper;
  state.x_sq_norm = x_train.squaredNorm();
  state.prune = config.pinned_k == 0;
  state.pi_pseudo_count =
      config.pinned_k > 0 ? config.hyper.alpha / config.pinned_k : 0.0;
  state.rng = RngStream(config.seed, kMasterStream);
  for (const auto& shard : shards) state.shard_sizes.push_back(shard.n_rows());

  RngStream eval_rng(config.seed, eval_stream(config.processors));

  // Bootstrap sync: collect-only messages, no sweeps.
  std::vector<SyncMessage> init_messages;
  init_messages.reserve(shards.size());
  for (const auto& shard : shards) {
    init_messages.push_back(build_sync_message(shard, state.iteration));
  }
  BroadcastMessage broadcast = sync_core(init_messages, state);

  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  for (int t = 1; t <= config.iterations; ++t) {
    const int active_p_prime = broadcast.p_prime;
    auto messages =
        run_workers(shards, broadcast, config.sub_iterations, config.scheduler);
    broadcast = master_sync(messages, state);

    const FeatureMatrix global_z =
        assemble_global_z(shards, broadcast.kept_columns, active_p_prime);
    TraceRecord record;
    record.iteration = t;
    record.wall_seconds =
        std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start)
            .count() /
        1e6;
    record.k_plus = broadcast.k_plus;
    record.alpha = broadcast.hyper.alpha;
    record.sigma_x = broadcast.hyper.sigma_x;
    record.sigma_a = broadcast.hyper.sigma_a;
    record.train_joint_ll =
        config.pinned_k > 0
            ? train_joint_loglik_finite(x_train, global_z, broadcast.loadings,
                                        broadcast.hyper.sigma_x, state.pi_pseudo_count)
            : train_joint_loglik(x_train, global_z, broadcast.loadings,
                                 broadcast.hyper.sigma_x, broadcast.hyper.alpha);
    record.heldout_joint_ll =
        x_test.rows() > 0
            ? heldout_joint_loglik(x_test, broadcast.loadings, broadcast.pi,
                                   broadcast.hyper, config.heldout_gibbs_passes, eval_rng)
            : 0.0;
    record.p_prime = active_p_prime;
    if (writer != nullptr) writer->append(record);
    result.trace.push_back(record);
    if (t == config.iterations) result.z = global_z;
  }
  if (config.iterations == 0) {
    result.z = assemble_global_z(shards, broadcast.kept_columns, -1);
  }
  result.loadings = broadcast.loadings;
  result.pi = broadcast.pi;
  result.hyper = broadcast.hyper;
  return result;
}

RunResult run_collapsed_baseline(const Eigen::MatrixXd& x_train,
                                 const Eigen::MatrixXd& x_test, const RunConfig& config,
                                 TraceWriter* writer) {
  const int n = static_cast<int>(x_train.rows());
  config.validate(n);

  HyperParams hyper = config.hyper;
  RngStream rng(config.seed, worker_stream(0));
  RngStream eval_rng(config.seed, eval_stream(1));

  SweepOptions options;
  const int k0 = config.pinned_k > 0 ? config.pinned_k : config.init_k;
  if (config.pinned_k > 0) {
    options.births = false;
    options.prune = false;
    options.prior_pseudo_count = hyper.alpha / config.pinned_k;
  }
  FeatureMatrix z = k0 > 0 ? initial_z(n, k0, config.seed, 1) : FeatureMatrix(n);

  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  for (int t = 1; t <= config.iterations; ++t) {
    for (int l = 0; l < config.sub_iterations; ++l) {
      collapsed_reference_sweep(x_train, z, hyper, rng, options);
    }
    if (hyper.resample.alpha) {
      hyper.alpha = sample_alpha(z.n_cols(), n, hyper.alpha_prior, rng);
    }
    if (hyper.resample.sigma_x || hyper.resample.sigma_a) {
      // Random-walk moves on log sigma against the collapsed marginal.
      const auto move = [&](double sigma, bool is_x) {
        const double t0 = std::log(sigma);
        const double proposal = t0 + hyper.variance_step * rng.normal();
        const double sx = is_x ? std::exp(proposal) : hyper.sigma_x;
        const double sa = is_x ? hyper.sigma_a : std::exp(proposal);
        const double delta = collapsed_log_lik(x_train, z, sx, sa) -
                             collapsed_log_lik(x_train, z, hyper.sigma_x, hyper.sigma_a);
        return mh_accept(delta, rng) ? std::exp(proposal) : sigma;
      };
      if (hyper.resample.sigma_x) hyper.sigma_x = move(hyper.sigma_x, true);
      if (hyper.resample.sigma_a && z.n_cols() > 0) hyper.sigma_a = move(hyper.sigma_a, false);
    }

    // Evaluation conditions on point draws of (A, pi) given the current Z.
    Eigen::MatrixXd loadings(0, x_train.cols());
    Eigen::VectorXd pi(0);
    if (z.n_cols() > 0) {
      const auto posterior = posterior_loadings(x_train, z, hyper.sigma_x, hyper.sigma_a);
      loadings = sample_loadings(posterior, eval_rng);
      pi = config.pinned_k > 0
               ? sample_pi_finite(z.counts(), n, options.prior_pseudo_count, eval_rng)
               : sample_pi(z.counts(), n, eval_rng);
    }
    TraceRecord record;
    record.iteration = t;
    record.wall_seconds =
        std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start)
            .count() /
        1e6;
    record.k_plus = z.n_cols();
    record.alpha = hyper.alpha;
    record.sigma_x = hyper.sigma_x;
    record.sigma_a = hyper.sigma_a;
    record.train_joint_ll =
        config.pinned_k > 0
            ? train_joint_loglik_finite(x_train, z, loadings, hyper.sigma_x,
                                        options.prior_pseudo_count)
            : train_joint_loglik(x_train, z, loadings, hyper.sigma_x, hyper.alpha);
    record.heldout_joint_ll =
        x_test.rows() > 0 ? heldout_joint_loglik(x_test, loadings, pi, hyper,
                                                 config.heldout_gibbs_passes, eval_rng)
                          : 0.0;
    record.p_prime = 0;
    if (writer != nullptr) writer->append(record);
    result.trace.push_back(record);
    if (t == config.iterations) {
      result.loadings = loadings;
      result.pi = pi;
    }
  }
  result.z = std::move(z);
  result.hyper = hyper;
  return result;
}

RunResult run(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
              const RunConfig& config, TraceWriter* writer) {
  if (config.algorithm == Algorithm::collapsed) {
    return run_collapsed_baseline(x_train, x_test, config, writer);
  }
  return run_hybrid(x_train, x_test, config, writer);
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "hybrid") return Algorithm::hybrid;
  if (name == "collapsed") return Algorithm::collapsed;
  if (name == "uncollapsed") return Algorithm::uncollapsed;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

Scheduler scheduler_from_name(const std::string& name) {
  if (name == "serial") return Scheduler::serial;
  if (name == "concurrent") return Scheduler::concurrent;
  throw std::invalid_argument("unknown scheduler '" + name + "'");
}

}  // namespace ibp
