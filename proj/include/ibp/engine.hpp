// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ibp/feature_matrix.hpp"
#include "ibp/hyper.hpp"
#include "ibp/messages.hpp"
#include "ibp/random.hpp"
#include "ibp/samplers.hpp"
#include "ibp/trace.hpp"

namespace ibp {

enum class Algorithm { hybrid, collapsed, uncollapsed };
enum class Scheduler { serial, concurrent };

struct RunConfig {
  Algorithm algorithm = Algorithm::hybrid;
  int processors = 1;
  int iterations = 1000;
  int sub_iterations = 5;
  std::uint64_t seed = 0;
  HyperParams hyper;
  Scheduler scheduler = Scheduler::concurrent;
  int heldout_gibbs_passes = 10;
  /// Initial feature count; columns start as Bernoulli(1/2) entries. The
  /// uncollapsed baseline cannot create features and requires init_k >= 1.
  int init_k = 0;
  /// When > 0, runs the finite K-feature model: K pinned, births off, pruning
  /// off, and the alpha/K pseudo count applied to the feature priors.
  int pinned_k = 0;

  bool births_enabled() const {
    return algorithm == Algorithm::hybrid && pinned_k == 0;
  }
  void validate(int n_train) const;
};

/// One worker's row slice of the data plus its private sampling state.
struct WorkerShard {
  int id = 0;
  int row_begin = 0;
  int row_end = 0;  // global rows [row_begin, row_end)
  int n_total = 0;
  Eigen::MatrixXd x;
  FeatureMatrix z;
  TailState tail;
  Eigen::MatrixXd loadings;
  Eigen::VectorXd pi;
  HyperParams hyper;
  RngStream rng;
  std::int64_t iteration = 0;
  bool is_feature_worker = false;
  bool births = true;
  std::vector<long> rows_swept;               // per-row sweep counter (diagnostics)
  std::uint64_t last_broadcast_digest = 0;

  WorkerShard() : z(0), tail(0) {}
  int n_rows() const { return row_end - row_begin; }
};

/// Contiguous row blocks of size ceil(N/P) or floor(N/P); shard p gets the
/// RNG stream (seed, 1 + p).
std::vector<WorkerShard> shard_data(const Eigen::MatrixXd& x, int processors,
                                    std::uint64_t seed);

/// Applies the broadcast (column alignment, new parameters), runs the
/// sub-iterations, and emits the shard's summary statistics.
SyncMessage worker_step(WorkerShard& shard, const BroadcastMessage& broadcast,
                        int sub_iterations);

struct MasterState {
  std::int64_t iteration = -1;  // becomes 0 at the bootstrap sync
  int n_total = 0;
  int d = 0;
  int processors = 1;
  int k_plus = 0;
  HyperParams hyper;
  std::vector<int> shard_sizes;
  double x_sq_norm = 0.0;
  bool prune = true;
  double pi_pseudo_count = 0.0;  // > 0 in pinned-K mode
  int p_prime = 0;               // feature worker for the upcoming step
  Eigen::MatrixXd loadings;
  Eigen::VectorXd pi;
  RngStream rng;
};

/// Validates the per-worker messages, merges counts and sufficient statistics,
/// prunes dead instantiated columns, promotes the feature worker's tail,
/// resamples (A, pi, alpha, sigmas), draws the next feature worker, and emits
/// the broadcast for the following step.
BroadcastMessage master_sync(const std::vector<SyncMessage>& messages, MasterState& state);

/// Post-sync global Z: every shard's kept columns plus the promoted tail of
/// the worker that was p' during the step.
FeatureMatrix assemble_global_z(const std::vector<WorkerShard>& shards,
                                const std::vector<std::int32_t>& kept_columns,
                                int previous_feature_worker);

struct RunResult {
  std::vector<TraceRecord> trace;
  FeatureMatrix z;
  Eigen::MatrixXd loadings;
  Eigen::VectorXd pi;
  HyperParams hyper;

  RunResult() : z(0) {}
};

RunResult run_hybrid(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
                     const RunConfig& config, TraceWriter* writer = nullptr);
RunResult run_collapsed_baseline(const Eigen::MatrixXd& x_train,
                                 const Eigen::MatrixXd& x_test, const RunConfig& config,
                                 TraceWriter* writer = nullptr);
/// Dispatches on config.algorithm.
RunResult run(const Eigen::MatrixXd& x_train, const Eigen::MatrixXd& x_test,
              const RunConfig& config, TraceWriter* writer = nullptr);

Algorithm algorithm_from_name(const std::string& name);
Scheduler scheduler_from_name(const std::string& name);

}  // namespace ibp
