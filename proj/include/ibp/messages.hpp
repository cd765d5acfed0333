// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ibp/hyper.hpp"

namespace ibp {

/// Active row indices (within the shard) of one tail column; entries are 1 at
/// the listed rows and 0 elsewhere.
struct TailColumnBlock {
  std::vector<std::int32_t> rows;
  bool operator==(const TailColumnBlock&) const = default;
};

/// Worker to master, once per global iteration.
struct SyncMessage {
  std::int32_t shard_id = 0;
  std::int64_t iteration = 0;
  /// Local active counts for the K+ instantiated features.
  std::vector<std::int32_t> instantiated_counts;
  /// Tail columns offered for promotion; nonempty only from the feature worker.
  std::vector<TailColumnBlock> tail_columns;
  /// Local Z^T Z and Z^T X over [instantiated | tail] columns; additive across
  /// shards once padded to the global column set.
  Eigen::MatrixXd ztz;
  Eigen::MatrixXd ztx;
  /// Shard data log-likelihood given the broadcast parameters (diagnostic).
  double local_loglik = 0.0;

  bool operator==(const SyncMessage& other) const;
};

/// Master to workers, once per global iteration.
struct BroadcastMessage {
  std::int64_t iteration = 0;
  std::int32_t k_plus = 0;
  Eigen::MatrixXd loadings;  // K+ x D
  Eigen::VectorXd pi;        // K+
  HyperParams hyper;
  /// Surviving previous-instantiated column indices, in order; promoted tail
  /// columns follow them at the end of the new column set.
  std::vector<std::int32_t> kept_columns;
  std::int32_t promoted_count = 0;
  std::int32_t p_prime = 0;

  bool operator==(const BroadcastMessage& other) const;
};

// Stable little-endian binary layout, versioned; see docs/message_format.md.
std::vector<std::uint8_t> serialize(const SyncMessage& message);
std::vector<std::uint8_t> serialize(const BroadcastMessage& message);
SyncMessage deserialize_sync(std::span<const std::uint8_t> bytes);
BroadcastMessage deserialize_broadcast(std::span<const std::uint8_t> bytes);

/// FNV-1a digest, used to check that all workers received identical broadcasts.
std::uint64_t digest(std::span<const std::uint8_t> bytes);

}  // namespace ibp
