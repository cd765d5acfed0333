// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/messages.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace ibp {

namespace {

constexpr std::uint32_t kMagic = 0x4950424d;  // "MBPI" little-endian
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kKindSync = 1;
constexpr std::uint8_t kKindBroadcast = 2;

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void i32_block(const std::vector<std::int32_t>& v) {
    u64(v.size());
    for (const auto x : v) i32(x);
  }

  void matrix_block(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::vector<std::int32_t> i32_block() {
    const std::uint64_t n = u64();
    need(4 * n);
    std::vector<std::int32_t> v(n);
    for (auto& x : v) x = i32();
    return v;
  }

  Eigen::MatrixXd matrix_block() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    need(8 * rows * cols);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint64_t r = 0; r < rows; ++r) {
      for (std::uint64_t c = 0; c < cols; ++c) m(r, c) = f64();
    }
    return m;
  }

  void finish() const {
    if (pos_ != bytes_.size()) throw std::runtime_error("message: trailing bytes");
  }

 private:
  void need(std::uint64_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("message: truncated payload");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, std::uint8_t kind) {
  w.u32(kMagic);
  w.u32(kVersion);
  w.u8(kind);
}

void read_header(Reader& r, std::uint8_t kind) {
  if (r.u32() != kMagic) throw std::runtime_error("message: bad magic");
  if (r.u32() != kVersion) throw std::runtime_error("message: unsupported version");
  if (r.u8() != kind) throw std::runtime_error("message: wrong message kind");
}

void write_hyper(Writer& w, const HyperParams& h) {
  w.f64(h.alpha);
  w.f64(h.sigma_x);
  w.f64(h.sigma_a);
  w.f64(h.alpha_prior.shape);
  w.f64(h.alpha_prior.rate);
  w.f64(h.variance_step);
  w.u8(h.resample.alpha ? 1 : 0);
  w.u8(h.resample.sigma_x ? 1 : 0);
  w.u8(h.resample.sigma_a ? 1 : 0);
}

HyperParams read_hyper(Reader& r) {
  HyperParams h;
  h.alpha = r.f64();
  h.sigma_x = r.f64();
  h.sigma_a = r.f64();
  h.alpha_prior.shape = r.f64();
  h.alpha_prior.rate = r.f64();
  h.variance_step = r.f64();
  h.resample.alpha = r.u8() != 0;
  h.resample.sigma_x = r.u8() != 0;
  h.resample.sigma_a = r.u8() != 0;
  return h;
}

}  // namespace

bool SyncMessage::operator==(const SyncMessage& other) const {
  return shard_id == other.shard_id && iteration == other.iteration &&
         instantiated_counts == other.instantiated_counts &&
         tail_columns == other.tail_columns && ztz == other.ztz && ztx == other.ztx &&
         local_loglik == other.local_loglik;
}

bool BroadcastMessage::operator==(const BroadcastMessage& other) const {
  return iteration == other.iteration && k_plus == other.k_plus &&
         loadings == other.loadings && pi == other.pi && hyper == other.hyper &&
         kept_columns == other.kept_columns && promoted_count == other.promoted_count &&
         p_prime == other.p_prime;
}

std::vector<std::uint8_t> serialize(const SyncMessage& message) {
  Writer w;
  write_header(w, kKindSync);
  w.i32(message.shard_id);
  w.i64(message.iteration);
  w.i32_block(message.instantiated_counts);
  w.u64(message.tail_columns.size());
  for (const auto& block : message.tail_columns) w.i32_block(block.rows);
  w.matrix_block(message.ztz);
  w.matrix_block(message.ztx);
  w.f64(message.local_loglik);
  return w.take();
}

SyncMessage deserialize_sync(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  read_header(r, kKindSync);
  SyncMessage m;
  m.shard_id = r.i32();
  m.iteration = r.i64();
  m.instantiated_counts = r.i32_block();
  const std::uint64_t n_tail = r.u64();
  m.tail_columns.resize(n_tail);
  for (auto& block : m.tail_columns) block.rows = r.i32_block();
  m.ztz = r.matrix_block();
  m.ztx = r.matrix_block();
  m.local_loglik = r.f64();
  r.finish();
  return m;
}

std::vector<std::uint8_t> serialize(const BroadcastMessage& message) {
  Writer w;
  write_header(w, kKindBroadcast);
  w.i64(message.iteration);
  w.i32(message.k_plus);
  w.matrix_block(message.loadings);
  w.matrix_block(message.pi);
  write_hyper(w, message.hyper);
  w.i32_block(message.kept_columns);
  w.i32(message.promoted_count);
  w.i32(message.p_prime);
  return w.take();
}

BroadcastMessage deserialize_broadcast(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  read_header(r, kKindBroadcast);
  BroadcastMessage m;
  m.iteration = r.i64();
  m.k_plus = r.i32();
  m.loadings = r.matrix_block();
  const Eigen::MatrixXd pi = r.matrix_block();
  if (pi.cols() > 1) throw std::runtime_error("message: pi must be a column vector");
  m.pi = pi;
  m.hyper = read_hyper(r);
  m.kept_columns = r.i32_block();
  m.promoted_count = r.i32();
  m.p_prime = r.i32();
  r.finish();
  return m;
}

std::uint64_t digest(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace ibp
