// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace ibp {

/// One row of the run trace, in the CSV column order.
struct TraceRecord {
  std::int64_t iteration = 0;
  double wall_seconds = 0.0;
  std::int32_t k_plus = 0;
  double alpha = 0.0;
  double sigma_x = 0.0;
  double sigma_a = 0.0;
  double train_joint_ll = 0.0;
  double heldout_joint_ll = 0.0;
  std::int32_t p_prime = 0;

  bool operator==(const TraceRecord&) const = default;
};

inline constexpr const char* kTraceHeader =
    "iter,wall_s,k_plus,alpha,sigma_x,sigma_a,train_joint_ll,heldout_joint_ll,p_prime";

std::string format_trace_record(const TraceRecord& record);

/// Append-only trace writer; the header goes out at open and every record is
/// flushed so a mid-run failure preserves the partial trace.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  void append(const TraceRecord& record);

 private:
  std::ofstream out_;
};

void write_trace(const std::string& path, const std::vector<TraceRecord>& records);

/// Parses a trace file; malformed content raises std::runtime_error naming the
/// offending line.
std::vector<TraceRecord> read_trace(const std::string& path);

}  // namespace ibp
