// Apache License, Version 2.0, refer to LICENSE.txt

#include "ibp/trace.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ibp {

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

double parse_double(const std::string& field, int line_number) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("trace: line " + std::to_string(line_number) +
                             ": bad numeric field '" + field + "'");
  }
}

long long parse_int(const std::string& field, int line_number) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("trace: line " + std::to_string(line_number) +
                             ": bad integer field '" + field + "'");
  }
}

}  // namespace

std::string format_trace_record(const TraceRecord& r) {
  char wall[32];
  std::snprintf(wall, sizeof(wall), "%.6f", r.wall_seconds);
  std::ostringstream out;
  out << r.iteration << ',' << wall << ',' << r.k_plus << ',' << format_double(r.alpha)
      << ',' << format_double(r.sigma_x) << ',' << format_double(r.sigma_a) << ','
      << format_double(r.train_joint_ll) << ',' << format_double(r.heldout_joint_ll)
      << ',' << r.p_prime;
  return out.str();
}

TraceWriter::TraceWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("trace: cannot open '" + path + "' for writing");
  out_ << kTraceHeader << '\n';
  out_.flush();
}

void TraceWriter::append(const TraceRecord& record) {
  out_ << format_trace_record(record) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("trace: write failed");
}

void write_trace(const std::string& path, const std::vector<TraceRecord>& records) {
  TraceWriter writer(path);
  for (const auto& r : records) writer.append(r);
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: line 1: missing header");
  if (line != kTraceHeader) throw std::runtime_error("trace: line 1: unexpected header");
  std::vector<TraceRecord> records;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream split(line);
    while (std::getline(split, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw std::runtime_error("trace: line " + std::to_string(line_number) +
                               ": expected 9 fields, got " + std::to_string(fields.size()));
    }
    TraceRecord r;
    r.iteration = parse_int(fields[0], line_number);
    r.wall_seconds = parse_double(fields[1], line_number);
    r.k_plus = static_cast<std::int32_t>(parse_int(fields[2], line_number));
    r.alpha = parse_double(fields[3], line_number);
    r.sigma_x = parse_double(fields[4], line_number);
    r.sigma_a = parse_double(fields[5], line_number);
    r.train_joint_ll = parse_double(fields[6], line_number);
    r.heldout_joint_ll = parse_double(fields[7], line_number);
    r.p_prime = static_cast<std::int32_t>(parse_int(fields[8], line_number));
    records.push_back(r);
  }
  return records;
}

}  // namespace ibp
