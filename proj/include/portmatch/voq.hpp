#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "portmatch/matrix.hpp"

namespace portmatch {

using Weight = std::int64_t;
using Slot = std::int64_t;

/// Virtual output queue occupancy of an N1 x N2 switch.
///
/// counts(i, j) is the number of packets at input i destined for output j.
/// Row and column sums (the port weights) are maintained incrementally. When
/// timestamps are enabled each VOQ also keeps a FIFO of arrival slots so that
/// departures can report a per-packet delay.
class VoqState {
 public:
  VoqState() = default;
  VoqState(std::size_t n_inputs, std::size_t n_outputs, bool timestamps = false)
      : counts_(n_inputs, n_outputs, 0),
        input_weight_(n_inputs, 0),
        output_weight_(n_outputs, 0),
        timestamps_(timestamps) {
    if (timestamps) fifos_.resize(n_inputs * n_outputs);
  }

  /// Builds a state from a count matrix. Entries must be non-negative.
  explicit VoqState(const Matrix<Weight>& counts)
      : VoqState(counts.rows(), counts.cols()) {
    for (std::size_t i = 0; i < counts.rows(); ++i)
      for (std::size_t j = 0; j < counts.cols(); ++j) {
        if (counts(i, j) < 0) throw std::invalid_argument("VoqState: negative count");
        add(i, j, counts(i, j));
      }
  }

  std::size_t n_inputs() const { return counts_.rows(); }
  std::size_t n_outputs() const { return counts_.cols(); }
  bool has_timestamps() const { return timestamps_; }

  Weight count(std::size_t i, std::size_t j) const { return counts_(i, j); }
  const Matrix<Weight>& counts() const { return counts_; }
  Weight input_weight(std::size_t i) const { return input_weight_[i]; }
  Weight output_weight(std::size_t j) const { return output_weight_[j]; }
  Weight total() const { return total_; }

  Weight max_port_weight() const {
    Weight best = 0;
    for (Weight w : input_weight_) best = std::max(best, w);
    for (Weight w : output_weight_) best = std::max(best, w);
    return best;
  }

  /// Adds packets without timestamps (clearance instances, tests).
  void add(std::size_t i, std::size_t j, Weight packets) {
    if (timestamps_) throw std::logic_error("VoqState::add on a timestamped state");
    counts_(i, j) += packets;
    input_weight_[i] += packets;
    output_weight_[j] += packets;
    total_ += packets;
  }

  /// Appends one packet that arrived in `slot`.
  void push(std::size_t i, std::size_t j, Slot slot) {
    if (timestamps_) fifos_[i * n_outputs() + j].push_back(slot);
    ++counts_(i, j);
    ++input_weight_[i];
    ++output_weight_[j];
    ++total_;
  }

  /// Removes the head packet of VOQ (i, j); returns its arrival slot, or -1
  /// when timestamps are disabled. Throws if the VOQ is empty.
  Slot pop(std::size_t i, std::size_t j) {
    if (counts_(i, j) <= 0)
      throw std::logic_error("VoqState::pop on empty VOQ (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
    --counts_(i, j);
    --input_weight_[i];
    --output_weight_[j];
    --total_;
    if (!timestamps_) return -1;
    auto& q = fifos_[i * n_outputs() + j];
    Slot s = q.front();
    q.pop_front();
    return s;
  }

  /// Number of timestamps held for VOQ (i, j); equals count(i, j) when enabled.
  std::size_t fifo_length(std::size_t i, std::size_t j) const {
    return !timestamps_ ? 0 : fifos_[i * n_outputs() + j].size();
  }

 private:
  Matrix<Weight> counts_;
  std::vector<Weight> input_weight_;
  std::vector<Weight> output_weight_;
  Weight total_ = 0;
  bool timestamps_ = false;
  std::vector<std::deque<Slot>> fifos_;
};

// Plain-text VOQ format: first line "N1 N2", then N1 rows of N2 integers.

inline Matrix<Weight> read_voq(std::istream& in) {
  long long n1 = -1, n2 = -1;
  if (!(in >> n1 >> n2)) throw std::runtime_error("VOQ file: missing \"N1 N2\" header");
  if (n1 < 0 || n2 < 0) throw std::runtime_error("VOQ file: negative dimensions");
  Matrix<Weight> m(static_cast<std::size_t>(n1), static_cast<std::size_t>(n2), 0);
  for (long long i = 0; i < n1; ++i)
    for (long long j = 0; j < n2; ++j) {
      long long v;
      if (!(in >> v))
        throw std::runtime_error("VOQ file: expected " + std::to_string(n1 * n2) +
                                 " entries, got fewer");
      if (v < 0) throw std::runtime_error("VOQ file: negative entry");
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
    }
  std::string extra;
  if (in >> extra) throw std::runtime_error("VOQ file: trailing data \"" + extra + "\"");
  return m;
}

inline void write_voq(std::ostream& out, const Matrix<Weight>& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

inline std::string voq_to_string(const Matrix<Weight>& m) {
  std::ostringstream os;
  write_voq(os, m);
  return os.str();
}

}  // namespace portmatch
