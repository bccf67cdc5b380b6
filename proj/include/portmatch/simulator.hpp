#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "portmatch/graph.hpp"
#include "portmatch/matchers.hpp"
#include "portmatch/rng.hpp"
#include "portmatch/traffic.hpp"
#include "portmatch/voq.hpp"

namespace portmatch {

struct Departure {
  std::size_t input = 0;
  std::size_t output = 0;
  Slot arrival_slot = 0;
  Slot delay = 0;
};

/// One slot of the switch: first every pair of `m` forwards the head packet of
/// its VOQ, then `arrivals` are appended with timestamp `slot`. A packet
/// therefore waits at least one slot. Serving an empty VOQ throws.
inline void step(VoqState& voq, const Matching& m, std::span<const Edge> arrivals, Slot slot,
                 std::vector<Departure>& departures) {
  for (const Edge& e : m.pairs()) {
    const Slot a = voq.pop(e.input, e.output);
    departures.push_back({e.input, e.output, a, a < 0 ? 0 : slot - a});
  }
  for (const Edge& e : arrivals) voq.push(e.input, e.output, slot);
}

inline std::vector<Departure> step(VoqState& voq, const Matching& m,
                                   std::span<const Edge> arrivals, Slot slot) {
  std::vector<Departure> out;
  step(voq, m, arrivals, slot, out);
  return out;
}

/// 0.995 quantile of the standard normal (two-sided 99% interval).
inline constexpr double kZ99 = 2.5758293035489004;

struct StopRule {
  bool ci_enabled = true;
  double relative_halfwidth = 0.01;
  int batches = 30;
  double warmup_fraction = 0.1;
  Slot block_slots = 1000;
  /// Slots between two evaluations of the stopping rule.
  Slot check_every = 10000;
};

struct SimConfig {
  std::size_t n_inputs = 8;
  std::size_t n_outputs = 8;
  PolicyId policy;
  TrafficModel traffic = BernoulliTraffic{};
  std::uint64_t seed = 1;
  Slot max_slots = 100000;
  StopRule stop;
  /// Reject inadmissible loads instead of running them.
  bool strict = false;
  /// Sampling period of max_port_queue_trajectory; 0 picks max_slots / 1000.
  Slot trajectory_stride = 0;
  /// Period of the packet-conservation audit.
  Slot conservation_every = 10000;
};

enum class StopReason { ConfidenceInterval, MaxSlots };

inline std::string to_string(StopReason r) {
  return r == StopReason::ConfidenceInterval ? "ci" : "max_slots";
}

struct SimReport {
  std::string policy;
  std::uint64_t seed = 0;
  Slot slots_run = 0;
  StopReason stop_reason = StopReason::MaxSlots;

  std::int64_t arrived = 0;
  std::int64_t departed = 0;
  std::vector<std::int64_t> arrived_input, arrived_output;
  std::vector<std::int64_t> departed_input, departed_output;

  /// Mean sojourn delay in slots after warm-up; absent when nothing departed.
  std::optional<double> mean_delay;
  /// Batch-means 99% half-width; absent without enough batches.
  std::optional<double> ci99_halfwidth;

  std::vector<Weight> max_port_queue_trajectory;
  Slot trajectory_stride = 1;
  /// Time-averaged max port queue over each quarter of the run.
  std::array<double, 4> max_queue_quarter_mean{};
  Weight max_queue_final = 0;
  std::int64_t conservation_checks = 0;

  double epsilon_star = 0.0;
  bool admissible = true;
};

namespace detail {

struct DelayBlocks {
  std::vector<double> delay_sum;
  std::vector<std::int64_t> delay_count;
  std::vector<double> max_queue_sum;
  std::vector<Slot> slots;

  void ensure(std::size_t b) {
    if (b >= delay_sum.size()) {
      delay_sum.resize(b + 1, 0.0);
      delay_count.resize(b + 1, 0);
      max_queue_sum.resize(b + 1, 0.0);
      slots.resize(b + 1, 0);
    }
  }
};

struct DelayEstimate {
  std::optional<double> mean;
  std::optional<double> halfwidth;
};

// Batch means over blocks [0, n_blocks): the leading warm-up share (whole
// blocks, rounded down) is dropped and the rest is cut into `batches` equal
// consecutive batches (surplus leading blocks dropped).
inline DelayEstimate estimate(const DelayBlocks& b, std::size_t n_blocks, const StopRule& rule) {
  DelayEstimate est;
  const auto warm = static_cast<std::size_t>(rule.warmup_fraction * static_cast<double>(n_blocks));
  if (warm >= n_blocks) return est;
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t k = warm; k < n_blocks; ++k) {
    sum += b.delay_sum[k];
    count += b.delay_count[k];
  }
  if (count == 0) return est;
  est.mean = sum / static_cast<double>(count);

  const std::size_t usable = n_blocks - warm;
  const auto nb = static_cast<std::size_t>(rule.batches);
  if (nb < 2 || usable < nb) return est;
  const std::size_t per = usable / nb;
  const std::size_t first = n_blocks - per * nb;
  std::vector<double> means;
  means.reserve(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    double s = 0.0;
    std::int64_t c = 0;
    for (std::size_t q = first + k * per; q < first + (k + 1) * per; ++q) {
      s += b.delay_sum[q];
      c += b.delay_count[q];
    }
    if (c == 0) return est;
    means.push_back(s / static_cast<double>(c));
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= static_cast<double>(nb);
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= static_cast<double>(nb - 1);
  est.halfwidth = kZ99 * std::sqrt(var / static_cast<double>(nb));
  return est;
}

inline Weight sum_counts(const VoqState& v) {
  Weight s = 0;
  for (Weight x : v.counts().data()) s += x;
  return s;
}

}  // namespace detail

/// Runs the switch slot by slot: build the graph, schedule, step, record.
/// Stops when the 99% batch-means half-width falls within the configured
/// fraction of the mean delay, or at max_slots.
inline SimReport simulate(const SimConfig& cfg) {
  if (traffic_inputs(cfg.traffic) != cfg.n_inputs || traffic_outputs(cfg.traffic) != cfg.n_outputs)
    throw std::invalid_argument("simulate: traffic model does not match switch size");
  if (cfg.max_slots < 0) throw std::invalid_argument("simulate: negative max_slots");
  if (cfg.stop.block_slots <= 0) throw std::invalid_argument("simulate: block_slots must be > 0");

  SimReport rep;
  rep.policy = to_string(cfg.policy);
  rep.seed = cfg.seed;
  const PortLoads loads = port_loads(cfg.traffic);
  rep.epsilon_star = loads.epsilon_star();
  rep.admissible = loads.admissible();
  if (cfg.strict && !rep.admissible)
    throw std::invalid_argument("simulate: inadmissible load (max port load " +
                                std::to_string(loads.max()) + ")");

  const std::size_t n1 = cfg.n_inputs, n2 = cfg.n_outputs;
  rep.arrived_input.assign(n1, 0);
  rep.arrived_output.assign(n2, 0);
  rep.departed_input.assign(n1, 0);
  rep.departed_output.assign(n2, 0);
  rep.trajectory_stride =
      cfg.trajectory_stride > 0 ? cfg.trajectory_stride : std::max<Slot>(1, cfg.max_slots / 1000);

  VoqState voq(n1, n2, /*timestamps=*/true);
  TrafficGenerator traffic(cfg.traffic, cfg.seed);
  Rng policy_rng = make_stream(cfg.seed, 0);
  detail::DelayBlocks blocks;
  std::vector<Edge> arrivals;
  std::vector<Departure> departures;

  Slot slot = 0;
  for (; slot < cfg.max_slots; ++slot) {
    const BipartiteGraph g = graph_from_voq(voq.counts());
    const Matching m = schedule(cfg.policy, g, voq.counts(), policy_rng);
    arrivals.clear();
    traffic.arrivals(arrivals);
    departures.clear();
    step(voq, m, arrivals, slot, departures);

    const auto b = static_cast<std::size_t>(slot / cfg.stop.block_slots);
    blocks.ensure(b);
    for (const Departure& d : departures) {
      blocks.delay_sum[b] += static_cast<double>(d.delay);
      ++blocks.delay_count[b];
      ++rep.departed_input[d.input];
      ++rep.departed_output[d.output];
    }
    for (const Edge& e : arrivals) {
      ++rep.arrived_input[e.input];
      ++rep.arrived_output[e.output];
    }
    rep.arrived += static_cast<std::int64_t>(arrivals.size());
    rep.departed += static_cast<std::int64_t>(departures.size());
    const Weight maxq = voq.max_port_weight();
    blocks.max_queue_sum[b] += static_cast<double>(maxq);
    ++blocks.slots[b];
    if (slot % rep.trajectory_stride == 0) rep.max_port_queue_trajectory.push_back(maxq);

    const Slot done = slot + 1;
    if (cfg.conservation_every > 0 && done % cfg.conservation_every == 0) {
      if (detail::sum_counts(voq) != rep.arrived - rep.departed)
        throw std::logic_error("simulate: packet conservation violated at slot " +
                               std::to_string(slot));
      ++rep.conservation_checks;
    }
    if (cfg.stop.ci_enabled && cfg.stop.check_every > 0 && done % cfg.stop.check_every == 0 &&
        done % cfg.stop.block_slots == 0) {
      const auto est = detail::estimate(blocks, static_cast<std::size_t>(done / cfg.stop.block_slots),
                                        cfg.stop);
      if (est.mean && est.halfwidth && *est.halfwidth <= cfg.stop.relative_halfwidth * *est.mean) {
        slot = done;
        rep.stop_reason = StopReason::ConfidenceInterval;
        break;
      }
    }
  }
  rep.slots_run = slot;

  const std::size_t n_blocks = blocks.delay_sum.size();
  const auto est = detail::estimate(blocks, n_blocks, cfg.stop);
  rep.mean_delay = est.mean;
  rep.ci99_halfwidth = est.halfwidth;
  rep.max_queue_final = voq.max_port_weight();

  std::array<double, 4> qsum{};
  std::array<Slot, 4> qslots{};
  for (std::size_t k = 0; k < n_blocks; ++k) {
    const std::size_t q = std::min<std::size_t>(3, k * 4 / n_blocks);
    qsum[q] += blocks.max_queue_sum[k];
    qslots[q] += blocks.slots[k];
  }
  for (std::size_t q = 0; q < 4; ++q)
    rep.max_queue_quarter_mean[q] = qslots[q] ? qsum[q] / static_cast<double>(qslots[q]) : 0.0;
  return rep;
}

}  // namespace portmatch
