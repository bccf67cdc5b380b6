#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "portmatch/graph.hpp"
#include "portmatch/matchers.hpp"
#include "portmatch/rng.hpp"
#include "portmatch/voq.hpp"

namespace portmatch {

/// Lower bound on the clearance time: the heaviest port's load.
inline Weight tau_star(const Matrix<Weight>& voq) { return VoqState(voq).max_port_weight(); }

/// Adversarial n x n loading: input 0 holds one packet for each of outputs
/// 0..n-2, input i >= 1 holds n-1 packets for output i-1. tau* = n, while
/// edge-weight policies need at least 2n-3 slots.
inline Matrix<Weight> clearance_example(std::size_t n) {
  if (n < 2) throw std::invalid_argument("clearance_example: n must be >= 2");
  Matrix<Weight> voq(n, n, 0);
  for (std::size_t j = 0; j + 1 < n; ++j) voq(0, j) = 1;
  for (std::size_t i = 1; i < n; ++i) voq(i, i - 1) = static_cast<Weight>(n - 1);
  return voq;
}

struct ClearanceReport {
  PolicyId policy;
  std::int64_t slots_used = 0;
  Weight tau_star = 0;
  /// Max port weight at the start of every slot, followed by the final value
  /// (0), so the series has slots_used + 1 entries.
  std::vector<Weight> max_port_weight;
  /// Per-slot matchings; filled only when requested.
  std::vector<Matching> schedule;

  bool optimal() const { return slots_used == tau_star; }
};

struct ClearanceOptions {
  bool keep_schedule = false;
  std::uint64_t seed = 1;  // RandomMaximal only
};

/// Serves `voq` slot by slot under `policy` with no arrivals until empty.
/// Throws std::runtime_error after tau* * 4 + N^2 slots.
inline ClearanceReport run_clearance(const Matrix<Weight>& voq, const PolicyId& policy,
                                     const ClearanceOptions& opts = {}) {
  VoqState state(voq);
  ClearanceReport rep;
  rep.policy = policy;
  rep.tau_star = state.max_port_weight();
  const std::size_t n = std::max(voq.rows(), voq.cols());
  const std::int64_t cap = rep.tau_star * 4 + static_cast<std::int64_t>(n * n);
  Rng rng = make_stream(opts.seed, 0);
  while (state.total() > 0) {
    if (rep.slots_used >= cap)
      throw std::runtime_error("run_clearance: policy " + to_string(policy) + " still has " +
                               std::to_string(state.total()) + " packets after " +
                               std::to_string(rep.slots_used) + " slots");
    rep.max_port_weight.push_back(state.max_port_weight());
    const BipartiteGraph g = graph_from_voq(state.counts());
    Matching m = schedule(policy, g, state.counts(), rng);
    require_valid(g, m, "run_clearance");
    for (const Edge& e : m.pairs()) state.pop(e.input, e.output);
    if (opts.keep_schedule) rep.schedule.push_back(std::move(m));
    ++rep.slots_used;
  }
  rep.max_port_weight.push_back(0);
  return rep;
}

/// Applies `schedule` to `voq` and returns the remainder. Throws if any
/// matching serves an empty VOQ.
inline Matrix<Weight> replay(Matrix<Weight> voq, const std::vector<Matching>& schedule) {
  for (const Matching& m : schedule)
    for (const Edge& e : m.pairs()) {
      if (voq(e.input, e.output) <= 0)
        throw std::logic_error("replay: schedule serves an empty VOQ");
      --voq(e.input, e.output);
    }
  return voq;
}

struct BvnDecomposition {
  std::vector<Matching> matchings;
  std::vector<Weight> multiplicities;

  Weight total_multiplicity() const {
    Weight t = 0;
    for (Weight k : multiplicities) t += k;
    return t;
  }

  /// Sum over k of multiplicity_k * M_k.
  Matrix<Weight> reconstruct(std::size_t n1, std::size_t n2) const {
    Matrix<Weight> out(n1, n2, 0);
    for (std::size_t k = 0; k < matchings.size(); ++k)
      for (const Edge& e : matchings[k].pairs()) out(e.input, e.output) += multiplicities[k];
    return out;
  }
};

/// Batch decomposition by repeated critical-port extraction. Each round takes
/// a critical-port matching of the remainder and runs it for the largest
/// number of slots that keeps every VOQ non-negative and every port within the
/// shrinking bound; the multiplicities therefore sum to exactly tau*.
inline BvnDecomposition bvn_decompose(const Matrix<Weight>& voq) {
  BvnDecomposition out;
  VoqState rest(voq);
  while (rest.total() > 0) {
    const Weight top = rest.max_port_weight();
    const BipartiteGraph g = graph_from_voq(rest.counts());
    const Matching m = critical_port_matching(g, msm(g));
    Weight k = top;
    for (const Edge& e : m.pairs()) k = std::min(k, rest.count(e.input, e.output));
    for (const PortId& p : g.ports())
      if (!m.matches(p)) k = std::min(k, top - g.weight(p));
    if (k < 1) throw std::logic_error("bvn_decompose: no progress");
    for (const Edge& e : m.pairs()) rest.add(e.input, e.output, -k);
    out.matchings.push_back(m);
    out.multiplicities.push_back(k);
  }
  return out;
}

}  // namespace portmatch
