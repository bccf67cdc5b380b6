#pragma once

// Brute-force and combinatorial verifiers. Nothing here calls the path search
// or the matchers; these are the independent ground truth for tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "portmatch/graph.hpp"

namespace portmatch::oracle {

inline constexpr std::size_t kDefaultPortCap = 12;

/// Calls `visit` once for every matching of `g`, including the empty one.
inline void for_each_matching(const BipartiteGraph& g,
                              const std::function<void(const Matching&)>& visit,
                              std::size_t port_cap = kDefaultPortCap) {
  if (g.n_ports() > port_cap)
    throw std::invalid_argument("enumerate_matchings: graph has " + std::to_string(g.n_ports()) +
                                " ports, cap is " + std::to_string(port_cap));
  Matching m(g);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == g.n_inputs()) {
      visit(m);
      return;
    }
    self(self, i + 1);
    for (std::size_t j : g.neighbors(PortId::input(i))) {
      if (m.matches(PortId::output(j))) continue;
      m.add(i, j);
      self(self, i + 1);
      m.remove(i, j);
    }
  };
  rec(rec, 0);
}

inline std::vector<Matching> enumerate_matchings(const BipartiteGraph& g,
                                                 std::size_t port_cap = kDefaultPortCap) {
  std::vector<Matching> out;
  for_each_matching(g, [&](const Matching& m) { out.push_back(m); }, port_cap);
  return out;
}

namespace detail {

inline void require_one_side(const std::vector<PortId>& s) {
  for (const PortId& p : s)
    if (p.side != s.front().side) throw std::invalid_argument("port set spans both sides");
}

// Kuhn's algorithm restricted to the ports in `s`.
inline std::size_t cover_size(const BipartiteGraph& g, const std::vector<PortId>& s) {
  if (s.empty()) return 0;
  const Side near = s.front().side;
  const Side far = opposite(near);
  std::vector<std::size_t> far_owner(g.n_side(far), kUnmatched);
  std::vector<char> visited;
  auto try_port = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v : g.neighbors({near, u})) {
      if (visited[v]) continue;
      visited[v] = 1;
      if (far_owner[v] == kUnmatched || self(self, far_owner[v])) {
        far_owner[v] = u;
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (const PortId& p : s) {
    visited.assign(g.n_side(far), 0);
    if (try_port(try_port, p.index)) ++matched;
  }
  return matched;
}

}  // namespace detail

/// True iff some matching of `g` matches every port of `s` (all one side).
inline bool can_cover(const BipartiteGraph& g, std::vector<PortId> s) {
  detail::require_one_side(s);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (const PortId& p : s) g.check_index(p);
  return detail::cover_size(g, s) == s.size();
}

/// A subset whose neighbourhood is smaller than itself.
struct HallWitness {
  std::vector<PortId> subset;
  std::vector<PortId> neighborhood;
};

inline std::vector<PortId> neighborhood(const BipartiteGraph& g, const std::vector<PortId>& s) {
  std::set<PortId> n;
  for (const PortId& p : s)
    for (std::size_t v : g.neighbors(p)) n.insert({opposite(p.side), v});
  return {n.begin(), n.end()};
}

/// Exhaustive subset scan (|s| <= 20). Returns nothing when `s` is coverable,
/// otherwise the first violating subset in increasing bitmask order.
inline std::optional<HallWitness> hall_witness(const BipartiteGraph& g, std::vector<PortId> s) {
  detail::require_one_side(s);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() > 20) throw std::invalid_argument("hall_witness: subset scan capped at 20 ports");
  for (std::uint32_t mask = 1; mask < (1u << s.size()); ++mask) {
    std::vector<PortId> sub;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (mask & (1u << k)) sub.push_back(s[k]);
    auto nb = neighborhood(g, sub);
    if (nb.size() < sub.size()) return HallWitness{std::move(sub), std::move(nb)};
  }
  return std::nullopt;
}

inline std::vector<PortId> ports_at_least(const BipartiteGraph& g, Side side, Weight level) {
  std::vector<PortId> out;
  for (std::size_t k = 0; k < g.n_side(side); ++k)
    if (g.weight({side, k}) >= level) out.push_back({side, k});
  return out;
}

/// Lowest threshold over all matchings. A level l is achievable iff the
/// inputs and the outputs of weight >= l are each coverable; the two covers
/// can always be merged into one matching. Candidate levels are 1 and w + 1
/// for every port weight w.
inline Weight optimal_threshold(const BipartiteGraph& g) {
  std::vector<Weight> levels{1};
  for (const PortId& p : g.ports()) levels.push_back(g.weight(p) + 1);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (Weight l : levels)
    if (can_cover(g, ports_at_least(g, Side::Input, l)) &&
        can_cover(g, ports_at_least(g, Side::Output, l)))
      return l;
  return levels.back();  // max weight + 1 is always achievable
}

/// Same quantity by enumeration; oracle-scale graphs only.
inline Weight optimal_threshold_bruteforce(const BipartiteGraph& g,
                                           std::size_t port_cap = kDefaultPortCap) {
  Weight best = g.max_weight() + 1;
  for_each_matching(g, [&](const Matching& m) { best = std::min(best, threshold(g, m)); },
                    port_cap);
  return best;
}

inline bool is_lhpf(const BipartiteGraph& g, const Matching& m) {
  return threshold(g, m) == optimal_threshold(g);
}

/// Every maximum-weight port is matched (vacuous when all weights are zero).
inline bool is_critical_port(const BipartiteGraph& g, const Matching& m) {
  const Weight top = g.max_weight();
  if (top == 0) return true;
  for (const PortId& p : g.ports())
    if (g.weight(p) == top && !m.matches(p)) return false;
  return true;
}

inline Weight max_vertex_weight(const BipartiteGraph& g, std::size_t port_cap = kDefaultPortCap) {
  Weight best = 0;
  for_each_matching(g, [&](const Matching& m) { best = std::max(best, matching_weight(g, m)); },
                    port_cap);
  return best;
}

inline bool is_mvm(const BipartiteGraph& g, const Matching& m,
                   std::size_t port_cap = kDefaultPortCap) {
  return matching_weight(g, m) == max_vertex_weight(g, port_cap);
}

inline std::size_t max_cardinality(const BipartiteGraph& g,
                                   std::size_t port_cap = kDefaultPortCap) {
  std::size_t best = 0;
  for_each_matching(g, [&](const Matching& m) { best = std::max(best, m.size()); }, port_cap);
  return best;
}

template <typename T>
T max_edge_weight(const BipartiteGraph& g, const Matrix<T>& w,
                  std::size_t port_cap = kDefaultPortCap) {
  T best{};
  for_each_matching(g,
                    [&](const Matching& m) {
                      T total{};
                      for (const Edge& e : m.pairs()) total += w(e.input, e.output);
                      best = std::max(best, total);
                    },
                    port_cap);
  return best;
}

/// Which kinds of alternating path leave `start`, by depth-first enumeration
/// of every simple alternating path.
struct PathCensus {
  bool augmenting = false;
  bool absorbing = false;
  bool any() const { return augmenting || absorbing; }
};

inline PathCensus alternating_paths_bruteforce(const BipartiteGraph& g, const Matching& m,
                                               PortId start) {
  PathCensus census;
  if (m.matches(start)) throw std::invalid_argument("alternating_paths_bruteforce: start matched");
  const Weight ws = g.weight(start);
  std::set<PortId> on_path{start};
  // `use_matched` selects which edge type the next step must use.
  auto rec = [&](auto&& self, PortId at, bool use_matched, std::size_t length) -> void {
    if (length > 0) {
      if (length % 2 == 1 && !m.matches(at)) census.augmenting = true;
      if (length % 2 == 0 && m.matches(at) && g.weight(at) < ws) census.absorbing = true;
    }
    for (std::size_t v : g.neighbors(at)) {
      const PortId next{opposite(at.side), v};
      const bool in_m = at.side == Side::Input ? m.contains(at.index, v) : m.contains(v, at.index);
      if (in_m != use_matched || on_path.count(next)) continue;
      on_path.insert(next);
      self(self, next, !use_matched, length + 1);
      on_path.erase(next);
    }
  };
  rec(rec, start, false, 0);
  return census;
}

/// Fixpoint condition: no unmatched port has an augmenting or absorbing path.
inline bool no_improving_paths(const BipartiteGraph& g, const Matching& m) {
  for (const PortId& p : g.ports())
    if (!m.matches(p) && alternating_paths_bruteforce(g, m, p).any()) return false;
  return true;
}

}  // namespace portmatch::oracle
