#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "portmatch/voq.hpp"

namespace portmatch {

enum class Side : unsigned char { Input, Output };

inline constexpr Side opposite(Side s) { return s == Side::Input ? Side::Output : Side::Input; }

/// A switch port: an input or an output with its index on that side.
struct PortId {
  Side side = Side::Input;
  std::size_t index = 0;

  static constexpr PortId input(std::size_t i) { return {Side::Input, i}; }
  static constexpr PortId output(std::size_t j) { return {Side::Output, j}; }

  auto operator<=>(const PortId&) const = default;
};

inline std::string to_string(const PortId& p) {
  return (p.side == Side::Input ? "in" : "out") + std::to_string(p.index);
}

inline std::ostream& operator<<(std::ostream& os, const PortId& p) { return os << to_string(p); }

/// An input-output pair. Canonical order is lexicographic (input, output).
struct Edge {
  std::size_t input = 0;
  std::size_t output = 0;

  auto operator<=>(const Edge&) const = default;
};

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

/// Bipartite graph with integer weights on the nodes (ports).
///
/// Adjacency lists are kept sorted so every traversal visits neighbours in
/// canonical order.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t n_inputs, std::size_t n_outputs)
      : input_weight_(n_inputs, 0),
        output_weight_(n_outputs, 0),
        input_adj_(n_inputs),
        output_adj_(n_outputs),
        dense_(n_inputs, n_outputs, 0) {}

  std::size_t n_inputs() const { return input_weight_.size(); }
  std::size_t n_outputs() const { return output_weight_.size(); }
  std::size_t n_ports() const { return n_inputs() + n_outputs(); }
  std::size_t n_side(Side s) const { return s == Side::Input ? n_inputs() : n_outputs(); }

  void add_edge(std::size_t i, std::size_t j) {
    check_index(PortId::input(i));
    check_index(PortId::output(j));
    if (dense_(i, j)) return;
    dense_(i, j) = 1;
    auto& a = input_adj_[i];
    a.insert(std::lower_bound(a.begin(), a.end(), j), j);
    auto& b = output_adj_[j];
    b.insert(std::lower_bound(b.begin(), b.end(), i), i);
    ++n_edges_;
  }

  bool has_edge(std::size_t i, std::size_t j) const {
    return i < n_inputs() && j < n_outputs() && dense_(i, j) != 0;
  }

  std::size_t n_edges() const { return n_edges_; }

  /// Edges in canonical order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(n_edges_);
    for (std::size_t i = 0; i < n_inputs(); ++i)
      for (std::size_t j : input_adj_[i]) out.push_back({i, j});
    return out;
  }

  /// Neighbours of a port (indices on the opposite side), ascending.
  const std::vector<std::size_t>& neighbors(PortId p) const {
    check_index(p);
    return p.side == Side::Input ? input_adj_[p.index] : output_adj_[p.index];
  }

  Weight weight(PortId p) const {
    check_index(p);
    return p.side == Side::Input ? input_weight_[p.index] : output_weight_[p.index];
  }

  void set_weight(PortId p, Weight w) {
    check_index(p);
    if (w < 0) throw std::invalid_argument("BipartiteGraph: negative port weight");
    (p.side == Side::Input ? input_weight_[p.index] : output_weight_[p.index]) = w;
  }

  Weight max_weight() const {
    Weight best = 0;
    for (Weight w : input_weight_) best = std::max(best, w);
    for (Weight w : output_weight_) best = std::max(best, w);
    return best;
  }

  /// All ports, inputs first, each side in index order.
  std::vector<PortId> ports() const {
    std::vector<PortId> out;
    out.reserve(n_ports());
    for (std::size_t i = 0; i < n_inputs(); ++i) out.push_back(PortId::input(i));
    for (std::size_t j = 0; j < n_outputs(); ++j) out.push_back(PortId::output(j));
    return out;
  }

  void check_index(PortId p) const {
    if (p.index >= n_side(p.side))
      throw std::out_of_range("port " + to_string(p) + " out of range");
  }

 private:
  std::vector<Weight> input_weight_;
  std::vector<Weight> output_weight_;
  std::vector<std::vector<std::size_t>> input_adj_;
  std::vector<std::vector<std::size_t>> output_adj_;
  Matrix<unsigned char> dense_;
  std::size_t n_edges_ = 0;
};

/// The per-slot graph: edge (i, j) iff counts(i, j) > 0, port weights are the
/// row and column sums.
inline BipartiteGraph graph_from_voq(const Matrix<Weight>& voq) {
  BipartiteGraph g(voq.rows(), voq.cols());
  std::vector<Weight> col(voq.cols(), 0);
  for (std::size_t i = 0; i < voq.rows(); ++i) {
    Weight row = 0;
    for (std::size_t j = 0; j < voq.cols(); ++j) {
      Weight q = voq(i, j);
      if (q < 0) throw std::invalid_argument("graph_from_voq: negative entry");
      if (q > 0) g.add_edge(i, j);
      row += q;
      col[j] += q;
    }
    g.set_weight(PortId::input(i), row);
  }
  for (std::size_t j = 0; j < voq.cols(); ++j) g.set_weight(PortId::output(j), col[j]);
  return g;
}

inline BipartiteGraph graph_from_voq(const VoqState& voq) { return graph_from_voq(voq.counts()); }

/// A set of input-output pairs with no shared port.
class Matching {
 public:
  Matching() = default;
  Matching(std::size_t n_inputs, std::size_t n_outputs)
      : input_mate_(n_inputs, kUnmatched), output_mate_(n_outputs, kUnmatched) {}

  /// An empty matching sized for `g`.
  explicit Matching(const BipartiteGraph& g) : Matching(g.n_inputs(), g.n_outputs()) {}

  Matching(std::size_t n_inputs, std::size_t n_outputs, std::initializer_list<Edge> pairs)
      : Matching(n_inputs, n_outputs) {
    for (const Edge& e : pairs) add(e.input, e.output);
  }

  std::size_t n_inputs() const { return input_mate_.size(); }
  std::size_t n_outputs() const { return output_mate_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void add(std::size_t i, std::size_t j) {
    if (i >= n_inputs() || j >= n_outputs()) throw std::out_of_range("Matching::add out of range");
    if (input_mate_[i] != kUnmatched || output_mate_[j] != kUnmatched)
      throw std::invalid_argument("Matching::add: port already matched");
    input_mate_[i] = j;
    output_mate_[j] = i;
    ++size_;
  }

  void remove(std::size_t i, std::size_t j) {
    if (!contains(i, j)) throw std::invalid_argument("Matching::remove: pair not present");
    input_mate_[i] = kUnmatched;
    output_mate_[j] = kUnmatched;
    --size_;
  }

  bool contains(std::size_t i, std::size_t j) const {
    return i < n_inputs() && j < n_outputs() && input_mate_[i] == j;
  }

  bool matches(PortId p) const { return mate(p) != kUnmatched; }

  /// Index of the partner on the opposite side, or kUnmatched.
  std::size_t mate(PortId p) const {
    const auto& v = p.side == Side::Input ? input_mate_ : output_mate_;
    if (p.index >= v.size()) throw std::out_of_range("Matching::mate out of range");
    return v[p.index];
  }

  /// Pairs in canonical order.
  std::vector<Edge> pairs() const {
    std::vector<Edge> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < n_inputs(); ++i)
      if (input_mate_[i] != kUnmatched) out.push_back({i, input_mate_[i]});
    return out;
  }

  bool operator==(const Matching& o) const {
    return input_mate_ == o.input_mate_ && output_mate_ == o.output_mate_;
  }

 private:
  std::vector<std::size_t> input_mate_;
  std::vector<std::size_t> output_mate_;
  std::size_t size_ = 0;
};

inline std::string to_string(const Matching& m) {
  std::string s = "{";
  bool first = true;
  for (const Edge& e : m.pairs()) {
    if (!first) s += ",";
    first = false;
    s += "(" + std::to_string(e.input) + "," + std::to_string(e.output) + ")";
  }
  return s + "}";
}

inline bool same_shape(const BipartiteGraph& g, const Matching& m) {
  return g.n_inputs() == m.n_inputs() && g.n_outputs() == m.n_outputs();
}

/// True when every pair of `m` is an edge of `g`.
inline bool is_valid_matching(const BipartiteGraph& g, const Matching& m) {
  if (!same_shape(g, m)) return false;
  for (const Edge& e : m.pairs())
    if (!g.has_edge(e.input, e.output)) return false;
  return true;
}

inline void require_valid(const BipartiteGraph& g, const Matching& m, const char* who) {
  if (!is_valid_matching(g, m))
    throw std::invalid_argument(std::string(who) + ": matching " + to_string(m) +
                                " is not valid for the graph");
}

/// True when no edge of `g` has both endpoints free.
inline bool is_maximal(const BipartiteGraph& g, const Matching& m) {
  for (const Edge& e : g.edges())
    if (!m.matches(PortId::input(e.input)) && !m.matches(PortId::output(e.output))) return false;
  return true;
}

/// Total weight of the ports matched by `m`, both sides.
inline Weight matching_weight(const BipartiteGraph& g, const Matching& m) {
  Weight w = 0;
  for (const Edge& e : m.pairs())
    w += g.weight(PortId::input(e.input)) + g.weight(PortId::output(e.output));
  return w;
}

/// Lowest l >= 1 such that `m` matches every port of weight >= l.
inline Weight threshold(const BipartiteGraph& g, const Matching& m) {
  Weight heaviest_unmatched = 0;
  for (PortId p : g.ports())
    if (!m.matches(p)) heaviest_unmatched = std::max(heaviest_unmatched, g.weight(p));
  return heaviest_unmatched + 1;
}

/// A connected component of the symmetric difference of two matchings. For a
/// path `nodes` runs endpoint to endpoint; for a cycle the first node is not
/// repeated at the end.
struct DiffComponent {
  std::vector<PortId> nodes;
  bool is_cycle = false;

  std::size_t n_edges() const { return is_cycle ? nodes.size() : nodes.size() - 1; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t k = 0; k < n_edges(); ++k) {
      PortId a = nodes[k], b = nodes[(k + 1) % nodes.size()];
      out.push_back(a.side == Side::Input ? Edge{a.index, b.index} : Edge{b.index, a.index});
    }
    return out;
  }
};

/// Decomposes m1 (+) m2 into node-disjoint alternating paths and even cycles.
/// Paths are listed first, each walked from its lower-numbered endpoint
/// (inputs before outputs), then cycles.
inline std::vector<DiffComponent> symmetric_difference(const Matching& m1, const Matching& m2) {
  if (m1.n_inputs() != m2.n_inputs() || m1.n_outputs() != m2.n_outputs())
    throw std::invalid_argument("symmetric_difference: matchings of different shape");
  const std::size_t n1 = m1.n_inputs();
  const std::size_t n = n1 + m1.n_outputs();
  auto port_of = [n1](std::size_t u) {
    return u < n1 ? PortId::input(u) : PortId::output(u - n1);
  };

  // Each node has at most one m1-only and one m2-only incident edge.
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Matching* a : {&m1, &m2}) {
    const Matching& b = a == &m1 ? m2 : m1;
    for (const Edge& e : a->pairs()) {
      if (b.contains(e.input, e.output)) continue;
      adj[e.input].push_back(n1 + e.output);
      adj[n1 + e.output].push_back(e.input);
    }
  }

  std::vector<DiffComponent> out;
  std::vector<bool> seen(n, false);
  auto walk = [&](std::size_t u, bool cycle) {
    DiffComponent c;
    c.is_cycle = cycle;
    std::size_t prev = kUnmatched;
    while (true) {
      seen[u] = true;
      c.nodes.push_back(port_of(u));
      std::size_t next = kUnmatched;
      for (std::size_t v : adj[u])
        if (v != prev && !seen[v]) next = v;
      if (next == kUnmatched) break;
      prev = u;
      u = next;
    }
    out.push_back(std::move(c));
  };
  for (std::size_t u = 0; u < n; ++u)
    if (!seen[u] && adj[u].size() == 1) walk(u, false);
  for (std::size_t u = 0; u < n; ++u)
    if (!seen[u] && adj[u].size() == 2) walk(u, true);
  return out;
}

enum class PathKind : unsigned char { Augmenting, Absorbing };

/// An alternating path relative to some matching, listed from its unmatched
/// start node to its end node.
struct AlternatingPath {
  std::vector<PortId> nodes;
  PathKind kind = PathKind::Augmenting;

  std::size_t n_edges() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  PortId start() const { return nodes.front(); }
  PortId end() const { return nodes.back(); }

  Edge edge(std::size_t k) const {
    PortId a = nodes[k], b = nodes[k + 1];
    return a.side == Side::Input ? Edge{a.index, b.index} : Edge{b.index, a.index};
  }
};

inline std::string to_string(const AlternatingPath& p) {
  std::string s = p.kind == PathKind::Augmenting ? "augmenting[" : "absorbing[";
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (k) s += "-";
    s += to_string(p.nodes[k]);
  }
  return s + "]";
}

/// Returns an empty string when `p` is a valid path of its kind for `m` in
/// `g`, otherwise a description of the first violated condition.
inline std::string path_defect(const BipartiteGraph& g, const Matching& m,
                               const AlternatingPath& p) {
  if (p.nodes.size() < 2) return "path has no edges";
  for (PortId v : p.nodes)
    if (v.index >= g.n_side(v.side)) return "node " + to_string(v) + " out of range";
  std::vector<PortId> sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "path repeats a node";
  for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
    if (p.nodes[k].side == p.nodes[k + 1].side) return "consecutive nodes on the same side";
    Edge e = p.edge(k);
    if (!g.has_edge(e.input, e.output)) return "edge " + std::to_string(k) + " not in graph";
    bool in_m = m.contains(e.input, e.output);
    if (in_m != (k % 2 == 1)) return "edge " + std::to_string(k) + " breaks alternation";
  }
  if (m.matches(p.start())) return "start node is matched";
  const bool odd = p.n_edges() % 2 == 1;
  if (p.kind == PathKind::Augmenting) {
    if (!odd) return "augmenting path must have odd length";
    if (m.matches(p.end())) return "augmenting path must end at an unmatched node";
  } else {
    if (odd) return "absorbing path must have even length";
    if (!m.matches(p.end())) return "absorbing path must end at a matched node";
    if (g.weight(p.end()) >= g.weight(p.start()))
      return "absorbing path end is not lighter than its start";
  }
  return {};
}

/// M (+) P: drops the matched edges of the path and adds the others.
inline Matching flip(const BipartiteGraph& g, const Matching& m, const AlternatingPath& p) {
  if (!same_shape(g, m)) throw std::invalid_argument("flip: matching/graph shape mismatch");
  if (std::string d = path_defect(g, m, p); !d.empty())
    throw std::invalid_argument("flip: invalid " + to_string(p) + ": " + d);
  Matching out = m;
  for (std::size_t k = 1; k < p.n_edges(); k += 2) {
    Edge e = p.edge(k);
    out.remove(e.input, e.output);
  }
  for (std::size_t k = 0; k < p.n_edges(); k += 2) {
    Edge e = p.edge(k);
    out.add(e.input, e.output);
  }
  return out;
}

/// Breadth-first alternating search from the unmatched port `start`.
///
/// Non-matching edges are followed away from the start side and matching edges
/// back towards it. The first augmenting path discovered is returned. Failing
/// that, the lightest reachable start-side node strictly lighter than `start`
/// (ties by index) is the end of the returned absorbing path.
inline std::optional<AlternatingPath> find_augment_or_absorb(const BipartiteGraph& g,
                                                             const Matching& m, PortId start) {
  if (!same_shape(g, m)) throw std::invalid_argument("find_augment_or_absorb: shape mismatch");
  g.check_index(start);
  if (m.matches(start))
    throw std::invalid_argument("find_augment_or_absorb: " + to_string(start) + " is matched");

  const Side near = start.side;
  const Side far = opposite(near);
  // parent_near[v] = far-side index that led to near-side node v (via its matching edge)
  // parent_far[u]  = near-side index that led to far-side node u
  std::vector<std::size_t> parent_near(g.n_side(near), kUnmatched);
  std::vector<std::size_t> parent_far(g.n_side(far), kUnmatched);
  std::vector<bool> seen_near(g.n_side(near), false), seen_far(g.n_side(far), false);
  std::vector<std::size_t> order;  // reached near-side nodes, BFS order
  order.push_back(start.index);
  seen_near[start.index] = true;

  auto build = [&](PortId end, PathKind kind) {
    AlternatingPath path;
    path.kind = kind;
    PortId cur = end;
    while (true) {
      path.nodes.push_back(cur);
      if (cur == start) break;
      if (cur.side == far)
        cur = {near, parent_far[cur.index]};
      else
        cur = {far, parent_near[cur.index]};
    }
    std::reverse(path.nodes.begin(), path.nodes.end());
    return path;
  };

  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t u = order[head];
    const PortId up{near, u};
    const std::size_t u_mate = m.mate(up);
    for (std::size_t v : g.neighbors(up)) {
      if (v == u_mate || seen_far[v]) continue;
      seen_far[v] = true;
      parent_far[v] = u;
      const PortId vp{far, v};
      const std::size_t w = m.mate(vp);
      if (w == kUnmatched) return build(vp, PathKind::Augmenting);
      if (!seen_near[w]) {
        seen_near[w] = true;
        parent_near[w] = v;
        order.push_back(w);
      }
    }
  }

  const Weight ws = g.weight(start);
  std::optional<std::size_t> best;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t w = order[k];
    const Weight ww = g.weight({near, w});
    if (ww >= ws) continue;
    if (!best || ww < g.weight({near, *best}) || (ww == g.weight({near, *best}) && w < *best))
      best = w;
  }
  if (!best) return std::nullopt;
  return build({near, *best}, PathKind::Absorbing);
}

}  // namespace portmatch
