#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "portmatch/assignment.hpp"
#include "portmatch/graph.hpp"
#include "portmatch/rng.hpp"

namespace portmatch {

// Port-based policies --------------------------------------------------------

/// Ports by descending weight; ties put inputs first, then lower index.
inline std::vector<PortId> ports_by_weight(const BipartiteGraph& g) {
  std::vector<PortId> order = g.ports();
  std::stable_sort(order.begin(), order.end(), [&](PortId a, PortId b) {
    return g.weight(a) > g.weight(b);
  });
  return order;
}

/// Extends `m0` until every maximum-weight port is matched, flipping one
/// augmenting or absorbing path per unmatched critical port. Absorbing paths
/// only unmatch strictly lighter ports, so critical ports stay matched.
///
/// Throws std::logic_error if some critical port has no path; that cannot
/// happen on graphs built from a VOQ matrix.
inline Matching critical_port_matching(const BipartiteGraph& g, const Matching& m0) {
  require_valid(g, m0, "critical_port_matching");
  Matching m = m0;
  const Weight top = g.max_weight();
  if (top == 0) return m;
  for (PortId p : g.ports()) {
    if (g.weight(p) != top || m.matches(p)) continue;
    auto path = find_augment_or_absorb(g, m, p);
    if (!path)
      throw std::logic_error("critical_port_matching: no augmenting or absorbing path from "
                             "critical port " + to_string(p) + " under " + to_string(m));
    m = flip(g, m, *path);
  }
  return m;
}

inline Matching critical_port_matching(const BipartiteGraph& g) {
  return critical_port_matching(g, Matching(g));
}

/// Lazy heaviest-port-first completion of `m0`: repeatedly takes a heaviest
/// unmatched port and flips a path from it; stops at the first heaviest
/// unmatched port with no augmenting or absorbing path. The result has the
/// optimal threshold.
inline Matching lhpf_complete(const BipartiteGraph& g, const Matching& m0) {
  require_valid(g, m0, "lhpf_complete");
  Matching m = m0;
  const std::vector<PortId> order = ports_by_weight(g);
  while (true) {
    auto it = std::find_if(order.begin(), order.end(), [&](PortId p) { return !m.matches(p); });
    if (it == order.end()) return m;
    auto path = find_augment_or_absorb(g, m, *it);
    if (!path) return m;
    m = flip(g, m, *path);
  }
}

/// Maximum vertex-weighted matching: flips paths from unmatched ports, in
/// descending weight order, until no unmatched port has an augmenting or
/// absorbing path.
inline Matching mvm(const BipartiteGraph& g) {
  Matching m(g);
  const std::vector<PortId> order = ports_by_weight(g);
  bool changed = true;
  while (changed) {
    changed = false;
    for (PortId p : order) {
      if (m.matches(p) || g.neighbors(p).empty()) continue;
      if (auto path = find_augment_or_absorb(g, m, p)) {
        m = flip(g, m, *path);
        changed = true;
      }
    }
  }
  return m;
}

// Edge-weighted policies ------------------------------------------------------

/// Maximum edge-weight matching over the edges of `g`. Absent edges and
/// padding rows/columns enter the square assignment problem at weight zero
/// and are dropped from the result.
template <typename T>
Matching max_weight_matching(const BipartiteGraph& g, const Matrix<T>& edge_weights,
                             T tie_tolerance = T{}) {
  if (edge_weights.rows() != g.n_inputs() || edge_weights.cols() != g.n_outputs())
    throw std::invalid_argument("max_weight_matching: weight matrix shape mismatch");
  const std::size_t n = std::max(g.n_inputs(), g.n_outputs());
  Matrix<T> square(n, n, T{});
  for (const Edge& e : g.edges()) {
    const T w = edge_weights(e.input, e.output);
    if (w < T{}) throw std::invalid_argument("max_weight_matching: negative edge weight");
    square(e.input, e.output) = w;
  }
  const Assignment<T> a = solve_max_assignment(square, tie_tolerance);
  Matching m(g);
  for (std::size_t i = 0; i < g.n_inputs(); ++i) {
    const std::size_t j = a.row_to_col[i];
    if (j < g.n_outputs() && g.has_edge(i, j)) m.add(i, j);
  }
  return m;
}

/// Relative tolerance for real-valued weight ties.
inline constexpr double kRealTieTolerance = 1e-9;

inline double real_tolerance(const Matrix<double>& w) {
  double scale = 1.0;
  for (double x : w.data()) scale = std::max(scale, std::abs(x));
  return kRealTieTolerance * scale;
}

/// MWM with the given integer edge weights (normally the VOQ occupancies).
inline Matching mwm(const BipartiteGraph& g, const Matrix<Weight>& edge_weights) {
  return max_weight_matching<Weight>(g, edge_weights);
}

/// MVM computed as a maximum edge-weight matching with w_ij = w_i + w_j on
/// existing edges; an independent route to the same matched vertex weight.
inline Matching mvm_via_transform(const BipartiteGraph& g) {
  Matrix<Weight> w(g.n_inputs(), g.n_outputs(), 0);
  for (const Edge& e : g.edges())
    w(e.input, e.output) = g.weight(PortId::input(e.input)) + g.weight(PortId::output(e.output));
  return max_weight_matching<Weight>(g, w);
}

/// MWM with weights q_ij^alpha.
inline Matching mwm_alpha(const BipartiteGraph& g, const Matrix<Weight>& voq, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mwm_alpha: alpha must be positive");
  Matrix<double> w(g.n_inputs(), g.n_outputs(), 0.0);
  for (const Edge& e : g.edges())
    w(e.input, e.output) = std::pow(static_cast<double>(voq(e.input, e.output)), alpha);
  return max_weight_matching<double>(g, w, real_tolerance(w));
}

/// Maximum-size matching that maximises sum(log q_ij) among maximum-size
/// matchings. A per-edge bonus B > N * max log q makes one extra edge worth
/// more than any change in the log sum.
inline Matching mwm_zero_plus(const BipartiteGraph& g, const Matrix<Weight>& voq) {
  const std::size_t n = std::max(g.n_inputs(), g.n_outputs());
  Weight max_q = 0;
  for (const Edge& e : g.edges()) max_q = std::max(max_q, voq(e.input, e.output));
  const double bonus = static_cast<double>(n) * std::log1p(static_cast<double>(max_q)) + 1.0;
  Matrix<double> w(g.n_inputs(), g.n_outputs(), 0.0);
  for (const Edge& e : g.edges()) {
    const Weight q = voq(e.input, e.output);
    if (q < 1) throw std::invalid_argument("mwm_zero_plus: edge with empty VOQ");
    w(e.input, e.output) = bonus + std::log(static_cast<double>(q));
  }
  return max_weight_matching<double>(g, w, real_tolerance(w));
}

/// Maximum-cardinality matching (Hopcroft-Karp). Free inputs and adjacency
/// are scanned in canonical order.
inline Matching msm(const BipartiteGraph& g) {
  const std::size_t n1 = g.n_inputs(), n2 = g.n_outputs();
  std::vector<std::size_t> in_mate(n1, kUnmatched), out_mate(n2, kUnmatched);
  std::vector<std::size_t> dist(n1);
  const std::size_t inf = kUnmatched;

  auto bfs = [&] {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t i = 0; i < n1; ++i) {
      if (in_mate[i] == kUnmatched) {
        dist[i] = 0;
        q.push(i);
      } else {
        dist[i] = inf;
      }
    }
    while (!q.empty()) {
      const std::size_t i = q.front();
      q.pop();
      for (std::size_t j : g.neighbors(PortId::input(i))) {
        const std::size_t k = out_mate[j];
        if (k == kUnmatched) {
          found = true;
        } else if (dist[k] == inf) {
          dist[k] = dist[i] + 1;
          q.push(k);
        }
      }
    }
    return found;
  };

  auto dfs = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j : g.neighbors(PortId::input(i))) {
      const std::size_t k = out_mate[j];
      if (k == kUnmatched || (dist[k] == dist[i] + 1 && self(self, k))) {
        in_mate[i] = j;
        out_mate[j] = i;
        return true;
      }
    }
    dist[i] = inf;
    return false;
  };

  while (bfs())
    for (std::size_t i = 0; i < n1; ++i)
      if (in_mate[i] == kUnmatched) dfs(dfs, i);

  Matching m(g);
  for (std::size_t i = 0; i < n1; ++i)
    if (in_mate[i] != kUnmatched) m.add(i, in_mate[i]);
  return m;
}

/// Greedy maximal matching: edges by descending weight (ties canonical), each
/// added when both endpoints are still free.
template <typename T>
Matching gmm(const BipartiteGraph& g, const Matrix<T>& edge_weights) {
  std::vector<Edge> edges = g.edges();
  std::stable_sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
    return edge_weights(a.input, a.output) > edge_weights(b.input, b.output);
  });
  Matching m(g);
  for (const Edge& e : edges)
    if (!m.matches(PortId::input(e.input)) && !m.matches(PortId::output(e.output)))
      m.add(e.input, e.output);
  return m;
}

/// Maximal matching over a uniformly shuffled edge order.
inline Matching random_maximal(const BipartiteGraph& g, Rng& rng) {
  std::vector<Edge> edges = g.edges();
  for (std::size_t k = edges.size(); k > 1; --k)
    std::swap(edges[k - 1], edges[uniform_index(rng, k)]);
  Matching m(g);
  for (const Edge& e : edges)
    if (!m.matches(PortId::input(e.input)) && !m.matches(PortId::output(e.output)))
      m.add(e.input, e.output);
  return m;
}

// Policy dispatch --------------------------------------------------------------

enum class PolicyKind {
  CriticalPort,
  LhpfComplete,
  Mvm,
  MvmViaTransform,
  Mwm,
  MwmAlpha,
  MwmZeroPlus,
  Msm,
  Gmm,
  RandomMaximal,
};

struct PolicyId {
  PolicyKind kind = PolicyKind::Mvm;
  double alpha = 1.0;  // MwmAlpha only

  static PolicyId mwm_alpha(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("MwmAlpha: alpha must be positive");
    return {PolicyKind::MwmAlpha, a};
  }

  bool operator==(const PolicyId&) const = default;

  /// True for policies that must produce a critical-port matching each slot.
  bool is_critical_port_policy() const {
    return kind == PolicyKind::CriticalPort || kind == PolicyKind::LhpfComplete ||
           kind == PolicyKind::Mvm || kind == PolicyKind::MvmViaTransform;
  }
};

inline std::string to_string(const PolicyId& p) {
  switch (p.kind) {
    case PolicyKind::CriticalPort: return "critical";
    case PolicyKind::LhpfComplete: return "lhpf";
    case PolicyKind::Mvm: return "mvm";
    case PolicyKind::MvmViaTransform: return "mvm-transform";
    case PolicyKind::Mwm: return "mwm";
    case PolicyKind::MwmAlpha: {
      std::string a = std::to_string(p.alpha);
      a.erase(a.find_last_not_of('0') + 1);
      if (!a.empty() && a.back() == '.') a.pop_back();
      return "mwm-alpha:" + a;
    }
    case PolicyKind::MwmZeroPlus: return "mwm-0+";
    case PolicyKind::Msm: return "msm";
    case PolicyKind::Gmm: return "gmm";
    case PolicyKind::RandomMaximal: return "random";
  }
  return "?";
}

/// Parses names produced by to_string(PolicyId). MWM-alpha is written
/// "mwm-alpha:<alpha>".
inline PolicyId parse_policy(const std::string& name) {
  if (name == "critical") return {PolicyKind::CriticalPort};
  if (name == "lhpf") return {PolicyKind::LhpfComplete};
  if (name == "mvm") return {PolicyKind::Mvm};
  if (name == "mvm-transform") return {PolicyKind::MvmViaTransform};
  if (name == "mwm") return {PolicyKind::Mwm};
  if (name == "mwm-0+" || name == "mwm0+") return {PolicyKind::MwmZeroPlus};
  if (name == "msm") return {PolicyKind::Msm};
  if (name == "gmm") return {PolicyKind::Gmm};
  if (name == "random") return {PolicyKind::RandomMaximal};
  const std::string prefix = "mwm-alpha:";
  if (name.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(name.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != name.size() - prefix.size())
      throw std::invalid_argument("bad alpha in policy \"" + name + "\"");
    return PolicyId::mwm_alpha(a);
  }
  throw std::invalid_argument("unknown policy \"" + name + "\"");
}

/// Computes one slot's schedule for `policy` on the graph of `voq`. `rng` is
/// consumed only by RandomMaximal. LhpfComplete post-processes the greedy
/// maximal matching on VOQ occupancies.
inline Matching schedule(const PolicyId& policy, const BipartiteGraph& g,
                         const Matrix<Weight>& voq, Rng& rng) {
  switch (policy.kind) {
    case PolicyKind::CriticalPort: return critical_port_matching(g);
    case PolicyKind::LhpfComplete: return lhpf_complete(g, gmm(g, voq));
    case PolicyKind::Mvm: return mvm(g);
    case PolicyKind::MvmViaTransform: return mvm_via_transform(g);
    case PolicyKind::Mwm: return mwm(g, voq);
    case PolicyKind::MwmAlpha: return mwm_alpha(g, voq, policy.alpha);
    case PolicyKind::MwmZeroPlus: return mwm_zero_plus(g, voq);
    case PolicyKind::Msm: return msm(g);
    case PolicyKind::Gmm: return gmm(g, voq);
    case PolicyKind::RandomMaximal: return random_maximal(g, rng);
  }
  throw std::logic_error("schedule: unknown policy");
}

}  // namespace portmatch
