#pragma once

// Randomised property battery: runs the matchers on small VOQ-derived graphs
// and checks them against the brute-force oracle.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "portmatch/clearance.hpp"
#include "portmatch/matchers.hpp"
#include "portmatch/oracle.hpp"

namespace portmatch {

/// The matchers under test. Swappable so a deliberately broken one can be
/// injected.
struct MatcherSuite {
  std::function<Matching(const BipartiteGraph&)> mvm = [](const BipartiteGraph& g) {
    return portmatch::mvm(g);
  };
  std::function<Matching(const BipartiteGraph&)> mvm_via_transform =
      [](const BipartiteGraph& g) { return portmatch::mvm_via_transform(g); };
  std::function<Matching(const BipartiteGraph&)> msm = [](const BipartiteGraph& g) {
    return portmatch::msm(g);
  };
  std::function<Matching(const BipartiteGraph&, const Matching&)> lhpf_complete =
      [](const BipartiteGraph& g, const Matching& m0) { return portmatch::lhpf_complete(g, m0); };
  std::function<Matching(const BipartiteGraph&, const Matching&)> critical_port =
      [](const BipartiteGraph& g, const Matching& m0) {
        return portmatch::critical_port_matching(g, m0);
      };
};

/// Drops the first pair of `m`; turns a correct matcher into a wrong one.
inline Matching drop_one_pair(const Matching& m) {
  Matching out = m;
  if (!out.empty()) {
    const Edge e = out.pairs().front();
    out.remove(e.input, e.output);
  }
  return out;
}

/// Suite with one matcher replaced by a faulty version. Names: mvm,
/// mvm-transform, msm, lhpf, critical.
inline MatcherSuite faulty_suite(const std::string& which) {
  MatcherSuite s;
  if (which == "mvm")
    s.mvm = [](const BipartiteGraph& g) { return drop_one_pair(portmatch::mvm(g)); };
  else if (which == "mvm-transform")
    s.mvm_via_transform = [](const BipartiteGraph& g) {
      return drop_one_pair(portmatch::mvm_via_transform(g));
    };
  else if (which == "msm")
    s.msm = [](const BipartiteGraph& g) { return drop_one_pair(portmatch::msm(g)); };
  else if (which == "lhpf")
    s.lhpf_complete = [](const BipartiteGraph& g, const Matching&) { return Matching(g); };
  else if (which == "critical")
    s.critical_port = [](const BipartiteGraph& g, const Matching&) { return Matching(g); };
  else
    throw std::invalid_argument("unknown matcher \"" + which + "\"");
  return s;
}

inline const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names{
      "mvm-is-max",       // MVM output has brute-force maximum vertex weight
      "mvm-routes-agree", // path route and edge-weight transform give equal weight
      "mvm-max-size",     // |mvm| == |msm| == brute-force maximum cardinality
      "mvm-fixpoint",     // is_mvm(m) iff no unmatched port has an improving path
      "lhpf-optimal",     // lhpf_complete reaches the optimal threshold
      "lhpf-is-critical", // every LHPF matching matches all critical ports
      "lhpf-sufficient",  // heaviest unmatched port without paths implies LHPF
      "perfect-lhpf",     // a perfect matching exists => LHPF output is perfect
      "critical-exists",  // some matching is critical; the procedure finds one
      "threshold-agree",  // coverability threshold == enumerated threshold
      "path-search",      // BFS search agrees with exhaustive path enumeration
      "hall",             // can_cover agrees with the Hall witness scan
      "maximal",          // greedy and random maximal matchings are maximal
      "bvn",              // batch decomposition reconstructs within tau*
  };
  return names;
}

struct VerifyOptions {
  std::size_t instances = 500;
  std::size_t max_ports = oracle::kDefaultPortCap;
  std::uint64_t seed = 1;
  Weight max_entry = 5;
  /// Empty: run all lemmas.
  std::vector<std::string> lemmas;
  /// Stop at the first violation.
  bool fail_fast = true;
};

struct Violation {
  std::string lemma;
  std::string instance;  // VOQ file text
  std::string detail;
};

struct VerifyReport {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Random VOQ with n1 + n2 <= max_ports and entries in [0, max_entry].
inline Matrix<Weight> random_voq(Rng& rng, std::size_t max_ports, Weight max_entry) {
  if (max_ports < 2) throw std::invalid_argument("random_voq: need at least 2 ports");
  const std::size_t n1 = 1 + uniform_index(rng, std::min<std::size_t>(6, max_ports - 1));
  const std::size_t n2 = 1 + uniform_index(rng, std::min<std::size_t>(6, max_ports - n1));
  const double density = 0.2 + 0.6 * uniform01(rng);
  Matrix<Weight> voq(n1, n2, 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      if (uniform01(rng) < density)
        voq(i, j) = 1 + static_cast<Weight>(uniform_index(rng, static_cast<std::uint64_t>(max_entry)));
  return voq;
}

namespace detail {

class Battery {
 public:
  Battery(const VerifyOptions& o, const MatcherSuite& s, VerifyReport& r)
      : opts_(o), suite_(s), rep_(r) {}

  bool enabled(const std::string& name) const {
    return opts_.lemmas.empty() ||
           std::find(opts_.lemmas.begin(), opts_.lemmas.end(), name) != opts_.lemmas.end();
  }

  void check(const std::string& lemma, bool ok, const std::string& detail) {
    ++rep_.checks;
    if (!ok) rep_.violations.push_back({lemma, voq_to_string(voq_), detail});
  }

  bool stop() const { return opts_.fail_fast && !rep_.ok(); }

  void run(const Matrix<Weight>& voq, Rng& rng) {
    voq_ = voq;
    const BipartiteGraph g = graph_from_voq(voq);
    const std::size_t cap = opts_.max_ports;
    const std::vector<Matching> all = oracle::enumerate_matchings(g, cap);
    const Weight best_weight = oracle::max_vertex_weight(g, cap);
    const std::size_t best_size = oracle::max_cardinality(g, cap);
    const Weight opt_threshold = oracle::optimal_threshold(g);
    auto lhpf_by_oracle = [&](const Matching& m) { return threshold(g, m) == opt_threshold; };

    const Matching mv = suite_.mvm(g);
    const Matching ms = suite_.msm(g);
    if (enabled("mvm-is-max"))
      check("mvm-is-max", is_valid_matching(g, mv) && matching_weight(g, mv) == best_weight,
            "mvm " + to_string(mv) + " weight " + std::to_string(matching_weight(g, mv)) +
                ", brute-force max " + std::to_string(best_weight));
    if (enabled("mvm-routes-agree")) {
      const Matching mt = suite_.mvm_via_transform(g);
      check("mvm-routes-agree",
            is_valid_matching(g, mt) && matching_weight(g, mt) == matching_weight(g, mv),
            "mvm " + to_string(mv) + " vs transform " + to_string(mt));
    }
    if (enabled("mvm-max-size"))
      check("mvm-max-size", mv.size() == ms.size() && ms.size() == best_size,
            "|mvm|=" + std::to_string(mv.size()) + " |msm|=" + std::to_string(ms.size()) +
                " brute-force " + std::to_string(best_size));
    if (enabled("mvm-fixpoint")) {
      // Every matching when few, otherwise an evenly spaced sample.
      const std::size_t stride = std::max<std::size_t>(1, all.size() / 256);
      for (std::size_t k = 0; k < all.size(); k += stride) {
        const Matching& m = all[k];
        const bool is_max = matching_weight(g, m) == best_weight;
        const bool fix = oracle::no_improving_paths(g, m);
        check("mvm-fixpoint", is_max == fix,
              "matching " + to_string(m) + (is_max ? " is" : " is not") + " an MVM but " +
                  (fix ? "has no" : "has") + " improving path");
      }
    }

    const Matching greedy = gmm(g, voq);
    if (enabled("lhpf-optimal")) {
      for (const Matching& seed : {Matching(g), greedy}) {
        const Matching l = suite_.lhpf_complete(g, seed);
        check("lhpf-optimal", is_valid_matching(g, l) && lhpf_by_oracle(l),
              "lhpf_complete from " + to_string(seed) + " gave " + to_string(l) +
                  " threshold " + std::to_string(threshold(g, l)) + ", optimal " +
                  std::to_string(opt_threshold));
      }
      check("lhpf-optimal", lhpf_by_oracle(mv), "mvm " + to_string(mv) + " is not LHPF");
    }
    if (enabled("lhpf-is-critical"))
      for (const Matching& m : all)
        if (lhpf_by_oracle(m))
          check("lhpf-is-critical", oracle::is_critical_port(g, m),
                "LHPF matching " + to_string(m) + " misses a critical port");
    if (enabled("lhpf-sufficient")) {
      for (const Matching& m : all) {
        Weight heaviest = -1;
        for (const PortId& p : g.ports())
          if (!m.matches(p)) heaviest = std::max(heaviest, g.weight(p));
        if (heaviest < 0) continue;
        for (const PortId& p : g.ports()) {
          if (m.matches(p) || g.weight(p) != heaviest) continue;
          if (!oracle::alternating_paths_bruteforce(g, m, p).any())
            check("lhpf-sufficient", lhpf_by_oracle(m),
                  "matching " + to_string(m) + ": " + to_string(p) +
                      " has no path but threshold is not optimal");
        }
      }
    }
    if (enabled("perfect-lhpf")) {
      const bool perfect_exists = 2 * best_size == g.n_ports();
      if (perfect_exists) {
        const Matching l = suite_.lhpf_complete(g, Matching(g));
        check("perfect-lhpf", 2 * l.size() == g.n_ports(),
              "perfect matching exists but lhpf_complete gave " + to_string(l));
      }
    }
    if (enabled("critical-exists")) {
      bool exists = false;
      for (const Matching& m : all) exists = exists || oracle::is_critical_port(g, m);
      check("critical-exists", exists, "no enumerated matching is critical");
      for (const Matching& seed : {Matching(g), greedy}) {
        const Matching c = suite_.critical_port(g, seed);
        check("critical-exists", is_valid_matching(g, c) && oracle::is_critical_port(g, c),
              "critical_port_matching gave " + to_string(c));
      }
    }
    if (enabled("threshold-agree")) {
      Weight brute = g.max_weight() + 1;
      for (const Matching& m : all) brute = std::min(brute, threshold(g, m));
      check("threshold-agree", brute == opt_threshold,
            "optimal_threshold " + std::to_string(opt_threshold) + " vs enumeration " +
                std::to_string(brute));
    }
    if (enabled("path-search")) {
      const std::size_t stride = std::max<std::size_t>(1, all.size() / 64);
      for (std::size_t k = 0; k < all.size(); k += stride) {
        const Matching& m = all[k];
        for (const PortId& p : g.ports()) {
          if (m.matches(p)) continue;
          const auto census = oracle::alternating_paths_bruteforce(g, m, p);
          const auto found = find_augment_or_absorb(g, m, p);
          bool ok = found.has_value() == census.any();
          if (found) {
            ok = ok && path_defect(g, m, *found).empty();
            ok = ok && ((found->kind == PathKind::Augmenting) == census.augmenting);
          }
          check("path-search", ok,
                "from " + to_string(p) + " under " + to_string(m) + ": search " +
                    (found ? to_string(*found) : std::string("none")) + ", brute force aug=" +
                    std::to_string(census.augmenting) + " abs=" + std::to_string(census.absorbing));
        }
      }
    }
    if (enabled("hall")) {
      for (Side side : {Side::Input, Side::Output}) {
        std::vector<PortId> s;
        for (std::size_t k = 0; k < g.n_side(side); ++k)
          if (uniform01(rng) < 0.6) s.push_back({side, k});
        const bool cover = oracle::can_cover(g, s);
        const auto w = oracle::hall_witness(g, s);
        bool ok = cover != w.has_value();
        if (w) ok = ok && w->subset.size() >= w->neighborhood.size() + 1 &&
                    w->neighborhood == oracle::neighborhood(g, w->subset);
        check("hall", ok, "can_cover=" + std::to_string(cover) + " but witness " +
                              (w ? "found" : "absent"));
      }
    }
    if (enabled("maximal")) {
      check("maximal", is_maximal(g, greedy), "gmm " + to_string(greedy) + " not maximal");
      const Matching r = random_maximal(g, rng);
      check("maximal", is_maximal(g, r), "random " + to_string(r) + " not maximal");
    }
    if (enabled("bvn") && g.max_weight() > 0) {
      const BvnDecomposition d = bvn_decompose(voq);
      check("bvn",
            d.reconstruct(voq.rows(), voq.cols()) == voq &&
                d.total_multiplicity() <= tau_star(voq),
            "decomposition total " + std::to_string(d.total_multiplicity()) + " tau* " +
                std::to_string(tau_star(voq)));
    }
  }

 private:
  const VerifyOptions& opts_;
  const MatcherSuite& suite_;
  VerifyReport& rep_;
  Matrix<Weight> voq_;
};

}  // namespace detail

inline VerifyReport run_battery(const VerifyOptions& opts, const MatcherSuite& suite = {}) {
  for (const std::string& l : opts.lemmas)
    if (std::find(lemma_names().begin(), lemma_names().end(), l) == lemma_names().end())
      throw std::invalid_argument("unknown lemma \"" + l + "\"");
  if (opts.max_ports > oracle::kDefaultPortCap * 2)
    throw std::invalid_argument("verify: max_ports too large for enumeration");
  VerifyReport rep;
  detail::Battery battery(opts, suite, rep);
  Rng rng = make_stream(opts.seed, 0);
  for (std::size_t k = 0; k < opts.instances && !battery.stop(); ++k) {
    battery.run(random_voq(rng, opts.max_ports, opts.max_entry), rng);
    ++rep.instances;
  }
  return rep;
}

}  // namespace portmatch
