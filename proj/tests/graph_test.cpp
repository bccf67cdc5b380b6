#include <gtest/gtest.h>

#include <set>

#include "portmatch/clearance.hpp"
#include "portmatch/graph.hpp"
#include "portmatch/oracle.hpp"
#include "test_util.hpp"

namespace portmatch {
namespace {

using testing::random_matching;
using testing::random_size;
using testing::random_voq;

TEST(GraphFromVoq, EmptySystem) {
  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{0}});
  EXPECT_EQ(g.n_inputs(), 1u);
  EXPECT_EQ(g.n_outputs(), 1u);
  EXPECT_EQ(g.n_edges(), 0u);
  EXPECT_EQ(g.weight(PortId::input(0)), 0);
  EXPECT_EQ(g.weight(PortId::output(0)), 0);
}

TEST(GraphFromVoq, AdversarialExampleWeights) {
  const BipartiteGraph g = graph_from_voq(clearance_example(4));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g.weight(PortId::input(i)), 3);
  const Weight out[] = {4, 4, 4, 0};
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(g.weight(PortId::output(j)), out[j]);
}

TEST(GraphFromVoq, RowAndColumnSums) {
  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{2, 1}, {0, 1}});
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(g.weight(PortId::input(0)), 3);
  EXPECT_EQ(g.weight(PortId::input(1)), 1);
  EXPECT_EQ(g.weight(PortId::output(0)), 2);
  EXPECT_EQ(g.weight(PortId::output(1)), 2);
}

TEST(GraphFromVoq, WeightSumsAgreeWithTotal) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto voq = random_voq(rng, random_size(rng, 7), random_size(rng, 7), 9);
    const BipartiteGraph g = graph_from_voq(voq);
    Weight in = 0, out = 0, total = 0;
    for (std::size_t i = 0; i < g.n_inputs(); ++i) in += g.weight(PortId::input(i));
    for (std::size_t j = 0; j < g.n_outputs(); ++j) out += g.weight(PortId::output(j));
    for (Weight x : voq.data()) total += x;
    EXPECT_EQ(in, total);
    EXPECT_EQ(out, total);
    for (const Edge& e : g.edges()) {
      EXPECT_GT(voq(e.input, e.output), 0);
      EXPECT_GE(g.weight(PortId::input(e.input)), 1);
      EXPECT_GE(g.weight(PortId::output(e.output)), 1);
    }
  }
}

TEST(GraphFromVoq, RejectsNegativeEntry) {
  EXPECT_THROW(graph_from_voq(Matrix<Weight>{{1, -1}}), std::invalid_argument);
}

TEST(Matching, RejectsSharedPort) {
  Matching m(2, 2);
  m.add(0, 0);
  EXPECT_THROW(m.add(0, 1), std::invalid_argument);
  EXPECT_THROW(m.add(1, 0), std::invalid_argument);
  EXPECT_THROW(m.add(2, 0), std::out_of_range);
}

TEST(MatchingWeight, Examples) {
  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{2, 1}, {0, 1}});
  EXPECT_EQ(matching_weight(g, Matching(g)), 0);
  EXPECT_EQ(matching_weight(g, Matching(2, 2, {{0, 0}})), 5);

  const BipartiteGraph h = graph_from_voq(clearance_example(4));
  EXPECT_EQ(matching_weight(h, Matching(4, 4, {{1, 0}, {2, 1}, {3, 2}})), 21);
}

TEST(Threshold, Examples) {
  const BipartiteGraph k22 = graph_from_voq(Matrix<Weight>{{1, 2}, {3, 1}});
  EXPECT_EQ(threshold(k22, Matching(2, 2, {{0, 0}, {1, 1}})), 1);

  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{4, 0}, {0, 1}});
  EXPECT_EQ(threshold(g, Matching(g)), 5);

  const BipartiteGraph zero = graph_from_voq(Matrix<Weight>{{0, 0}, {0, 0}});
  EXPECT_EQ(threshold(zero, Matching(zero)), 1);
}

TEST(SymmetricDifference, Examples) {
  const Matching a(2, 2, {{0, 0}});
  EXPECT_TRUE(symmetric_difference(a, a).empty());

  const auto one = symmetric_difference(a, Matching(2, 2));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_FALSE(one[0].is_cycle);
  EXPECT_EQ(one[0].n_edges(), 1u);

  const auto cyc =
      symmetric_difference(Matching(2, 2, {{0, 0}, {1, 1}}), Matching(2, 2, {{0, 1}, {1, 0}}));
  ASSERT_EQ(cyc.size(), 1u);
  EXPECT_TRUE(cyc[0].is_cycle);
  EXPECT_EQ(cyc[0].n_edges(), 4u);
}

TEST(SymmetricDifference, ComponentsPartitionTheDifference) {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto voq = random_voq(rng, random_size(rng, 6), random_size(rng, 6), 3, 0.6);
    const BipartiteGraph g = graph_from_voq(voq);
    const Matching m1 = random_matching(rng, g), m2 = random_matching(rng, g);

    std::set<Edge> expected;
    for (const Edge& e : m1.pairs())
      if (!m2.contains(e.input, e.output)) expected.insert(e);
    for (const Edge& e : m2.pairs())
      if (!m1.contains(e.input, e.output)) expected.insert(e);

    std::set<Edge> got;
    std::set<PortId> nodes;
    for (const DiffComponent& c : symmetric_difference(m1, m2)) {
      if (c.is_cycle) {
        EXPECT_EQ(c.n_edges() % 2, 0u);
      }
      for (const PortId& p : c.nodes) EXPECT_TRUE(nodes.insert(p).second) << "shared node";
      const auto edges = c.edges();
      for (std::size_t k = 0; k < edges.size(); ++k) {
        EXPECT_TRUE(got.insert(edges[k]).second);
        // Alternation: consecutive edges come from different matchings.
        if (k > 0) {
          EXPECT_NE(m1.contains(edges[k].input, edges[k].output),
                    m1.contains(edges[k - 1].input, edges[k - 1].output));
        }
      }
    }
    EXPECT_EQ(got, expected);
  }
}

// Two inputs a, b and outputs i (and j); (b, i) is matched and a is heavier
// than b.
BipartiteGraph absorb_example(bool with_j) {
  BipartiteGraph g(2, with_j ? 2 : 1);
  g.add_edge(0, 0);  // a - i
  g.add_edge(1, 0);  // b - i
  if (with_j) g.add_edge(1, 1);  // b - j
  g.set_weight(PortId::input(0), 3);
  g.set_weight(PortId::input(1), 1);
  g.set_weight(PortId::output(0), 2);
  if (with_j) g.set_weight(PortId::output(1), 1);
  return g;
}

TEST(Flip, SingleFreeEdge) {
  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{1}});
  const AlternatingPath p{{PortId::input(0), PortId::output(0)}, PathKind::Augmenting};
  EXPECT_EQ(flip(g, Matching(g), p), Matching(1, 1, {{0, 0}}));
}

TEST(Flip, AbsorbingAndAugmentingExamples) {
  const PortId a = PortId::input(0), b = PortId::input(1), i = PortId::output(0),
               j = PortId::output(1);
  {
    const BipartiteGraph g = absorb_example(false);
    const Matching m(2, 1, {{1, 0}});
    const Matching r = flip(g, m, {{a, i, b}, PathKind::Absorbing});
    EXPECT_EQ(r, Matching(2, 1, {{0, 0}}));
    EXPECT_EQ(matching_weight(g, r), matching_weight(g, m) + 3 - 1);
  }
  {
    const BipartiteGraph g = absorb_example(true);
    const Matching m(2, 2, {{1, 0}});
    const Matching r = flip(g, m, {{a, i, b, j}, PathKind::Augmenting});
    EXPECT_EQ(r, Matching(2, 2, {{0, 0}, {1, 1}}));
    EXPECT_EQ(matching_weight(g, r), matching_weight(g, m) + 3 + 1);
  }
}

TEST(Flip, RejectsInvalidPaths) {
  const PortId a = PortId::input(0), b = PortId::input(1), i = PortId::output(0),
               j = PortId::output(1);
  const BipartiteGraph g = absorb_example(true);
  const Matching m(2, 2, {{1, 0}});
  // Wrong kind for the length.
  EXPECT_THROW(flip(g, m, {{a, i, b}, PathKind::Augmenting}), std::invalid_argument);
  EXPECT_THROW(flip(g, m, {{a, i, b, j}, PathKind::Absorbing}), std::invalid_argument);
  // Starts at a matched node.
  EXPECT_THROW(flip(g, m, {{b, j}, PathKind::Augmenting}), std::invalid_argument);
  // First edge must be unmatched.
  EXPECT_THROW(flip(g, m, {{i, b, j}, PathKind::Absorbing}), std::invalid_argument);
  // Non-edge.
  EXPECT_THROW(flip(g, m, {{a, j}, PathKind::Augmenting}), std::invalid_argument);
  // Absorbing end must be strictly lighter than the start.
  BipartiteGraph heavy_b = absorb_example(false);
  heavy_b.set_weight(b, 3);
  EXPECT_THROW(flip(heavy_b, Matching(2, 1, {{1, 0}}), {{a, i, b}, PathKind::Absorbing}),
               std::invalid_argument);
}

TEST(FindAugmentOrAbsorb, Examples) {
  const BipartiteGraph k11 = graph_from_voq(Matrix<Weight>{{1}});
  auto p = find_augment_or_absorb(k11, Matching(k11), PortId::input(0));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kind, PathKind::Augmenting);
  EXPECT_EQ(p->nodes, (std::vector<PortId>{PortId::input(0), PortId::output(0)}));

  const BipartiteGraph g = absorb_example(false);
  p = find_augment_or_absorb(g, Matching(2, 1, {{1, 0}}), PortId::input(0));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kind, PathKind::Absorbing);
  EXPECT_EQ(p->nodes, (std::vector<PortId>{PortId::input(0), PortId::output(0), PortId::input(1)}));

  const BipartiteGraph iso = graph_from_voq(Matrix<Weight>{{0, 0}, {0, 1}});
  EXPECT_FALSE(find_augment_or_absorb(iso, Matching(iso), PortId::input(0)));
}

TEST(FindAugmentOrAbsorb, PrefersAugmentingOverAbsorbing) {
  const BipartiteGraph g = absorb_example(true);
  auto p = find_augment_or_absorb(g, Matching(2, 2, {{1, 0}}), PortId::input(0));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kind, PathKind::Augmenting);
}

TEST(FindAugmentOrAbsorb, AbsorbsLightestReachable) {
  // in0 (weight 9) unmatched; in1 (5) and in2 (2) matched to out0 and out1.
  BipartiteGraph g(3, 2);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(2, 1);
  g.set_weight(PortId::input(0), 9);
  g.set_weight(PortId::input(1), 5);
  g.set_weight(PortId::input(2), 2);
  g.set_weight(PortId::output(0), 4);
  g.set_weight(PortId::output(1), 4);
  const Matching m(3, 2, {{1, 0}, {2, 1}});
  auto p = find_augment_or_absorb(g, m, PortId::input(0));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kind, PathKind::Absorbing);
  EXPECT_EQ(p->end(), PortId::input(2));
}

TEST(FindAugmentOrAbsorb, RejectsMatchedStart) {
  const BipartiteGraph g = graph_from_voq(Matrix<Weight>{{1}});
  EXPECT_THROW(find_augment_or_absorb(g, Matching(1, 1, {{0, 0}}), PortId::input(0)),
               std::invalid_argument);
}

TEST(FindAugmentOrAbsorb, AgreesWithExhaustiveSearchAndFlipIdentities) {
  Rng rng(77);
  for (int t = 0; t < 400; ++t) {
    const auto voq = random_voq(rng, random_size(rng, 5), random_size(rng, 5), 6, 0.5);
    const BipartiteGraph g = graph_from_voq(voq);
    const Matching m = random_matching(rng, g);
    for (const PortId& s : g.ports()) {
      if (m.matches(s)) continue;
      const auto census = oracle::alternating_paths_bruteforce(g, m, s);
      const auto p = find_augment_or_absorb(g, m, s);
      ASSERT_EQ(p.has_value(), census.any()) << to_string(s) << " " << to_string(m);
      if (!p) continue;
      EXPECT_EQ(p->kind == PathKind::Augmenting, census.augmenting);
      EXPECT_EQ(p->start(), s);
      const Matching r = flip(g, m, *p);
      const Weight ws = g.weight(p->start()), we = g.weight(p->end());
      if (p->kind == PathKind::Augmenting) {
        EXPECT_EQ(matching_weight(g, r), matching_weight(g, m) + ws + we);
        EXPECT_EQ(r.size(), m.size() + 1);
      } else {
        EXPECT_EQ(matching_weight(g, r), matching_weight(g, m) + ws - we);
        EXPECT_GT(matching_weight(g, r), matching_weight(g, m));
        EXPECT_EQ(r.size(), m.size());
        EXPECT_FALSE(r.matches(p->end()));
      }
      EXPECT_TRUE(r.matches(s));
      EXPECT_TRUE(is_valid_matching(g, r));
    }
  }
}

TEST(FindAugmentOrAbsorb, Deterministic) {
  Rng rng(3);
  const auto voq = random_voq(rng, 6, 6, 4, 0.5);
  const BipartiteGraph g = graph_from_voq(voq);
  for (const PortId& s : g.ports()) {
    const auto a = find_augment_or_absorb(g, Matching(g), s);
    const auto b = find_augment_or_absorb(g, Matching(g), s);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_EQ(a->nodes, b->nodes);
    }
  }
}

}  // namespace
}  // namespace portmatch
