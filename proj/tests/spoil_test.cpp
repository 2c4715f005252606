#include <gtest/gtest.h>

#include "corpus.hpp"
#include "maxmin/matching.hpp"
#include "maxmin/spoil.hpp"
#include "oracles.hpp"

using namespace maxmin;

namespace {

SpoilGraph random_spoil(int n, double p, Rng& rng) {
  std::vector<std::vector<int>> arcs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && uniform_unit(rng) < p) arcs[i].push_back(j);
    }
  }
  return SpoilGraph(n, std::move(arcs));
}

SpoilGraph complete_spoil(int n) {
  std::vector<std::vector<int>> arcs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) arcs[i].push_back(j);
  return SpoilGraph(n, std::move(arcs));
}

const SpoilGraph kCycle3(3, {{1}, {2}, {0}});

}  // namespace

TEST(SpoilGraph, Fig1IsDirectedThreeCycle) {
  const auto s = build_spoiling_graph(gen_fig1());
  EXPECT_EQ(s.arc_count(), 3u);
  EXPECT_TRUE(s.has_arc(0, 1));
  EXPECT_TRUE(s.has_arc(1, 2));
  EXPECT_TRUE(s.has_arc(2, 0));
}

TEST(SpoilGraph, MatchingOnlyHasNoArcs) {
  const BipartiteGraph g(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  EXPECT_EQ(build_spoiling_graph(g).arc_count(), 0u);
}

TEST(SpoilGraph, CompleteGraphHasAllOrderedPairs) {
  std::vector<Edge> all;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) all.push_back({u, v});
  const auto s = build_spoiling_graph(BipartiteGraph(3, all));
  EXPECT_EQ(s.arc_count(), 6u);
}

TEST(SpoilGraph, ArcCountIsEdgesMinusN) {
  for (const auto& inst : corpus::all()) {
    const auto a = align_to_matching(inst.graph, find_perfect_matching(inst.graph));
    EXPECT_EQ(build_spoiling_graph(a.graph).arc_count(), inst.graph.edge_count() - inst.graph.n()) << inst.name;
  }
}

TEST(SpoilGraph, RejectsUnalignedGraph) {
  EXPECT_THROW(build_spoiling_graph(BipartiteGraph(2, {{0, 1}, {1, 0}})), InvalidInput);
}

TEST(PathCover, NormalizesOrderAndDerivedSets) {
  const PathCover c({{4, 5, 6}, {2}, {0, 1}, {3}});
  EXPECT_EQ(c.p(), 4);
  EXPECT_EQ(c.k(), 2);
  EXPECT_EQ(c.path(0), (std::vector<int>{2}));
  EXPECT_EQ(c.path(1), (std::vector<int>{3}));
  EXPECT_EQ(c.path(2), (std::vector<int>{0, 1}));
  EXPECT_EQ(c.isolated(), (std::vector<int>{2, 3}));
  EXPECT_EQ(c.starts(), (std::vector<int>{0, 4}));
  EXPECT_EQ(c.ends(), (std::vector<int>{1, 6}));
  EXPECT_EQ(c.w1().size() + c.w2().size(), 7u);
}

TEST(CoverOps, MergeTwoSingletons) {
  const SpoilGraph s(2, {{1}, {}});
  const auto c = apply_merge(PathCover::trivial(2), s, 0, 1);
  ASSERT_EQ(c.p(), 1);
  EXPECT_EQ(c.path(0), (std::vector<int>{0, 1}));
  EXPECT_THROW(apply_merge(PathCover::trivial(2), s, 1, 0), MissingArc);
}

TEST(CoverOps, UnbalanceThatEmptiesPathCountsAsMerge) {
  // paths (w1,w2) and (w3) with arc (w3,w1): front unbalance gives (w3,w1,w2).
  const SpoilGraph s(3, {{1}, {}, {0}});
  const PathCover start({{0, 1}, {2}});
  EXPECT_EQ(start.sum_of_squares(), 5);
  const auto c = apply_unbalance(start, s, 1, 0, PathEnd::kFront);
  ASSERT_EQ(c.p(), 1);
  EXPECT_EQ(c.path(0), (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(c.sum_of_squares(), 9);

  CoverTrace trace;
  const auto full = maximal_path_cover(s, &trace);
  EXPECT_EQ(full.p(), 1);
  EXPECT_EQ(trace.unbalances, 0);
  EXPECT_GE(trace.merges, 1);
}

TEST(CoverOps, UnbalanceNeedsLongerFirst) {
  const SpoilGraph s(3, {{1}, {2}, {0}});
  const PathCover c({{0, 1}, {2}});
  EXPECT_THROW(apply_unbalance(c, s, 0, 1, PathEnd::kFront), LengthOrderViolated);
}

TEST(CoverOps, RotationOnThreeCycle) {
  const PathCover c({{0, 1, 2}});
  const auto r = apply_rotation(c, kCycle3, 0, 0);
  EXPECT_EQ(r.path(0), (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(r.sum_of_squares(), c.sum_of_squares());
  const SpoilGraph open(3, {{1}, {2}, {}});
  EXPECT_THROW(apply_rotation(c, open, 0, 0), MissingArc);
}

TEST(Maximality, ThreeCyclePathIsMaximal) {
  EXPECT_TRUE(is_maximal(PathCover({{0, 1, 2}}), kCycle3).maximal);
}

TEST(Maximality, ConnectedSingletonsAreNot) {
  const SpoilGraph s(2, {{1}, {}});
  const auto r = is_maximal(PathCover::trivial(2), s);
  EXPECT_FALSE(r.maximal);
  ASSERT_EQ(r.witness.size(), 1u);
  EXPECT_EQ(r.witness[0].kind, CoverOp::Kind::kMerge);
}

TEST(MaximalCover, Fig1GivesOneThreePath) {
  const auto c = maximal_path_cover(build_spoiling_graph(gen_fig1()));
  EXPECT_EQ(c.p(), 1);
  EXPECT_EQ(c.k(), 0);
  EXPECT_EQ(c.path(0).size(), 3u);
}

TEST(MaximalCover, ArcFreeIsAllIsolated) {
  const SpoilGraph s(5, std::vector<std::vector<int>>(5));
  const auto c = maximal_path_cover(s);
  EXPECT_EQ(c.p(), 5);
  EXPECT_EQ(c.k(), 5);
}

TEST(MaximalCover, CompleteIsHamiltonianPath) {
  const auto c = maximal_path_cover(complete_spoil(6));
  EXPECT_EQ(c.p(), 1);
  EXPECT_EQ(c.k(), 0);
}

TEST(MaximalCover, RandomSpoilGraphsAreMaximalAndStructurallySound) {
  Rng rng(2024);
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 8));
    const double p = 0.05 + 0.4 * uniform_unit(rng);
    const auto s = random_spoil(n, p, rng);
    const auto c = maximal_path_cover(s);
    c.validate(s);
    EXPECT_EQ(c.vertex_count(), n);
    EXPECT_TRUE(is_maximal(c, s).maximal);
    EXPECT_FALSE(oracle::cover_has_improvement(c, s));
    EXPECT_TRUE(structural_violations(c, s).empty());
  }
}

TEST(MaximalCover, IsMaximalAgreesWithIndependentScan) {
  // Random (not necessarily maximal) covers built from random merges.
  Rng rng(77);
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 6));
    const auto s = random_spoil(n, 0.35, rng);
    PathCover c = PathCover::trivial(n);
    for (int step = 0; step < 3; ++step) {
      const int a = static_cast<int>(uniform_below(rng, c.p()));
      const int b = static_cast<int>(uniform_below(rng, c.p()));
      if (a != b && s.has_arc(c.path(a).back(), c.path(b).front())) c = apply_merge(c, s, a, b);
    }
    EXPECT_EQ(is_maximal(c, s).maximal, !oracle::cover_has_improvement(c, s));
  }
}

TEST(MaximalCover, WitnessesApplyAndImprove) {
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = random_spoil(6, 0.3, rng);
    const auto c = PathCover::trivial(6);
    const auto r = is_maximal(c, s);
    if (r.maximal) continue;
    auto next = c;
    for (const auto& op : r.witness) next = apply_op(next, s, op);
    EXPECT_GT(next.sum_of_squares(), c.sum_of_squares());
  }
}

TEST(MaximalCover, CorpusCoversSatisfyConditions) {
  for (const auto& inst : corpus::all()) {
    const auto a = align_to_matching(inst.graph, find_perfect_matching(inst.graph));
    const auto s = build_spoiling_graph(a.graph);
    const auto c = maximal_path_cover(s);
    EXPECT_TRUE(structural_violations(c, s).empty()) << inst.name;
    EXPECT_FALSE(oracle::cover_has_improvement(c, s)) << inst.name;
  }
}

TEST(Validate, RejectsBrokenCovers) {
  EXPECT_THROW(PathCover({{0, 2}, {1}}).validate(kCycle3), Error);  // (w0,w2) is not an arc
  EXPECT_THROW(PathCover({{0, 1}}).validate(kCycle3), Error);       // w2 uncovered
}
