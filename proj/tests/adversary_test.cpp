#include <gtest/gtest.h>

#include "corpus.hpp"
#include "maxmin/adversary.hpp"
#include "oracles.hpp"

using namespace maxmin;

namespace {

std::vector<Vertex> as_vec(const Permutation& p) { return {p.order().begin(), p.order().end()}; }

int matched(const BipartiteGraph& g, const Permutation& sigma, const Permutation& pi) {
  return greedy_match(g, sigma, pi).size;
}

}  // namespace

TEST(Exact, Fig1IdentityPi) {
  const auto r = worst_order_exact(gen_fig1(), Permutation::identity(3));
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.size, 2);
  EXPECT_EQ(matched(gen_fig1(), r.sigma, Permutation::identity(3)), 2);
}

TEST(Exact, Fig1EveryPiIsTwo) {
  oracle::for_each_perm(3, [](const std::vector<Vertex>& order) {
    EXPECT_EQ(worst_order_exact(gen_fig1(), Permutation(order)).size, 2);
  });
}

TEST(Exact, AgreesWithFactorialBruteForceOnSmallCorpus) {
  Rng rng(31);
  int checked = 0;
  for (const auto& inst : corpus::all()) {
    if (inst.graph.n() > 7) continue;
    for (int rep = 0; rep < 4; ++rep) {
      const auto pi = rep == 0 ? Permutation::identity(inst.graph.n()) : Permutation::random(inst.graph.n(), rng);
      const auto r = worst_order_exact(inst.graph, pi);
      ASSERT_TRUE(r.exact);
      EXPECT_EQ(r.size, oracle::min_over_sigma(inst.graph, as_vec(pi))) << inst.name;
      EXPECT_EQ(matched(inst.graph, r.sigma, pi), r.size);
      ++checked;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(Exact, SingleVertexAndMismatch) {
  const BipartiteGraph one(1, {{0, 0}});
  EXPECT_EQ(worst_order_exact(one, Permutation::identity(1)).size, 1);
  EXPECT_THROW(worst_order_exact(gen_fig1(), Permutation::identity(2)), DimensionMismatch);
}

TEST(Exact, BudgetExhaustionIsReported) {
  const auto g = gen_pg23();
  Rng rng(3);
  const auto pi = Permutation::random(13, rng);
  const auto cut = worst_order_exact(g, pi, 5);
  EXPECT_FALSE(cut.exact);
  const auto full = worst_order_exact(g, pi);
  ASSERT_TRUE(full.exact);
  EXPECT_GE(cut.size, full.size);
  EXPECT_EQ(matched(g, cut.sigma, pi), cut.size);
}

TEST(Exact, LargeGraphFallsBackToHeuristic) {
  const auto g = gen_biclique_half(40);
  const auto r = worst_order_exact(g, Permutation::identity(40));
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(matched(g, r.sigma, Permutation::identity(40)), r.size);
}

TEST(Heuristic, NeverBelowExactAndUsuallyEqual) {
  Rng rng(8);
  int total = 0;
  int equal = 0;
  for (const auto& inst : corpus::all()) {
    if (inst.graph.n() > 10) continue;
    for (int rep = 0; rep < 3; ++rep) {
      const auto pi = Permutation::random(inst.graph.n(), rng);
      const auto exact = worst_order_exact(inst.graph, pi);
      const auto h = worst_order_heuristic(inst.graph, pi, 10'000, 1000 + rep);
      EXPECT_GE(h.size, exact.size) << inst.name;
      EXPECT_EQ(matched(inst.graph, h.sigma, pi), h.size);
      ++total;
      equal += h.size == exact.size;
    }
  }
  EXPECT_GE(10 * equal, 9 * total) << equal << " of " << total;
}

TEST(Heuristic, DeterministicPerSeed) {
  const auto g = gen_hamiltonian_random(12, 6, 4);
  Rng rng(2);
  const auto pi = Permutation::random(12, rng);
  const auto a = worst_order_heuristic(g, pi, 3000, 99);
  const auto b = worst_order_heuristic(g, pi, 3000, 99);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.size, b.size);
}

TEST(Outcomes, MatchBruteForceSets) {
  Rng rng(12);
  for (const auto& inst : corpus::all()) {
    if (inst.graph.n() > 6) continue;
    const auto pi = Permutation::random(inst.graph.n(), rng);
    std::set<std::uint32_t> brute;
    oracle::for_each_perm(inst.graph.n(), [&](const std::vector<Vertex>& sigma) {
      const auto taken = oracle::simulate(inst.graph, sigma, as_vec(pi));
      std::uint32_t m = 0;
      for (int v = 0; v < inst.graph.n(); ++v) m |= static_cast<std::uint32_t>(taken[v] != 0) << v;
      brute.insert(m);
    });
    const auto out = enumerate_outcomes(inst.graph, pi);
    std::set<std::uint32_t> got;
    for (const auto& [mask, sigma] : out) {
      got.insert(mask);
      const auto o = greedy_match(inst.graph, sigma, pi);
      for (int v = 0; v < inst.graph.n(); ++v) EXPECT_EQ(o.v_matched(v), (mask >> v & 1) != 0);
    }
    EXPECT_EQ(got, brute) << inst.name;
  }
}

TEST(RegularGadget, LeavesAThirdOfABlockPerCopy) {
  for (auto [d, t] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{6, 2}, std::pair{1, 3}}) {
    const auto g = gen_regular89(d, t);
    const int need = (d + 2) / 3 * t;
    Rng rng(static_cast<std::uint64_t>(10 * d + t));
    for (int rep = 0; rep < 300; ++rep) {
      const auto pi = Permutation::random(g.n(), rng);
      const auto sigma = adversary_regular_gadget(g, pi, d, t);
      EXPECT_GE(g.n() - matched(g, sigma, pi), need) << "d=" << d << " t=" << t;
    }
  }
}

TEST(RegularGadget, NeverBeatsExactOnNine) {
  const auto g = gen_regular89(3, 1);
  Rng rng(1);
  for (int rep = 0; rep < 30; ++rep) {
    const auto pi = Permutation::random(9, rng);
    EXPECT_GE(matched(g, adversary_regular_gadget(g, pi, 3, 1), pi), worst_order_exact(g, pi).size);
  }
}

TEST(RegularGadget, RejectsOtherGraphs) {
  EXPECT_THROW(adversary_regular_gadget(gen_fig1(), Permutation::identity(3), 1, 1), InvalidInput);
}

TEST(Projective, FanoEveryPiAtMostFive) {
  const auto g = gen_fano();
  oracle::for_each_perm(7, [&](const std::vector<Vertex>& order) {
    const Permutation pi(order);
    EXPECT_LE(matched(g, adversary_projective(g, pi, 2), pi), 5);
  });
}

TEST(Projective, FanoExactSampleAtMostFive) {
  const auto g = gen_fano();
  Rng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const auto r = worst_order_exact(g, Permutation::random(7, rng));
    ASSERT_TRUE(r.exact);
    EXPECT_LE(r.size, 5);
    EXPECT_GE(r.size, 4);  // ceil(7/2)
  }
}

TEST(Projective, Pg23AtMostTen) {
  const auto g = gen_pg23();
  Rng rng(6);
  for (int rep = 0; rep < 500; ++rep) {
    const auto pi = Permutation::random(13, rng);
    EXPECT_LE(matched(g, adversary_projective(g, pi, 3), pi), 10);
  }
}

TEST(Biclique, V1FirstMatchesEverything) {
  for (int n : {2, 6, 10}) {
    const auto g = gen_biclique_half(n);
    const auto pi = Permutation::identity(n);  // V1 = [0, n/2) first
    EXPECT_EQ(worst_order_exact(g, pi).size, n);
    EXPECT_EQ(matched(g, adversary_biclique(g, pi), pi), n);
  }
}

TEST(Biclique, ConstructiveEqualsExactExhaustively) {
  for (int n : {4, 6}) {
    const auto g = gen_biclique_half(n);
    oracle::for_each_perm(n, [&](const std::vector<Vertex>& order) {
      const Permutation pi(order);
      EXPECT_EQ(matched(g, adversary_biclique(g, pi), pi), worst_order_exact(g, pi).size);
    });
  }
}

TEST(Biclique, ConstructiveEqualsExactOnSampledTwelve) {
  const auto g = gen_biclique_half(12);
  Rng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const auto pi = Permutation::random(12, rng);
    EXPECT_EQ(matched(g, adversary_biclique(g, pi), pi), worst_order_exact(g, pi).size);
  }
}

TEST(Planted, ValidOrderAndNeverBelowExact) {
  for (const auto& inst : corpus::all()) {
    if (inst.spec.family != Family::kPlantedIs) continue;
    const int s = planted_block_size(inst.graph.n(), inst.spec.params.eps);
    Rng rng(inst.spec.seed);
    for (int rep = 0; rep < 20; ++rep) {
      const auto pi = Permutation::random(inst.graph.n(), rng);
      const auto sigma = adversary_planted_is(inst.graph, pi, s);
      EXPECT_GE(matched(inst.graph, sigma, pi), worst_order_exact(inst.graph, pi).size) << inst.name;
    }
  }
}

TEST(Planted, SLeavesTOutsidePrefixUnmatchedWhenTakersCoverQ) {
  // With every taker matched into Q, only S is left to reach T \ Q, and S has no edge there.
  const auto inst = gen_planted_is(60, 6, 0.1, 5);
  const int n = 60;
  const int q = n - inst.s;
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pi = Permutation::random(n, rng);
    const auto out = greedy_match(inst.graph, adversary_planted_is(inst.graph, pi, inst.s), pi);
    int prefix_matched = 0;
    for (int r = 0; r < q; ++r) prefix_matched += out.v_matched(pi.at(r)) && out.matched_u_of_v[pi.at(r)] >= inst.s;
    if (prefix_matched < q) continue;
    for (int r = q; r < n; ++r) {
      if (pi.at(r) < inst.s) EXPECT_FALSE(out.v_matched(pi.at(r)));
    }
  }
}
