#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "maxmin/analysis.hpp"
#include "oracles.hpp"

using namespace maxmin;

namespace {

std::vector<Vertex> as_vec(const Permutation& p) { return {p.order().begin(), p.order().end()}; }

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST(Safety, Fig1SingletonsAgainstBruteForce) {
  const auto g = gen_fig1();
  // pi = (v3, v2, v1): sigma = (u1, u2, u3) leaves v1 unmatched.
  const auto r = is_safe(g, Permutation({2, 1, 0}), {0});
  EXPECT_FALSE(r.safe);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(greedy_match(g, *r.witness, Permutation({2, 1, 0})).v_matched(0));
  // A vertex ranked first is always taken.
  EXPECT_TRUE(is_safe(g, Permutation({0, 1, 2}), {0}).safe);
  oracle::for_each_perm(3, [&](const std::vector<Vertex>& order) {
    const Permutation pi(order);
    int unsafe = 0;
    for (Vertex v = 0; v < 3; ++v) {
      const auto s = is_safe(g, pi, {v});
      EXPECT_EQ(s.safe, !oracle::some_sigma_avoids(g, order, {v}));
      unsafe += !s.safe;
    }
    EXPECT_GE(unsafe, 1);  // some vertex is always lost
  });
}

TEST(Safety, EmptySetIsSafe) {
  EXPECT_TRUE(is_safe(gen_fig1(), Permutation::identity(3), {}).safe);
}

TEST(Safety, AgreesWithBruteForce) {
  Rng rng(40);
  for (const auto& inst : corpus::all()) {
    const int n = inst.graph.n();
    if (n > 6) continue;
    for (int rep = 0; rep < 3; ++rep) {
      const auto pi = Permutation::random(n, rng);
      const int size = 1 + static_cast<int>(uniform_below(rng, n));
      auto all = oracle::iota_vec(n);
      shuffle(std::span<Vertex>(all), rng);
      const std::vector<Vertex> s(all.begin(), all.begin() + size);
      EXPECT_EQ(is_safe(inst.graph, pi, s).safe, !oracle::some_sigma_avoids(inst.graph, as_vec(pi), s)) << inst.name;
    }
  }
}

TEST(Safety, LargeSetsBeyondHallAreSafe) {
  // More than n - ceil(n/2) vertices can never all stay unmatched when a perfect matching exists.
  const auto g = gen_hamiltonian_random(6, 3, 1);
  std::vector<Vertex> s{0, 1, 2, 3};
  EXPECT_TRUE(is_safe(g, Permutation::identity(6), s).safe);
}

TEST(BadSets, SingleGadgetHasExactlyTwoPairs) {
  const auto r = enumerate_bad_sets(gen_badset_chain(1), 2);
  ASSERT_EQ(r.bad_sets.size(), 2u);
  EXPECT_EQ(r.bad_sets[0].set, (std::vector<Vertex>{0, 1}));
  EXPECT_EQ(r.bad_sets[1].set, (std::vector<Vertex>{0, 2}));
  for (const auto& b : r.bad_sets) {
    const auto out = greedy_match(gen_badset_chain(1), b.sigma, b.pi);
    for (Vertex v : b.set) EXPECT_FALSE(out.v_matched(v));
  }
}

TEST(BadSets, TwoGadgetsHaveAtLeastFourQuadruples) {
  const auto r = enumerate_bad_sets(gen_badset_chain(2), 4);
  EXPECT_GE(r.bad_sets.size(), 4u);
}

TEST(BadSets, Fig1EverySingleton) {
  const auto r = enumerate_bad_sets(gen_fig1(), 1);
  EXPECT_EQ(r.bad_sets.size(), 3u);
  EXPECT_TRUE(enumerate_bad_sets(gen_fig1(), 2).bad_sets.empty());
}

TEST(BadSets, CanonicalModeAgreesWithFullOnSmallCorpus) {
  for (const auto& inst : corpus::all()) {
    const int n = inst.graph.n();
    if (n > 6) continue;
    for (int size = 1; size <= n / 2; ++size) {
      const auto full = enumerate_bad_sets(inst.graph, size, BadSetMode::kFullPi);
      const auto canon = enumerate_bad_sets(inst.graph, size, BadSetMode::kCanonicalPi);
      ASSERT_EQ(full.bad_sets.size(), canon.bad_sets.size()) << inst.name << " size " << size;
      for (std::size_t i = 0; i < full.bad_sets.size(); ++i) EXPECT_EQ(full.bad_sets[i].set, canon.bad_sets[i].set);
    }
  }
}

TEST(BadSets, RejectsBadArguments) {
  EXPECT_THROW(enumerate_bad_sets(gen_fig1(), 0), InvalidInput);
  EXPECT_THROW(enumerate_bad_sets(gen_pg23(), 2), InvalidInput);
}

TEST(Entropy, KnownValuesAndSymmetry) {
  EXPECT_EQ(entropy(0.0), 0.0);
  EXPECT_EQ(entropy(1.0), 0.0);
  EXPECT_NEAR(entropy(0.5), 1.0, 1e-15);
  for (double p : {1e-9, 0.01, 0.11, 0.3, 0.49}) {
    EXPECT_NEAR(entropy(p), entropy(1 - p), 1e-12);
    EXPECT_NEAR(entropy(p), h2(p), 1e-12);
  }
  EXPECT_THROW(entropy(-0.1), InvalidInput);
  EXPECT_THROW(entropy(1.5), InvalidInput);
  EXPECT_THROW(entropy(std::nan("")), InvalidInput);
}

TEST(Exponents, DefaultParameters) {
  const auto p = default_analysis_params();
  EXPECT_EQ(p.delta(), Rational(49, 400));
  EXPECT_FALSE(p.delta_strictly_below_half_alpha());  // delta = alpha/2 exactly
  EXPECT_TRUE(p.good_order_premise());
  const auto r = bound_exponents(p);
  // Independent closed form for the bad-set count.
  const double rho = 0.5012;
  const double rb = 0.4988;
  EXPECT_NEAR(r.badset_exp, rb * h2(0.0024 / rb) + rho * h2(0.0024 / rho), 1e-9);
  EXPECT_LE(r.badset_exp, 0.044);
  EXPECT_NEAR(r.order_exp, -(h2(0.6125) - rb * h2(0.245 / rb) - rho * h2(0.3675 / rho)), 1e-9);
  EXPECT_LT(r.combined_order, 0.0);
  // Regression pins (double precision closed forms).
  EXPECT_NEAR(r.badset_exp, 0.04388146907194596, 1e-12);
  EXPECT_NEAR(r.order_exp, -0.04508681134168996, 1e-12);
  EXPECT_NEAR(r.expansion_exp_literal, -0.13558645018459858, 1e-12);
  EXPECT_NEAR(r.expansion_exp_rescaled, -0.00010814633101327833, 1e-12);
}

TEST(Exponents, ZeroEpsilonHasNoBadSets) {
  auto p = default_analysis_params();
  p.eps = 0;
  EXPECT_EQ(bound_exponents(p).badset_exp, 0.0);
}

TEST(Exponents, BadsetExponentGrowsWithEpsilon) {
  auto p = default_analysis_params();
  double last = -1;
  for (int k = 0; k <= 10; ++k) {
    p.eps = Rational(k, 2500);
    const double e = bound_exponents(p).badset_exp;
    EXPECT_GT(e, last);
    last = e;
  }
}

TEST(Exponents, RejectsOutOfRange) {
  EXPECT_THROW(bound_exponents({Rational(0), Rational(1, 2), Rational(1, 4)}), InvalidInput);
  EXPECT_THROW(bound_exponents({Rational(1, 3), Rational(1, 10), Rational(1, 5)}), InvalidInput);
}

TEST(MonteCarlo, HamiltonianExactAboveHalf) {
  const auto g = gen_hamiltonian_random(12, 6, 1);
  const auto s = monte_carlo_random_pi(g, 200, 5);
  EXPECT_TRUE(s.all_exact);
  EXPECT_EQ(s.trials, 200);
  EXPECT_GE(s.min_fraction, 0.5);
  EXPECT_GE(s.mean_fraction, s.min_fraction);
  EXPECT_LE(s.mean_fraction, s.max_fraction);
  // Each trial equals the exact adversary on its own derived pi.
  for (int t = 0; t < 5; ++t) {
    Rng rng(derive_seed(5, t));
    EXPECT_EQ(s.sizes[t], worst_order_exact(g, Permutation::random(12, rng)).size);
  }
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  const auto g = gen_random_regular(10, 3, 2);
  MonteCarloOptions one;
  MonteCarloOptions four;
  four.threads = 4;
  EXPECT_EQ(monte_carlo_random_pi(g, 40, 9, one).sizes, monte_carlo_random_pi(g, 40, 9, four).sizes);
}

TEST(MonteCarlo, ConstructiveAndSingleVertex) {
  const auto g = gen_biclique_half(10);
  MonteCarloOptions opts;
  opts.mode = AdversaryMode::kConstructive;
  opts.constructive = [&](const Permutation& pi) { return adversary_biclique(g, pi); };
  const auto c = monte_carlo_random_pi(g, 50, 3, opts);
  const auto e = monte_carlo_random_pi(g, 50, 3);
  EXPECT_EQ(c.sizes, e.sizes);
  EXPECT_FALSE(c.all_exact);

  const auto one = monte_carlo_random_pi(BipartiteGraph(1, {{0, 0}}), 3, 0);
  EXPECT_EQ(one.mean_fraction, 1.0);
  MonteCarloOptions missing;
  missing.mode = AdversaryMode::kConstructive;
  EXPECT_THROW(monte_carlo_random_pi(g, 5, 0, missing), InvalidInput);
}

TEST(Iterative, UpgradeMovesLosersFirst) {
  const Permutation pi({3, 1, 0, 2});
  // matched = {v1, v2}
  EXPECT_EQ(upgrade_losers(pi, 0b0110), Permutation({3, 0, 1, 2}));
}

TEST(Iterative, RunsEndAboveHalfOrAtCap) {
  for (int i = 1; i <= 3; ++i) {
    const auto g = gen_iterative(i);
    for (auto policy : {MinimizerPolicy::kFirstFound, MinimizerPolicy::kMaxLosersLow,
                        MinimizerPolicy::kExhaustiveWorstForNextRound}) {
      const auto t = iterative_process(g, Permutation::identity(g.n()), 6, policy);
      ASSERT_GE(t.iterations_used, 1);
      for (std::size_t k = 0; k < t.iterations.size(); ++k) {
        const auto& rec = t.iterations[k];
        EXPECT_EQ(rec.size, worst_order_exact(g, rec.pi).size);
        if (k + 1 < t.iterations.size()) {
          EXPECT_LE(2 * rec.size, g.n());
          std::vector<char> loser(g.n(), 0);
          for (Vertex v : rec.losers) loser[v] = 1;
          // Next pi starts with this round's losers.
          for (std::size_t r = 0; r < rec.losers.size(); ++r) EXPECT_TRUE(loser[t.iterations[k + 1].pi.at(r)]);
        }
      }
      if (!t.cap_hit) EXPECT_GT(2 * t.iterations.back().size, g.n());
    }
  }
}

TEST(Iterative, ExhaustivePolicyIsLongest) {
  const auto g = gen_iterative(2);
  oracle::for_each_perm(4, [&](const std::vector<Vertex>& order) {
    const Permutation pi(order);
    const auto best = iterative_process(g, pi, 8, MinimizerPolicy::kExhaustiveWorstForNextRound).iterations_used;
    EXPECT_GE(best, iterative_process(g, pi, 8, MinimizerPolicy::kFirstFound).iterations_used);
    EXPECT_GE(best, iterative_process(g, pi, 8, MinimizerPolicy::kMaxLosersLow).iterations_used);
  });
}

TEST(Iterative, PolicyNames) {
  EXPECT_EQ(parse_minimizer_policy("first_found"), MinimizerPolicy::kFirstFound);
  EXPECT_THROW(parse_minimizer_policy("x"), InvalidInput);
}

TEST(CrossCheck, Fig1AndTrivial) {
  const auto v = cross_check_interpretations(gen_fig1());
  EXPECT_EQ(v.item_game, 2);
  EXPECT_TRUE(v.equal());
  EXPECT_TRUE(cross_check_interpretations(BipartiteGraph(1, {{0, 0}})).equal());
  EXPECT_THROW(cross_check_interpretations(gen_fano()), InvalidInput);
}

TEST(CrossCheck, AllFourByFourGraphsUpToIsomorphism) {
  std::set<std::uint32_t> classes;
  for (std::uint32_t m = 0; m < (1u << 16); ++m) classes.insert(oracle::canonical4(m));
  int checked = 0;
  for (std::uint32_t m : classes) {
    const auto g = oracle::from_mask4(m);
    if (!oracle::has_perfect_matching_brute(g)) continue;
    const auto v = cross_check_interpretations(g);
    EXPECT_TRUE(v.equal()) << "mask " << m << " item " << v.item_game << " buyer " << v.buyer_game;
    EXPECT_EQ(v.item_game, oracle::max_min(g));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}
