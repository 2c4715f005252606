#pragma once

// Safety and bad sets, entropy exponents, Monte Carlo over random pi, the
// iterative upgrading process, and the buyer/item game cross-check.

#include <cmath>
#include <optional>
#include <set>

#include "maxmin/adversary.hpp"
#include "maxmin/build.hpp"
#include "maxmin/parallel.hpp"

namespace maxmin {

// ---------------------------------------------------------------------------
// Safety.

inline detail::Mask to_mask(const std::vector<Vertex>& set, int n) {
  detail::Mask m = 0;
  for (Vertex v : set) {
    if (v < 0 || v >= n) throw InvalidInput("vertex " + std::to_string(v) + " out of range");
    m |= detail::Mask{1} << v;
  }
  return m;
}

inline std::vector<Vertex> from_mask(detail::Mask m) {
  std::vector<Vertex> out;
  for (Vertex v = 0; m; ++v, m >>= 1) {
    if (m & 1) out.push_back(v);
  }
  return out;
}

struct SafetyResult {
  bool safe = true;
  std::optional<Permutation> witness;  // sigma leaving the whole set unmatched
};

/// pi is safe for s when every sigma matches some vertex of s. The empty set
/// is safe by convention. Unsafe answers carry a re-validated witness.
inline SafetyResult is_safe(const BipartiteGraph& g, const Permutation& pi, const std::vector<Vertex>& s) {
  if (s.empty()) return {};
  const detail::ArrivalGame game(g, pi);
  const detail::Mask target = to_mask(s, g.n());
  std::unordered_set<std::uint64_t> visited;
  std::vector<Vertex> path;
  std::function<bool(detail::Mask, detail::Mask)> dfs = [&](detail::Mask retired, detail::Mask matched) {
    if (matched & target) return false;
    if (!visited.insert(detail::ArrivalGame::key(retired, matched)).second) return false;
    const auto moves = game.moves(retired, matched);
    if (moves.empty()) return true;
    for (Vertex u : moves) {
      const Vertex v = game.response(u, matched);
      path.push_back(u);
      if (dfs(retired | detail::Mask{1} << u, matched | detail::Mask{1} << v)) return true;
      path.pop_back();
    }
    return false;
  };
  if (!dfs(0, 0)) return {};
  SafetyResult out;
  out.safe = false;
  out.witness = game.complete(path);
  const auto replay = greedy_match(g, *out.witness, pi);
  for (Vertex v : s) {
    if (replay.v_matched(v)) throw InvariantViolation("safety witness does not leave the set unmatched");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bad sets.

enum class BadSetMode { kCanonicalPi, kFullPi };

struct BadSet {
  std::vector<Vertex> set;
  Permutation pi;
  Permutation sigma;
};

struct BadSetReport {
  int set_size = 0;
  BadSetMode mode = BadSetMode::kFullPi;
  std::vector<BadSet> bad_sets;  // sorted by set
};

inline constexpr int kMaxFullPiN = 8;

namespace detail {

inline void for_each_subset(int n, int size, const std::function<void(Mask)>& fn) {
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Mask m = 0;
    for (int i : idx) m |= Mask{1} << i;
    fn(m);
    int i = size - 1;
    while (i >= 0 && idx[i] == n - size + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Every V-set of the given size left fully unmatched by some (pi, sigma).
/// full_pi tries all pi (n <= 8); canonical_pi only tries pi that put the set last.
inline BadSetReport enumerate_bad_sets(const BipartiteGraph& g, int size, BadSetMode mode = BadSetMode::kFullPi) {
  const int n = g.n();
  if (size < 1 || size > n) throw InvalidInput("bad-set size out of range");
  if (n > kMaxFullPiN) throw InvalidInput("bad-set enumeration supports n <= 8");
  BadSetReport report;
  report.set_size = size;
  report.mode = mode;
  std::map<detail::Mask, BadSet> found;

  if (mode == BadSetMode::kFullPi) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    const detail::Mask all = n == 32 ? ~detail::Mask{0} : (detail::Mask{1} << n) - 1;
    do {
      const Permutation pi(order);
      for (const auto& [matched, sigma] : enumerate_outcomes(g, pi)) {
        const detail::Mask free = all & ~matched;
        if (detail::popcount(free) < size) continue;
        detail::for_each_subset(n, size, [&](detail::Mask s) {
          if ((s & free) == s && !found.count(s)) found.emplace(s, BadSet{from_mask(s), pi, sigma});
        });
      }
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    detail::for_each_subset(n, size, [&](detail::Mask s) {
      std::vector<Vertex> head;
      std::vector<Vertex> tail = from_mask(s);
      for (Vertex v = 0; v < n; ++v) {
        if (!(s >> v & 1)) head.push_back(v);
      }
      bool done = false;
      do {
        do {
          std::vector<Vertex> order = head;
          order.insert(order.end(), tail.begin(), tail.end());
          const Permutation pi(std::move(order));
          if (auto r = is_safe(g, pi, from_mask(s)); !r.safe) {
            found.emplace(s, BadSet{from_mask(s), pi, *r.witness});
            done = true;
          }
        } while (!done && std::next_permutation(tail.begin(), tail.end()));
      } while (!done && std::next_permutation(head.begin(), head.end()));
    });
  }
  for (auto& [mask, bad] : found) report.bad_sets.push_back(std::move(bad));
  std::sort(report.bad_sets.begin(), report.bad_sets.end(),
            [](const BadSet& a, const BadSet& b) { return a.set < b.set; });
  return report;
}

// ---------------------------------------------------------------------------
// Entropy bounds.

/// Binary entropy in bits.
inline double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("entropy argument outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  // log1p keeps the small-side term accurate near 0 and 1.
  const double log_p = p < 0.5 ? std::log(p) : std::log1p(-q);
  const double log_q = q < 0.5 ? std::log(q) : std::log1p(-p);
  return -(p * log_p + q * log_q) / std::log(2.0);
}

struct AnalysisParams {
  Rational eps;
  Rational alpha;
  Rational beta;

  Rational rho() const { return Rational(1, 2) + eps; }
  Rational rho_bar() const { return 1 - rho(); }
  Rational delta() const { return beta - alpha; }
  /// delta < alpha / 2, required by the expansion lemma.
  bool delta_strictly_below_half_alpha() const { return delta() < alpha / 2; }
  /// beta / alpha > rho / rho_bar, required by the good-order lemma.
  bool good_order_premise() const { return beta * rho_bar() > rho() * alpha; }

  void validate() const {
    if (!(Rational(0) < alpha && alpha < beta && beta < 1)) throw InvalidInput("need 0 < alpha < beta < 1");
    if (eps < 0 || 4 * eps >= 1) throw InvalidInput("need 0 <= eps < 1/4");
    if (alpha >= rho_bar() || alpha + beta > 1 || beta > rho()) {
      throw InvalidInput("alpha, beta out of range for the exponent formulas");
    }
  }
};

inline AnalysisParams default_analysis_params() {
  return {Rational(3, 2500), Rational(49, 200), Rational(147, 400)};
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

struct ExponentReport {
  double badset_exp = 0;
  double order_exp = 0;
  double expansion_exp_literal = 0;
  double expansion_exp_rescaled = 0;
  double combined_order = 0;
  double combined_expansion = 0;
  bool delta_strictly_below_half_alpha = false;
  bool good_order_premise = false;
};

/// Base-2 exponents (per n) of the three counting bounds.
inline ExponentReport bound_exponents(const AnalysisParams& params) {
  params.validate();
  const double eps = to_double(params.eps);
  const double a = to_double(params.alpha);
  const double b = to_double(params.beta);
  const double rho = to_double(params.rho());
  const double rb = to_double(params.rho_bar());
  const double d = to_double(params.delta());
  auto expansion = [](double alpha, double delta, double scale) {
    return (-entropy(alpha) + alpha * entropy(delta / alpha) + (1 - alpha) * entropy(delta / (1 - alpha))) * scale;
  };
  ExponentReport r;
  r.badset_exp = rb * entropy(2 * eps / rb) + rho * entropy(2 * eps / rho);
  r.order_exp = -(entropy(a + b) - entropy(a / rb) * rb - entropy(b / rho) * rho);
  // As printed: only the leading entropy term sees the rescaled alpha.
  r.expansion_exp_literal =
      (-entropy(a / rb) + a * entropy(d / a) + (1 - a) * entropy(d / (1 - a))) * rb;
  // Every fraction taken relative to the rho_bar * n vertices the lemma is applied to.
  r.expansion_exp_rescaled = expansion(a / rb, d / rb, rb);
  r.combined_order = r.badset_exp + r.order_exp;
  r.combined_expansion = r.badset_exp + std::min(r.expansion_exp_literal, r.expansion_exp_rescaled);
  r.delta_strictly_below_half_alpha = params.delta_strictly_below_half_alpha();
  r.good_order_premise = params.good_order_premise();
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo over uniformly random pi.

enum class AdversaryMode { kExact, kHeuristic, kConstructive };

inline std::string to_string(AdversaryMode m) {
  switch (m) {
    case AdversaryMode::kExact: return "exact";
    case AdversaryMode::kHeuristic: return "heuristic";
    case AdversaryMode::kConstructive: return "constructive";
  }
  return "?";
}

inline AdversaryMode parse_adversary_mode(const std::string& s) {
  if (s == "exact") return AdversaryMode::kExact;
  if (s == "heuristic") return AdversaryMode::kHeuristic;
  if (s == "constructive") return AdversaryMode::kConstructive;
  throw InvalidInput("unknown adversary mode '" + s + "'");
}

using ConstructiveAdversary = std::function<Permutation(const Permutation& pi)>;

struct MonteCarloOptions {
  AdversaryMode mode = AdversaryMode::kExact;
  std::uint64_t budget = kDefaultExactBudget;
  int heuristic_iters = 10'000;
  ConstructiveAdversary constructive;  // required for kConstructive
  int threads = 1;
};

struct MonteCarloStats {
  int trials = 0;
  double mean_fraction = 0;
  double min_fraction = 0;
  double max_fraction = 0;
  double stddev_fraction = 0;
  bool all_exact = false;  // only then is mean an estimate of E[min], otherwise an upper bound
  std::vector<int> sizes;  // per trial
};

inline MonteCarloStats monte_carlo_random_pi(const BipartiteGraph& g, int trials, std::uint64_t seed,
                                             const MonteCarloOptions& opts = {}) {
  if (trials < 1) throw InvalidInput("trials must be positive");
  if (opts.mode == AdversaryMode::kConstructive && !opts.constructive) {
    throw InvalidInput("constructive mode needs a family adversary");
  }
  const int n = g.n();
  MonteCarloStats stats;
  stats.trials = trials;
  stats.sizes.assign(trials, 0);
  std::vector<char> exact(trials, 0);
  parallel_for(static_cast<std::size_t>(trials), opts.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto pi = Permutation::random(n, rng);
    switch (opts.mode) {
      case AdversaryMode::kExact: {
        const auto r = worst_order_exact(g, pi, opts.budget);
        stats.sizes[t] = r.size;
        exact[t] = r.exact;
        break;
      }
      case AdversaryMode::kHeuristic:
        stats.sizes[t] = worst_order_heuristic(g, pi, opts.heuristic_iters, derive_seed(seed ^ 0x5bd1e995, t)).size;
        break;
      case AdversaryMode::kConstructive:
        stats.sizes[t] = greedy_match(g, opts.constructive(pi), pi).size;
        break;
    }
  });
  stats.all_exact = std::all_of(exact.begin(), exact.end(), [](char c) { return c != 0; });
  double sum = 0;
  double sum_sq = 0;
  stats.min_fraction = 1;
  stats.max_fraction = 0;
  for (int s : stats.sizes) {
    const double f = n == 0 ? 1.0 : static_cast<double>(s) / n;
    sum += f;
    sum_sq += f * f;
    stats.min_fraction = std::min(stats.min_fraction, f);
    stats.max_fraction = std::max(stats.max_fraction, f);
  }
  stats.mean_fraction = sum / trials;
  stats.stddev_fraction = std::sqrt(std::max(0.0, sum_sq / trials - stats.mean_fraction * stats.mean_fraction));
  return stats;
}

// ---------------------------------------------------------------------------
// Iterative upgrading: rerun the worst sigma, then move the unmatched V
// vertices ahead of the matched ones.

enum class MinimizerPolicy { kFirstFound, kMaxLosersLow, kExhaustiveWorstForNextRound };

inline MinimizerPolicy parse_minimizer_policy(const std::string& s) {
  if (s == "first_found") return MinimizerPolicy::kFirstFound;
  if (s == "max_losers_low") return MinimizerPolicy::kMaxLosersLow;
  if (s == "exhaustive_worst_for_next_round") return MinimizerPolicy::kExhaustiveWorstForNextRound;
  throw InvalidInput("unknown minimizer policy '" + s + "'");
}

struct IterationRecord {
  Permutation pi;
  Permutation sigma;
  int size = 0;
  std::vector<Vertex> losers;  // unmatched V under (sigma, pi)
};

struct IterativeTrace {
  std::vector<IterationRecord> iterations;
  int iterations_used = 0;
  bool cap_hit = false;
};

/// Unmatched V first, then matched V, each group keeping its pi order.
inline Permutation upgrade_losers(const Permutation& pi, detail::Mask matched) {
  std::vector<Vertex> losers;
  std::vector<Vertex> winners;
  for (Vertex v : pi.order()) (matched >> v & 1 ? winners : losers).push_back(v);
  losers.insert(losers.end(), winners.begin(), winners.end());
  return Permutation(std::move(losers));
}

namespace detail {

inline std::vector<std::pair<Mask, Permutation>> minimizing_outcomes(const BipartiteGraph& g, const Permutation& pi) {
  const auto outcomes = enumerate_outcomes(g, pi);
  int best = g.n() + 1;
  for (const auto& [m, s] : outcomes) best = std::min(best, popcount(m));
  std::vector<std::pair<Mask, Permutation>> out;
  for (const auto& [m, s] : outcomes) {
    if (popcount(m) == best) out.emplace_back(m, s);
  }
  return out;
}

inline IterationRecord make_record(const BipartiteGraph& g, const Permutation& pi, const Permutation& sigma) {
  IterationRecord rec{pi, sigma, 0, {}};
  const auto out = greedy_match(g, sigma, pi);
  rec.size = out.size;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!out.v_matched(v)) rec.losers.push_back(v);
  }
  return rec;
}

inline bool above_half(int size, int n) { return 2 * size > n; }

/// Longest run from pi over all choices of minimizer; memoized on pi.
class LongestRun {
 public:
  explicit LongestRun(const BipartiteGraph& g) : g_(g) {}

  /// Number of iterations from pi (including the terminating one), capped at `budget`.
  int length(const Permutation& pi, int budget, std::vector<IterationRecord>* line) {
    if (budget <= 0) return 0;
    const auto key = std::vector<Vertex>(pi.order().begin(), pi.order().end());
    if (!line) {
      if (auto it = memo_.find(key); it != memo_.end() && (it->second.complete || it->second.value >= budget)) {
        return std::min(it->second.value, budget);
      }
    }
    if (on_stack_.count(key)) return budget;  // a cycle never terminates
    on_stack_.insert(key);
    int best = 0;
    std::optional<std::pair<Mask, Permutation>> best_choice;
    for (auto& choice : minimizing_outcomes(g_, pi)) {
      int len = 1;
      if (!above_half(popcount(choice.first), g_.n())) {
        len += length(upgrade_losers(pi, choice.first), budget - 1, nullptr);
      }
      if (len > best) {
        best = len;
        best_choice = std::move(choice);
      }
      if (best >= budget) break;
    }
    on_stack_.erase(key);
    memo_[key] = {best, best < budget};
    if (line && best_choice) {
      line->push_back(make_record(g_, pi, best_choice->second));
      if (!above_half(popcount(best_choice->first), g_.n())) {
        length(upgrade_losers(pi, best_choice->first), budget - 1, line);
      }
    }
    return best;
  }

 private:
  struct Entry {
    int value;
    bool complete;
  };
  const BipartiteGraph& g_;
  std::map<std::vector<Vertex>, Entry> memo_;
  std::set<std::vector<Vertex>> on_stack_;
};

}  // namespace detail

inline IterativeTrace iterative_process(const BipartiteGraph& g, const Permutation& pi1, int cap,
                                        MinimizerPolicy policy) {
  if (pi1.size() != g.n()) throw DimensionMismatch("pi size differs from n");
  if (cap < 1) throw InvalidInput("iteration cap must be positive");
  IterativeTrace trace;
  if (policy == MinimizerPolicy::kExhaustiveWorstForNextRound) {
    detail::LongestRun search(g);
    search.length(pi1, cap, &trace.iterations);
  } else {
    Permutation pi = pi1;
    for (int it = 0; it < cap; ++it) {
      Permutation sigma;
      detail::Mask matched = 0;
      if (policy == MinimizerPolicy::kFirstFound) {
        sigma = worst_order_exact(g, pi).sigma;
        const auto out = greedy_match(g, sigma, pi);
        for (Vertex v = 0; v < g.n(); ++v) {
          if (out.v_matched(v)) matched |= detail::Mask{1} << v;
        }
      } else {
        // Among minimizers, the one whose losers sit lowest in pi.
        long best_sum = -1;
        for (auto& [m, s] : detail::minimizing_outcomes(g, pi)) {
          long sum = 0;
          for (Vertex v = 0; v < g.n(); ++v) {
            if (!(m >> v & 1)) sum += pi.rank_of(v);
          }
          if (best_sum < 0 || sum < best_sum) {
            best_sum = sum;
            matched = m;
            sigma = s;
          }
        }
      }
      trace.iterations.push_back(detail::make_record(g, pi, sigma));
      if (detail::above_half(trace.iterations.back().size, g.n())) break;
      pi = upgrade_losers(pi, matched);
    }
  }
  trace.iterations_used = static_cast<int>(trace.iterations.size());
  trace.cap_hit = trace.iterations_used >= cap && !detail::above_half(trace.iterations.back().size, g.n());
  return trace;
}

/// Tries every pi_1 in lexicographic order (n <= 10) and returns the longest
/// run of the exhaustive policy, stopping early once `target` iterations are reached.
inline IterativeTrace longest_iterative_run(const BipartiteGraph& g, int cap, int target) {
  const int n = g.n();
  if (n > 10) throw InvalidInput("pi_1 search limited to n <= 10");
  detail::LongestRun search(g);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = 0;
  std::vector<Vertex> best_order = order;
  do {
    const int len = search.length(Permutation(order), cap, nullptr);
    if (len > best) {
      best = len;
      best_order = order;
      if (best >= target) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return iterative_process(g, Permutation(best_order), cap, MinimizerPolicy::kExhaustiveWorstForNextRound);
}

// ---------------------------------------------------------------------------
// Buyer-ordering game versus item-ordering game.

struct GameValues {
  int item_game = 0;   // max over pi on V of min over sigma
  int buyer_game = 0;  // max over buyer orders of min over the buyers' item choices
  bool equal() const { return item_game == buyer_game; }
};

namespace detail {

/// Buyers (V) come in `order`; each takes an available wanted item (a U
/// vertex) chosen by the adversary, or nothing if none is available.
inline int buyer_game_min(const BipartiteGraph& g, const Permutation& order) {
  const int n = g.n();
  std::vector<std::unordered_map<Mask, int>> memo(n + 1);
  std::function<int(int, Mask)> go = [&](int step, Mask taken) {
    if (step == n) return 0;
    if (auto it = memo[step].find(taken); it != memo[step].end()) return it->second;
    const Vertex buyer = order.at(step);
    int best = std::numeric_limits<int>::max();
    bool any = false;
    for (Vertex item : g.neighbors_of_v(buyer)) {
      if (taken >> item & 1) continue;
      any = true;
      best = std::min(best, 1 + go(step + 1, taken | Mask{1} << item));
    }
    if (!any) best = go(step + 1, taken);
    memo[step][taken] = best;
    return best;
  };
  return go(0, 0);
}

}  // namespace detail

inline GameValues cross_check_interpretations(const BipartiteGraph& g, int n_cap = 5) {
  const int n = g.n();
  if (n > n_cap) throw InvalidInput("cross-check limited to n <= " + std::to_string(n_cap));
  GameValues values;
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  do {
    const Permutation pi(order);
    values.item_game = std::max(values.item_game, worst_order_exact(g, pi).size);
    values.buyer_game = std::max(values.buyer_game, detail::buyer_game_min(g, pi));
  } while (std::next_permutation(order.begin(), order.end()));
  return values;
}

}  // namespace maxmin
