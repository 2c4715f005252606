#pragma once

// Adversaries for the arrival order sigma: an exact memoized game search, a
// local-search heuristic, and constructive adversaries for specific families.

#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "maxmin/gen.hpp"
#include "maxmin/matching.hpp"
#include "maxmin/random.hpp"

namespace maxmin {

struct AdversaryResult {
  Permutation sigma;
  int size = 0;
  bool exact = false;
  std::uint64_t nodes_expanded = 0;
};

inline constexpr std::uint64_t kDefaultExactBudget = 10'000'000;
inline constexpr int kMaxExactN = 32;

namespace detail {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// Bitmask view of the arrival game for a fixed pi.
///
/// A state is (retired U, matched V). Every unretired u whose neighbors are
/// all matched can never match again, so it is equivalent to a retired one;
/// we only ever play "alive" vertices (unretired with an unmatched neighbor),
/// and each such move matches exactly one pair. The future of the process
/// depends only on which U-vertices are still alive and on the matched V set,
/// so (retired, matched) is a sufficient memo key. Two alive vertices with the
/// same residual neighborhood (adj & ~matched) are interchangeable, so only
/// one of them needs to be tried.
class ArrivalGame {
 public:
  ArrivalGame(const BipartiteGraph& g, const Permutation& pi) : n_(g.n()) {
    if (n_ > kMaxExactN) throw InvalidInput("bitmask search supports n <= 32");
    if (pi.size() != n_) throw DimensionMismatch("pi size differs from n");
    adj_.assign(n_, 0);
    by_rank_.assign(n_, {});
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v : g.neighbors_of_u(u)) adj_[u] |= Mask{1} << v;
      auto& row = by_rank_[u];
      row.assign(g.neighbors_of_u(u).begin(), g.neighbors_of_u(u).end());
      std::sort(row.begin(), row.end(), [&](Vertex a, Vertex b) { return pi.rank_of(a) < pi.rank_of(b); });
    }
  }

  int n() const { return n_; }
  Mask adjacency(Vertex u) const { return adj_[u]; }
  Mask residual(Vertex u, Mask matched) const { return adj_[u] & ~matched; }

  /// v taken by u when it arrives with `matched` already taken; requires u alive.
  Vertex response(Vertex u, Mask matched) const {
    for (Vertex v : by_rank_[u]) {
      if (!(matched >> v & 1)) return v;
    }
    return kUnmatched;
  }

  /// Alive vertices, one representative per distinct residual neighborhood.
  std::vector<Vertex> moves(Mask retired, Mask matched) const {
    std::vector<Vertex> out;
    std::vector<Mask> seen;
    for (Vertex u = 0; u < n_; ++u) {
      if (retired >> u & 1) continue;
      const Mask r = residual(u, matched);
      if (r == 0) continue;
      if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
      seen.push_back(r);
      out.push_back(u);
    }
    return out;
  }

  /// Maximum matching size between alive U and unmatched V.
  int residual_matching(Mask retired, Mask matched) const {
    std::vector<int> owner(n_, -1);
    int size = 0;
    for (Vertex u = 0; u < n_; ++u) {
      if (retired >> u & 1 || residual(u, matched) == 0) continue;
      Mask visited = 0;
      if (augment(u, matched, visited, owner)) ++size;
    }
    return size;
  }

  static std::uint64_t key(Mask retired, Mask matched) {
    return (static_cast<std::uint64_t>(retired) << 32) | matched;
  }

  /// Completes a play sequence into a full sigma (unplayed vertices appended ascending).
  Permutation complete(const std::vector<Vertex>& played) const {
    std::vector<Vertex> order = played;
    Mask used = 0;
    for (Vertex u : played) used |= Mask{1} << u;
    for (Vertex u = 0; u < n_; ++u) {
      if (!(used >> u & 1)) order.push_back(u);
    }
    return Permutation(std::move(order));
  }

 private:
  bool augment(Vertex u, Mask matched, Mask& visited, std::vector<int>& owner) const {
    Mask free = adj_[u] & ~matched & ~visited;
    while (free) {
      const int v = __builtin_ctz(free);
      free &= free - 1;
      visited |= Mask{1} << v;
      if (owner[v] == -1 || augment(owner[v], matched, visited, owner)) {
        owner[v] = u;
        return true;
      }
    }
    return false;
  }

  int n_;
  std::vector<Mask> adj_;
  std::vector<std::vector<Vertex>> by_rank_;
};

struct BudgetExhausted {};

/// Fail-soft minimization with memo. search(state, beta) returns the exact
/// number of future matches when it is < beta, otherwise some lower bound >= beta.
class ExactSearch {
 public:
  ExactSearch(const ArrivalGame& game, std::uint64_t budget) : game_(game), budget_(budget) {}

  int search(Mask retired, Mask matched, int beta) {
    const auto k = ArrivalGame::key(retired, matched);
    if (const auto it = memo_.find(k); it != memo_.end()) {
      if (it->second.exact || it->second.value >= beta) return it->second.value;
    }
    const auto moves = game_.moves(retired, matched);
    if (moves.empty()) {
      record_leaf();
      memo_[k] = {0, true};
      return 0;
    }
    if (++nodes_ > budget_) throw BudgetExhausted{};
    const int lower = std::max(1, (game_.residual_matching(retired, matched) + 1) / 2);
    if (lower >= beta) {
      store(k, lower, false);
      return lower;
    }
    int best = std::numeric_limits<int>::max();
    int fail_low = std::numeric_limits<int>::max();
    for (Vertex u : moves) {
      const Vertex v = game_.response(u, matched);
      const int bound = std::min(best, beta) - 1;
      path_.push_back(u);
      const int r = 1 + search(retired | Mask{1} << u, matched | Mask{1} << v, bound);
      path_.pop_back();
      if (r < std::min(best, beta)) {
        best = r;
        if (best <= lower) break;
      } else {
        fail_low = std::min(fail_low, r);
      }
    }
    if (best < beta) {
      store(k, best, true);
      return best;
    }
    store(k, fail_low, false);
    return fail_low;
  }

  /// Replays an optimal line from a state whose exact value is `value`.
  std::vector<Vertex> principal_line(Mask retired, Mask matched, int value) {
    std::vector<Vertex> line;
    while (value > 0) {
      bool stepped = false;
      for (Vertex u : game_.moves(retired, matched)) {
        const Vertex v = game_.response(u, matched);
        const Mask r2 = retired | Mask{1} << u;
        const Mask m2 = matched | Mask{1} << v;
        if (search(r2, m2, value) == value - 1) {
          line.push_back(u);
          retired = r2;
          matched = m2;
          --value;
          stepped = true;
          break;
        }
      }
      if (!stepped) throw InvariantViolation("exact search could not replay its optimum");
    }
    return line;
  }

  std::uint64_t nodes() const { return nodes_; }
  const std::vector<Vertex>& best_leaf_line() const { return best_leaf_; }
  int best_leaf_value() const { return best_leaf_value_; }

 private:
  struct Entry {
    int value;
    bool exact;
  };

  void store(std::uint64_t k, int value, bool exact) {
    auto& e = memo_[k];
    if (!e.exact) e = {value, exact};
  }

  void record_leaf() {
    const int depth = static_cast<int>(path_.size());
    if (depth < best_leaf_value_) {
      best_leaf_value_ = depth;
      best_leaf_ = path_;
    }
  }

  const ArrivalGame& game_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::unordered_map<std::uint64_t, Entry> memo_;
  std::vector<Vertex> path_;
  std::vector<Vertex> best_leaf_;
  int best_leaf_value_ = std::numeric_limits<int>::max();
};

}  // namespace detail

AdversaryResult worst_order_heuristic(const BipartiteGraph& g, const Permutation& pi, int iters,
                                      std::uint64_t seed);

/// min over sigma of |M_G[sigma, pi]| by exhaustive memoized search (n <= 32).
/// When the node budget runs out, the best order seen so far is returned with
/// exact = false.
inline AdversaryResult worst_order_exact(const BipartiteGraph& g, const Permutation& pi,
                                         std::uint64_t budget = kDefaultExactBudget) {
  if (pi.size() != g.n()) throw DimensionMismatch("pi size differs from n");
  if (g.n() > kMaxExactN) {
    auto fallback = worst_order_heuristic(g, pi, 2000, 0);
    fallback.exact = false;
    return fallback;
  }
  const detail::ArrivalGame game(g, pi);
  detail::ExactSearch search(game, budget);
  AdversaryResult out;
  try {
    const int value = search.search(0, 0, g.n() + 1);
    out.sigma = game.complete(search.principal_line(0, 0, value));
    out.exact = true;
  } catch (const detail::BudgetExhausted&) {
    out.sigma = game.complete(search.best_leaf_line());
    out.exact = false;
  }
  out.nodes_expanded = search.nodes();
  out.size = greedy_match(g, out.sigma, pi).size;
  return out;
}

/// Random-restart local search over sigma using adjacent transpositions and
/// block moves; sideways moves are accepted so plateaus get explored. The
/// result is an upper bound on the true minimum.
inline AdversaryResult worst_order_heuristic(const BipartiteGraph& g, const Permutation& pi, int iters,
                                             std::uint64_t seed) {
  const int n = g.n();
  if (pi.size() != n) throw DimensionMismatch("pi size differs from n");
  Rng rng(seed);
  AdversaryResult best;
  best.size = std::numeric_limits<int>::max();
  if (n == 0) {
    best.sigma = Permutation::identity(0);
    best.size = 0;
    return best;
  }
  const int restart_every = std::max(200, 20 * n);
  std::vector<Vertex> current;
  int current_size = 0;
  int since_restart = restart_every;
  // A maximal matching has at least ceil(nu/2) edges, so with a perfect matching
  // nothing below ceil(n/2) exists and the search can stop there.
  const int floor_value = has_perfect_matching(g) ? (n + 1) / 2 : -1;
  for (int it = 0; it < std::max(iters, 1); ++it) {
    if (since_restart >= restart_every) {
      auto p = Permutation::random(n, rng);
      current.assign(p.order().begin(), p.order().end());
      current_size = greedy_match(g, Permutation(current), pi).size;
      since_restart = 0;
    } else {
      std::vector<Vertex> cand = current;
      if (n >= 2) {
        if (uniform_below(rng, 2) == 0) {
          const auto i = uniform_below(rng, n - 1);
          std::swap(cand[i], cand[i + 1]);
        } else {
          const auto from = uniform_below(rng, n);
          const auto to = uniform_below(rng, n);
          const Vertex x = cand[from];
          cand.erase(cand.begin() + static_cast<long>(from));
          cand.insert(cand.begin() + static_cast<long>(to), x);
        }
      }
      const int size = greedy_match(g, Permutation(cand), pi).size;
      if (size <= current_size) {
        if (size < current_size) since_restart = 0;
        current = std::move(cand);
        current_size = size;
      }
      ++since_restart;
    }
    ++best.nodes_expanded;
    if (current_size < best.size) {
      best.size = current_size;
      best.sigma = Permutation(current);
    }
    if (best.size <= floor_value) break;
  }
  best.exact = false;
  return best;
}

/// Every distinct final matched-V set reachable over all sigma, each with a witness sigma.
/// Throws when more than `state_cap` states would be visited.
inline std::map<std::uint32_t, Permutation> enumerate_outcomes(const BipartiteGraph& g, const Permutation& pi,
                                                               std::uint64_t state_cap = 20'000'000) {
  const detail::ArrivalGame game(g, pi);
  std::unordered_set<std::uint64_t> visited;
  std::map<std::uint32_t, Permutation> outcomes;
  std::vector<Vertex> path;
  std::function<void(detail::Mask, detail::Mask)> dfs = [&](detail::Mask retired, detail::Mask matched) {
    if (!visited.insert(detail::ArrivalGame::key(retired, matched)).second) return;
    if (visited.size() > state_cap) throw InvalidInput("outcome enumeration exceeded its state cap");
    const auto moves = game.moves(retired, matched);
    if (moves.empty()) {
      outcomes.try_emplace(matched, game.complete(path));
      return;
    }
    for (Vertex u : moves) {
      const Vertex v = game.response(u, matched);
      path.push_back(u);
      dfs(retired | detail::Mask{1} << u, matched | detail::Mask{1} << v);
      path.pop_back();
    }
  };
  dfs(0, 0);
  return outcomes;
}

// ---------------------------------------------------------------------------
// Constructive adversaries.

namespace detail {

/// sigma that makes the U-vertices in `takers` claim the V-vertices in `prefix`
/// one by one, where `prefix` is a pi-prefix of the V-vertices reachable from
/// `takers`: each taker arrives when its Hall partner is the lowest unmatched
/// vertex it can see. Remaining U follow in ascending index.
inline std::vector<Vertex> claim_in_order(const BipartiteGraph& g, const Permutation& pi,
                                          const std::vector<Vertex>& takers,
                                          const std::vector<Vertex>& targets) {
  Relation rel(static_cast<int>(takers.size()), static_cast<int>(targets.size()));
  std::vector<int> target_index(g.n(), -1);
  for (std::size_t j = 0; j < targets.size(); ++j) target_index[targets[j]] = static_cast<int>(j);
  for (std::size_t i = 0; i < takers.size(); ++i) {
    for (Vertex v : g.neighbors_of_u(takers[i])) {
      if (target_index[v] >= 0) rel.add(static_cast<int>(i), target_index[v]);
    }
  }
  const auto m = hopcroft_karp(rel);
  if (m.size != static_cast<int>(targets.size())) {
    throw InvalidInput("Hall matching onto the target set does not exist");
  }
  std::vector<int> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pi.rank_of(targets[a]) < pi.rank_of(targets[b]); });
  std::vector<Vertex> sigma;
  for (int j : order) sigma.push_back(takers[m.left_of_right[j]]);
  return sigma;
}

inline Permutation append_rest(std::vector<Vertex> sigma, int n) {
  std::vector<char> used(n, 0);
  for (Vertex u : sigma) used[u] = 1;
  for (Vertex u = 0; u < n; ++u) {
    if (!used[u]) sigma.push_back(u);
  }
  return Permutation(std::move(sigma));
}

}  // namespace detail

/// Per copy of G_{d,t}: find the block V_i holding most of the copy's last d
/// vertices under pi (lowest i on ties), then let the two other U-blocks claim
/// the copy's first 2d vertices; U_i arrives last and cannot reach T n V_i.
inline Permutation adversary_regular_gadget(const BipartiteGraph& g, const Permutation& pi, int d, int t) {
  if (!(g == gen_regular89(d, t))) throw InvalidInput("graph is not the regular89 gadget for (d, t)");
  if (pi.size() != g.n()) throw DimensionMismatch("pi size differs from n");
  const int block = d;
  const int copy = 3 * d;
  std::vector<Vertex> head;
  std::vector<Vertex> tail;
  for (int c = 0; c < t; ++c) {
    std::vector<Vertex> copy_v;
    for (int x = 0; x < copy; ++x) copy_v.push_back(c * copy + x);
    std::sort(copy_v.begin(), copy_v.end(), [&](Vertex a, Vertex b) { return pi.rank_of(a) < pi.rank_of(b); });
    std::array<int, 3> in_tail{};
    for (int r = 2 * d; r < copy; ++r) ++in_tail[(copy_v[r] - c * copy) / block];
    const int heavy = static_cast<int>(std::max_element(in_tail.begin(), in_tail.end()) - in_tail.begin());
    std::vector<Vertex> takers;
    for (int b = 0; b < 3; ++b) {
      if (b == heavy) continue;
      for (int x = 0; x < block; ++x) takers.push_back(c * copy + b * block + x);
    }
    const std::vector<Vertex> prefix(copy_v.begin(), copy_v.begin() + 2 * d);
    const auto seq = detail::claim_in_order(g, pi, takers, prefix);
    head.insert(head.end(), seq.begin(), seq.end());
    for (int x = 0; x < block; ++x) tail.push_back(c * copy + heavy * block + x);
  }
  head.insert(head.end(), tail.begin(), tail.end());
  return Permutation(std::move(head));
}

/// Leaves the last `target_size` vertices of pi unmatched on a projective-plane
/// incidence graph: N(V') (padded with the lexicographically first extra
/// U-vertices that keep a Hall matching) claims V \ V' in pi order.
inline Permutation adversary_projective(const BipartiteGraph& g, const Permutation& pi, int target_size) {
  const int n = g.n();
  if (pi.size() != n) throw DimensionMismatch("pi size differs from n");
  if (target_size < 1 || target_size >= n) throw InvalidInput("target_size out of range");
  std::vector<char> in_tail(n, 0);
  for (int r = n - target_size; r < n; ++r) in_tail[pi.at(r)] = 1;
  std::vector<Vertex> prefix;
  for (int r = 0; r < n - target_size; ++r) prefix.push_back(pi.at(r));
  std::vector<char> in_nbhd(n, 0);
  for (int r = n - target_size; r < n; ++r) {
    for (Vertex u : g.neighbors_of_v(pi.at(r))) in_nbhd[u] = 1;
  }
  std::vector<Vertex> takers;
  std::vector<Vertex> spare;
  for (Vertex u = 0; u < n; ++u) (in_nbhd[u] ? takers : spare).push_back(u);
  const int need = n - target_size - static_cast<int>(takers.size());
  if (need < 0) throw InvalidInput("neighborhood of the tail is larger than the prefix");
  // Pad with `need` spare vertices, trying combinations in lexicographic order.
  std::vector<int> pick(need);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    if (need > static_cast<int>(spare.size())) break;
    auto candidate = takers;
    for (int idx : pick) candidate.push_back(spare[idx]);
    try {
      return detail::append_rest(detail::claim_in_order(g, pi, candidate, prefix), n);
    } catch (const InvalidInput&) {
    }
    int i = need - 1;
    while (i >= 0 && pick[i] == static_cast<int>(spare.size()) - need + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  throw InvalidInput("no Hall matching from the tail's neighborhood onto the prefix");
}

/// On biclique_half(n): pair V1-vertices with distinct earlier V2-vertices
/// (scan pi; each V1 vertex takes the lowest still-unpaired V2 vertex seen so
/// far, which keeps the paired V2 vertices in pi order). U1-vertices of paired
/// V1 vertices arrive first, ordered by the pi-rank of their V2 partner, so
/// each one grabs its partner; unpaired U1 follow, then U2.
inline Permutation adversary_biclique(const BipartiteGraph& g, const Permutation& pi) {
  const int n = g.n();
  if (n % 2 != 0 || !(g == gen_biclique_half(n))) throw InvalidInput("graph is not biclique_half(n)");
  if (pi.size() != n) throw DimensionMismatch("pi size differs from n");
  const int h = n / 2;
  std::vector<Vertex> pending_v2;  // in pi order
  std::size_t next_free = 0;
  std::vector<std::pair<int, Vertex>> paired;  // (rank of V2 partner, U1 vertex)
  std::vector<char> is_paired(h, 0);
  for (int r = 0; r < n; ++r) {
    const Vertex v = pi.at(r);
    if (v >= h) {
      pending_v2.push_back(v);
    } else if (next_free < pending_v2.size()) {
      paired.emplace_back(pi.rank_of(pending_v2[next_free++]), v);
      is_paired[v] = 1;
    }
  }
  std::sort(paired.begin(), paired.end());
  std::vector<Vertex> sigma;
  for (const auto& [rank, u] : paired) sigma.push_back(u);
  for (Vertex u = 0; u < h; ++u) {
    if (!is_paired[u]) sigma.push_back(u);
  }
  for (Vertex u = h; u < n; ++u) sigma.push_back(u);
  return Permutation(std::move(sigma));
}

/// On a planted instance: U \ S claims the pi-prefix Q of size n - s (as far
/// as a Hall matching reaches, in pi order); S arrives last and cannot touch
/// T \ Q. Takers the matching misses may still reach T \ Q, so the matching
/// is grown by augmenting from those takers first: coverable taker sets form
/// a matroid, so this covers as many of them as any maximum matching can.
inline Permutation adversary_planted_is(const BipartiteGraph& g, const Permutation& pi, int s) {
  const int n = g.n();
  if (pi.size() != n) throw DimensionMismatch("pi size differs from n");
  if (s < 0 || s > n) throw InvalidInput("planted block size out of range");
  const int q = n - s;
  std::vector<int> prefix_index(n, -1);
  for (int r = 0; r < q; ++r) prefix_index[pi.at(r)] = r;
  std::vector<Vertex> takers;
  std::vector<Vertex> harmless;
  for (Vertex u = s; u < n; ++u) {
    // Once Q is claimed, u would take its lowest-ranked neighbor outside Q.
    Vertex first_outside = kUnmatched;
    for (Vertex v : g.neighbors_of_u(u)) {
      if (prefix_index[v] < 0 && (first_outside == kUnmatched || pi.rank_of(v) < pi.rank_of(first_outside))) {
        first_outside = v;
      }
    }
    (first_outside != kUnmatched && first_outside < s ? takers : harmless).push_back(u);
  }
  takers.insert(takers.end(), harmless.begin(), harmless.end());

  std::vector<int> owner(q, -1);
  std::vector<int> partner(q, -1);
  std::vector<int> seen(q, -1);
  std::function<bool(int, int)> augment = [&](int i, int stamp) {
    for (Vertex v : g.neighbors_of_u(takers[i])) {
      const int r = prefix_index[v];
      if (r < 0 || seen[r] == stamp) continue;
      seen[r] = stamp;
      if (owner[r] < 0 || augment(owner[r], stamp)) {
        owner[r] = i;
        partner[i] = r;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < q; ++i) augment(i, i);

  std::vector<Vertex> sigma;
  for (int r = 0; r < q; ++r) {
    if (owner[r] >= 0) sigma.push_back(takers[owner[r]]);
  }
  for (int i = 0; i < q; ++i) {
    if (partner[i] < 0) sigma.push_back(takers[i]);
  }
  for (Vertex u = 0; u < s; ++u) sigma.push_back(u);
  return Permutation(std::move(sigma));
}

}  // namespace maxmin
