#pragma once

// Greedy matching engine, maximum-matching utilities, and the checks built on
// top of them (maximality, stability, prefix bound, adaptive items player).

#include <functional>
#include <optional>
#include <queue>
#include <utility>

#include "maxmin/graph.hpp"

namespace maxmin {

/// U arrives in sigma order; each u takes its lowest-pi-rank unmatched neighbor.
inline GreedyOutcome greedy_match(const BipartiteGraph& g, const Permutation& sigma,
                                  const Permutation& pi) {
  const int n = g.n();
  if (sigma.size() != n || pi.size() != n) {
    throw DimensionMismatch("permutation sizes (" + std::to_string(sigma.size()) + ", " +
                            std::to_string(pi.size()) + ") do not match n=" + std::to_string(n));
  }
  GreedyOutcome out;
  out.matched_v_of_u.assign(n, kUnmatched);
  out.matched_u_of_v.assign(n, kUnmatched);
  for (int r = 0; r < n; ++r) {
    const Vertex u = sigma.at(r);
    Vertex best = kUnmatched;
    int best_rank = n;
    for (Vertex v : g.neighbors_of_u(u)) {
      if (out.matched_u_of_v[v] == kUnmatched && pi.rank_of(v) < best_rank) {
        best = v;
        best_rank = pi.rank_of(v);
      }
    }
    if (best != kUnmatched) {
      out.matched_v_of_u[u] = best;
      out.matched_u_of_v[best] = u;
      ++out.size;
    }
  }
  return out;
}

/// True when no edge has both endpoints unmatched.
inline bool is_maximal_matching(const BipartiteGraph& g, const GreedyOutcome& m) {
  for (const auto& e : g.edges()) {
    if (!m.u_matched(e.u) && !m.v_matched(e.v)) return false;
  }
  return true;
}

/// An edge (u, v) not in the matching where u prefers v (lower pi-rank than its
/// partner, or u unmatched) and v prefers u (lower sigma-rank, or v unmatched).
inline std::optional<Edge> find_blocking_pair(const BipartiteGraph& g, const GreedyOutcome& m,
                                              const Permutation& sigma, const Permutation& pi) {
  for (const auto& [u, v] : g.edges()) {
    if (m.matched_v_of_u[u] == v) continue;
    const Vertex mu = m.matched_v_of_u[u];
    const Vertex mv = m.matched_u_of_v[v];
    const bool u_prefers = mu == kUnmatched || pi.rank_of(v) < pi.rank_of(mu);
    const bool v_prefers = mv == kUnmatched || sigma.rank_of(u) < sigma.rank_of(mv);
    if (u_prefers && v_prefers) return Edge{u, v};
  }
  return std::nullopt;
}

/// Bipartite relation between [0, left_size) and [0, right_size).
struct Relation {
  int left_size = 0;
  int right_size = 0;
  std::vector<std::vector<int>> adj;  // adj[left] = right neighbors

  explicit Relation(int left = 0, int right = 0) : left_size(left), right_size(right), adj(left) {}
  void add(int l, int r) { adj.at(l).push_back(r); }
};

struct MatchingArrays {
  std::vector<int> right_of_left;  // -1 if unmatched
  std::vector<int> left_of_right;
  int size = 0;
};

/// Hopcroft-Karp maximum matching.
inline MatchingArrays hopcroft_karp(const Relation& rel) {
  const int nl = rel.left_size;
  const int nr = rel.right_size;
  MatchingArrays m;
  m.right_of_left.assign(nl, -1);
  m.left_of_right.assign(nr, -1);
  constexpr int kInf = 1 << 30;
  std::vector<int> dist(nl);
  std::vector<std::size_t> it(nl);

  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int l = 0; l < nl; ++l) {
      if (m.right_of_left[l] == -1) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = kInf;
      }
    }
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (int r : rel.adj[l]) {
        const int next = m.left_of_right[r];
        if (next == -1) {
          found = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[l] + 1;
          q.push(next);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the BFS layering.
  auto dfs = [&](int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int l = stack.back();
      bool advanced = false;
      while (it[l] < rel.adj[l].size()) {
        const int r = rel.adj[l][it[l]];
        const int next = m.left_of_right[r];
        if (next == -1) {
          // Augment along the stack.
          int cur_r = r;
          for (auto s = stack.rbegin(); s != stack.rend(); ++s) {
            const int prev_r = m.right_of_left[*s];
            m.right_of_left[*s] = cur_r;
            m.left_of_right[cur_r] = *s;
            cur_r = prev_r;
          }
          return true;
        }
        if (dist[next] == dist[l] + 1) {
          stack.push_back(next);
          advanced = true;
          break;
        }
        ++it[l];
      }
      if (!advanced) {
        dist[l] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[stack.back()];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int l = 0; l < nl; ++l) {
      if (m.right_of_left[l] == -1 && dfs(l)) ++m.size;
    }
  }
  return m;
}

/// Maximum-cardinality matching of a relation, as (left, right) pairs in left order.
inline std::vector<std::pair<int, int>> max_matching(const Relation& rel) {
  const auto m = hopcroft_karp(rel);
  std::vector<std::pair<int, int>> out;
  for (int l = 0; l < rel.left_size; ++l) {
    if (m.right_of_left[l] != -1) out.emplace_back(l, m.right_of_left[l]);
  }
  return out;
}

inline Relation relation_of(const BipartiteGraph& g) {
  Relation rel(g.n(), g.n());
  for (Vertex u = 0; u < g.n(); ++u) {
    for (Vertex v : g.neighbors_of_u(u)) rel.add(u, v);
  }
  return rel;
}

inline PerfectMatching find_perfect_matching(const BipartiteGraph& g) {
  const auto m = hopcroft_karp(relation_of(g));
  if (m.size != g.n()) {
    throw NoPerfectMatching("graph has maximum matching " + std::to_string(m.size) + " < n=" +
                            std::to_string(g.n()));
  }
  return PerfectMatching{m.right_of_left, m.left_of_right};
}

inline bool has_perfect_matching(const BipartiteGraph& g) {
  return hopcroft_karp(relation_of(g)).size == g.n();
}

struct PrefixStats {
  int k = 0;
  int ell = 0;                // prefix V-vertices matched outside U_[k]
  int matched_in_prefix = 0;  // prefix V-vertices matched at all
};

/// Evaluates the prefix-matching inequality matched >= ell + (k - ell)/2 on one run.
inline PrefixStats check_prefix_bound(const BipartiteGraph& g, const PerfectMatching& m,
                                      const Permutation& pi, const Permutation& sigma, int k) {
  const int n = g.n();
  if (k < 0 || k > n) throw InvalidInput("prefix length out of range");
  if (m.size() != n) throw DimensionMismatch("matching size differs from graph size");
  const auto outcome = greedy_match(g, sigma, pi);
  std::vector<char> in_prefix_u(n, 0);
  for (int r = 0; r < k; ++r) in_prefix_u[m.u_of_v[pi.at(r)]] = 1;
  PrefixStats stats{k, 0, 0};
  for (int r = 0; r < k; ++r) {
    const Vertex v = pi.at(r);
    const Vertex u = outcome.matched_u_of_v[v];
    if (u == kUnmatched) continue;
    ++stats.matched_in_prefix;
    if (!in_prefix_u[u]) ++stats.ell;
  }
  if (2 * stats.matched_in_prefix < stats.k + stats.ell) {
    throw PropositionViolated("prefix bound violated at k=" + std::to_string(k));
  }
  return stats;
}

/// Chooses which interested buyer (a U-vertex) takes the offered item (a V-vertex).
using BuyerStrategy = std::function<Vertex(Vertex item, std::span<const Vertex> interested)>;

/// Adaptive items player: repeatedly offers an item from a minimal tight set of
/// the remaining items. Always ends with a perfect matching.
///
/// With a perfect matching P of the residual graph, the smallest tight set
/// containing item x is the set of items reachable from x by alternating
/// paths (x -> interested buyer b -> P(b) -> ...). Minimal tight sets are
/// exactly the inclusion-minimal such closures; we take a smallest one, ties
/// broken by smallest member, and offer its smallest item.
inline GreedyOutcome adaptive_items_player(const BipartiteGraph& g, const BuyerStrategy& strategy) {
  const int n = g.n();
  find_perfect_matching(g);
  GreedyOutcome out;
  out.matched_v_of_u.assign(n, kUnmatched);
  out.matched_u_of_v.assign(n, kUnmatched);

  for (int step = 0; step < n; ++step) {
    // Residual perfect matching between remaining buyers and items.
    Relation rel(n, n);
    for (Vertex u = 0; u < n; ++u) {
      if (out.u_matched(u)) continue;
      for (Vertex v : g.neighbors_of_u(u)) {
        if (!out.v_matched(v)) rel.add(u, v);
      }
    }
    const auto pm = hopcroft_karp(rel);
    if (pm.size != n - step) throw InvariantViolation("residual graph lost its perfect matching");

    std::vector<Vertex> best_set;
    for (Vertex x = 0; x < n; ++x) {
      if (out.v_matched(x)) continue;
      std::vector<char> seen(n, 0);
      std::vector<Vertex> closure{x};
      seen[x] = 1;
      for (std::size_t i = 0; i < closure.size(); ++i) {
        for (Vertex b : g.neighbors_of_v(closure[i])) {
          if (out.u_matched(b)) continue;
          const Vertex y = pm.right_of_left[b];
          if (!seen[y]) {
            seen[y] = 1;
            closure.push_back(y);
          }
        }
      }
      std::sort(closure.begin(), closure.end());
      if (best_set.empty() || closure.size() < best_set.size() ||
          (closure.size() == best_set.size() && closure < best_set)) {
        best_set = std::move(closure);
      }
    }

    const Vertex item = best_set.front();
    std::vector<Vertex> interested;
    for (Vertex b : g.neighbors_of_v(item)) {
      if (!out.u_matched(b)) interested.push_back(b);
    }
    const Vertex buyer = strategy(item, interested);
    if (std::find(interested.begin(), interested.end(), buyer) == interested.end()) {
      throw InvalidInput("buyer strategy chose a buyer not interested in item " +
                         std::to_string(item));
    }
    out.matched_v_of_u[buyer] = item;
    out.matched_u_of_v[item] = buyer;
    ++out.size;
  }
  return out;
}

}  // namespace maxmin
