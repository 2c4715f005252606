#pragma once

// Graph families. Deterministic families are exact constructions; the random
// ones are fully determined by (parameters, seed).
//
// Vertex layouts (the constructive adversaries rely on them):
//   regular89(d, t)   copy c, block b in {0,1,2}, offset x: index c*3d + b*d + x on both sides
//   tight_regular(d)  U\S = V\T = [0, d), S = T = [d, 2d-1)
//   biclique_half(n)  U1 = V1 = [0, n/2), U2 = V2 = [n/2, n)
//   planted_is        S = U[0, s), T = V[0, s) with s = floor((1 - eps) n / 2)
//   badset_chain      copy c occupies [4c, 4c + 4) on both sides

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "maxmin/matching.hpp"
#include "maxmin/random.hpp"

namespace maxmin {

class ParameterError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The cycle gadget u1:{v1,v2}, u2:{v2,v3}, u3:{v3,v1} (0-indexed).
inline BipartiteGraph gen_fig1() {
  return BipartiteGraph(3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}});
}

/// t disjoint copies of the 2d-regular three-block gadget: U_i complete to V_j iff i != j.
inline BipartiteGraph gen_regular89(int d, int t) {
  if (d < 1 || t < 1) throw ParameterError("regular89 needs d >= 1 and t >= 1");
  std::vector<Edge> edges;
  for (int c = 0; c < t; ++c) {
    const int base = c * 3 * d;
    for (int bu = 0; bu < 3; ++bu) {
      for (int bv = 0; bv < 3; ++bv) {
        if (bu == bv) continue;
        for (int x = 0; x < d; ++x) {
          for (int y = 0; y < d; ++y) edges.push_back({base + bu * d + x, base + bv * d + y});
        }
      }
    }
  }
  return BipartiteGraph(3 * d * t, std::move(edges));
}

/// d-regular graph on n = 2d-1 per side whose private matching U\S <-> V\T is maximal.
inline BipartiteGraph gen_tight_regular(int d) {
  if (d < 1) throw ParameterError("tight_regular needs d >= 1");
  const int n = 2 * d - 1;
  std::vector<Edge> edges;
  for (int i = 0; i < d; ++i) {
    edges.push_back({i, i});
    for (int t = d; t < n; ++t) edges.push_back({i, t});  // U\S complete to T
  }
  for (int s = d; s < n; ++s) {
    for (int v = 0; v < d; ++v) edges.push_back({s, v});  // S complete to V\T
  }
  return BipartiteGraph(n, std::move(edges));
}

/// Point-line incidence of the Fano plane: U = points 1..7, V = lines.
inline BipartiteGraph gen_fano() {
  constexpr std::array<std::array<int, 3>, 7> kLines{{
      {1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}}};
  std::vector<Edge> edges;
  for (int line = 0; line < 7; ++line) {
    for (int point : kLines[line]) edges.push_back({point - 1, line});
  }
  return BipartiteGraph(7, std::move(edges));
}

/// Point-line incidence of PG(2,3). Points and lines are the normalized nonzero
/// vectors of F_3^3 (first nonzero coordinate 1) in lexicographic order; a
/// point lies on a line when their dot product vanishes mod 3.
inline BipartiteGraph gen_pg23() {
  std::vector<std::array<int, 3>> vecs;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        const std::array<int, 3> x{a, b, c};
        const auto lead = std::find_if(x.begin(), x.end(), [](int y) { return y != 0; });
        if (lead != x.end() && *lead == 1) vecs.push_back(x);
      }
    }
  }
  std::vector<Edge> edges;
  const int n = static_cast<int>(vecs.size());
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const int dot = vecs[u][0] * vecs[v][0] + vecs[u][1] * vecs[v][1] + vecs[u][2] * vecs[v][2];
      if (dot % 3 == 0) edges.push_back({u, v});
    }
  }
  return BipartiteGraph(n, std::move(edges));
}

/// U1-V1 and U2-V2 perfect matchings plus a bi-clique U1 x V2.
inline BipartiteGraph gen_biclique_half(int n) {
  if (n <= 0 || n % 2 != 0) throw ParameterError("biclique_half needs an even n > 0");
  const int h = n / 2;
  std::vector<Edge> edges;
  for (int j = 0; j < h; ++j) {
    edges.push_back({j, j});
    edges.push_back({h + j, h + j});
    for (int k = 0; k < h; ++k) edges.push_back({j, h + k});
  }
  return BipartiteGraph(n, std::move(edges));
}

/// The 4x4 gadget whose size-2 bad sets are exactly {v1,v2} and {v1,v3}
/// (0-indexed {v0,v1}, {v0,v2}). Found by exhaustive search over all 4x4
/// bipartite graphs; the check is kept in the test suite and rerun by
/// gen_badset_chain.
inline std::vector<Edge> badset_gadget_edges() {
  return {{0, 1}, {0, 3}, {1, 0}, {1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}};
}

namespace detail {

/// All unmatched-V masks reachable over every (pi, sigma) on a 4-vertex graph.
inline bool badset_gadget_self_check() {
  const BipartiteGraph g(4, badset_gadget_edges());
  if (!has_perfect_matching(g)) return false;
  std::vector<Vertex> pi_order{0, 1, 2, 3};
  std::vector<int> pairs;  // bad pairs as 4*a + b
  do {
    const Permutation pi(pi_order);
    std::vector<Vertex> sigma_order{0, 1, 2, 3};
    do {
      const auto out = greedy_match(g, Permutation(sigma_order), pi);
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          if (!out.v_matched(a) && !out.v_matched(b)) pairs.push_back(4 * a + b);
        }
      }
    } while (std::next_permutation(sigma_order.begin(), sigma_order.end()));
  } while (std::next_permutation(pi_order.begin(), pi_order.end()));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs == std::vector<int>{4 * 0 + 1, 4 * 0 + 2};
}

}  // namespace detail

inline BipartiteGraph gen_badset_chain(int copies) {
  if (copies < 1) throw ParameterError("badset_chain needs copies >= 1");
  static const bool verified = detail::badset_gadget_self_check();
  if (!verified) throw InvariantViolation("bad-set gadget failed its self-check");
  std::vector<Edge> edges;
  for (int c = 0; c < copies; ++c) {
    for (const auto& e : badset_gadget_edges()) edges.push_back({4 * c + e.u, 4 * c + e.v});
  }
  return BipartiteGraph(4 * copies, std::move(edges));
}

/// G_0 is a single edge; G_i is two copies of G_{i-1} plus (u_j of copy 1, v_j of copy 2).
inline BipartiteGraph gen_iterative(int i) {
  if (i < 0) throw ParameterError("iterative needs i >= 0");
  if (i > 20) throw ParameterError("iterative depth too large");
  std::vector<Edge> edges{{0, 0}};
  int n = 1;
  for (int level = 1; level <= i; ++level) {
    std::vector<Edge> next = edges;
    for (const auto& e : edges) next.push_back({e.u + n, e.v + n});
    for (int j = 0; j < n; ++j) next.push_back({j, j + n});
    edges = std::move(next);
    n *= 2;
  }
  return BipartiteGraph(n, std::move(edges));
}

/// The 2n-cycle v_0,u_0,v_1,u_1,... (edges (u_i,v_i), (u_i,v_{i+1})) plus
/// `extra_edges` distinct chords drawn uniformly from the non-edges.
inline BipartiteGraph gen_hamiltonian_random(int n, int extra_edges, std::uint64_t seed) {
  if (n < 1 || extra_edges < 0) throw ParameterError("hamiltonian_random needs n >= 1, extra_edges >= 0");
  std::vector<char> present(static_cast<std::size_t>(n) * n, 0);
  std::vector<Edge> edges;
  auto add = [&](int u, int v) {
    auto& cell = present[static_cast<std::size_t>(u) * n + v];
    if (!cell) {
      cell = 1;
      edges.push_back({u, v});
    }
  };
  for (int i = 0; i < n; ++i) {
    add(i, i);
    add(i, (i + 1) % n);
  }
  std::vector<Edge> candidates;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (!present[static_cast<std::size_t>(u) * n + v]) candidates.push_back({u, v});
    }
  }
  if (extra_edges > static_cast<int>(candidates.size())) {
    throw ParameterError("hamiltonian_random: only " + std::to_string(candidates.size()) +
                         " non-edges available");
  }
  Rng rng(seed);
  shuffle(std::span<Edge>(candidates), rng);
  for (int c = 0; c < extra_edges; ++c) add(candidates[c].u, candidates[c].v);
  return BipartiteGraph(n, std::move(edges));
}

namespace detail {

/// Perfect matching of the allowed relation by augmenting paths over shuffled
/// vertex and neighbor orders. Used when swap repair stalls.
inline std::vector<int> random_augmenting_bijection(int n, Rng& rng, const std::function<bool(int, int)>& allowed) {
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (allowed(u, v)) adj[u].push_back(v);
    }
    shuffle(std::span<int>(adj[u]), rng);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(std::span<int>(order), rng);
  std::vector<int> u_of_v(n, -1);
  std::vector<int> seen(n, -1);
  std::function<bool(int, int)> augment = [&](int u, int stamp) {
    for (int v : adj[u]) {
      if (seen[v] == stamp) continue;
      seen[v] = stamp;
      if (u_of_v[v] < 0 || augment(u_of_v[v], stamp)) {
        u_of_v[v] = u;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    if (!augment(order[i], i)) throw ParameterError("no perfect matching left among the allowed pairs");
  }
  std::vector<int> v_of_u(n);
  for (int v = 0; v < n; ++v) v_of_u[u_of_v[v]] = v;
  return v_of_u;
}

/// Random bijection u -> v with allowed(u, v) for all u: a uniform permutation
/// repaired by random swaps. A swap is only taken when both new pairs are
/// allowed, so repaired positions never break again. Swap repair can stall
/// when few pairs are allowed; past `budget` attempts it hands over to
/// random_augmenting_bijection.
inline std::vector<int> sample_allowed_bijection(int n, Rng& rng,
                                                 const std::function<bool(int, int)>& allowed,
                                                 long long budget) {
  std::vector<int> v_of_u(n);
  std::iota(v_of_u.begin(), v_of_u.end(), 0);
  shuffle(std::span<int>(v_of_u), rng);
  long long attempts = 0;
  for (int u = 0; u < n; ++u) {
    while (!allowed(u, v_of_u[u])) {
      if (++attempts > budget) return random_augmenting_bijection(n, rng, allowed);
      const int w = static_cast<int>(uniform_below(rng, n));
      if (w != u && allowed(u, v_of_u[w]) && allowed(w, v_of_u[u])) std::swap(v_of_u[u], v_of_u[w]);
    }
  }
  return v_of_u;
}

/// Union of d edge-disjoint random perfect matchings avoiding `forbidden`.
inline BipartiteGraph matching_union(int n, int d, Rng& rng,
                                     const std::function<bool(int, int)>& forbidden) {
  std::vector<char> used(static_cast<std::size_t>(n) * n, 0);
  std::vector<Edge> edges;
  const long long budget = 200LL * n * std::max(d, 1) + 1000;
  for (int round = 0; round < d; ++round) {
    const auto v_of_u = sample_allowed_bijection(
        n, rng,
        [&](int u, int v) { return !used[static_cast<std::size_t>(u) * n + v] && !forbidden(u, v); },
        budget);
    for (int u = 0; u < n; ++u) {
      used[static_cast<std::size_t>(u) * n + v_of_u[u]] = 1;
      edges.push_back({u, v_of_u[u]});
    }
  }
  return BipartiteGraph(n, std::move(edges));
}

}  // namespace detail

/// d-regular: union of d disjoint random perfect matchings.
inline BipartiteGraph gen_random_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1 || d > n) throw ParameterError("random_regular needs 1 <= d <= n");
  Rng rng(seed);
  return detail::matching_union(n, d, rng, [](int, int) { return false; });
}

struct PlantedInstance {
  BipartiteGraph graph;
  int s = 0;  // |S| = |T|
  int min_degree = 0;
  int max_degree = 0;
};

inline int planted_block_size(int n, double eps) {
  return static_cast<int>(std::floor((1.0 - eps) * n / 2.0 + 1e-9));
}

/// Near-d-regular graph with no edges between S = U[0,s) and T = V[0,s).
inline PlantedInstance gen_planted_is(int n, int d, double eps, std::uint64_t seed) {
  if (n < 2 || d < 1) throw ParameterError("planted_is needs n >= 2 and d >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw ParameterError("planted_is needs 0 <= eps < 1");
  const int s = planted_block_size(n, eps);
  if (s < 1) throw ParameterError("planted_is: independent set is empty");
  if (d > n - s) {
    throw ParameterError("planted_is: d=" + std::to_string(d) + " exceeds the " +
                         std::to_string(n - s) + " vertices available outside the planted set");
  }
  Rng rng(seed);
  PlantedInstance out;
  out.s = s;
  out.graph = detail::matching_union(n, d, rng, [s](int u, int v) { return u < s && v < s; });
  out.min_degree = n;
  out.max_degree = 0;
  for (int x = 0; x < n; ++x) {
    for (int deg : {out.graph.degree_u(x), out.graph.degree_v(x)}) {
      out.min_degree = std::min(out.min_degree, deg);
      out.max_degree = std::max(out.max_degree, deg);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class Family {
  kFig1,
  kBadsetChain,
  kRegular89,
  kTightRegular,
  kFano,
  kPg23,
  kHamiltonianRandom,
  kRandomRegular,
  kBicliqueHalf,
  kPlantedIs,
  kIterative,
};

inline constexpr std::array<std::pair<Family, const char*>, 11> kFamilyNames{{
    {Family::kFig1, "fig1"},
    {Family::kBadsetChain, "badset_chain"},
    {Family::kRegular89, "regular89"},
    {Family::kTightRegular, "tight_regular"},
    {Family::kFano, "fano"},
    {Family::kPg23, "pg23"},
    {Family::kHamiltonianRandom, "hamiltonian_random"},
    {Family::kRandomRegular, "random_regular"},
    {Family::kBicliqueHalf, "biclique_half"},
    {Family::kPlantedIs, "planted_is"},
    {Family::kIterative, "iterative"},
}};

inline std::string family_name(Family f) {
  for (const auto& [family, name] : kFamilyNames) {
    if (family == f) return name;
  }
  return "unknown";
}

inline Family parse_family(const std::string& name) {
  for (const auto& [family, text] : kFamilyNames) {
    if (name == text) return family;
  }
  throw ParameterError("unknown family '" + name + "'");
}

struct FamilyParams {
  int n = 0;
  int d = 0;
  int t = 1;
  int i = 0;
  int extra_edges = 0;
  int copies = 1;
  double eps = 0.1;
};

struct FamilySpec {
  Family family = Family::kFig1;
  FamilyParams params;
  std::uint64_t seed = 0;
};

inline BipartiteGraph generate(const FamilySpec& spec) {
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::kFig1: return gen_fig1();
    case Family::kBadsetChain: return gen_badset_chain(p.copies);
    case Family::kRegular89: return gen_regular89(p.d, p.t);
    case Family::kTightRegular: return gen_tight_regular(p.d);
    case Family::kFano: return gen_fano();
    case Family::kPg23: return gen_pg23();
    case Family::kHamiltonianRandom: return gen_hamiltonian_random(p.n, p.extra_edges, spec.seed);
    case Family::kRandomRegular: return gen_random_regular(p.n, p.d, spec.seed);
    case Family::kBicliqueHalf: return gen_biclique_half(p.n);
    case Family::kPlantedIs: return gen_planted_is(p.n, p.d, p.eps, spec.seed).graph;
    case Family::kIterative: return gen_iterative(p.i);
  }
  throw ParameterError("unknown family");
}

}  // namespace maxmin
