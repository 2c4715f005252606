#pragma once

// Core value types: bipartite graphs, permutations, matchings.
//
// Vertices on both sides are 0-indexed. A Permutation lists vertices from
// rank 0 (first / "lowest") to rank n-1.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxmin/random.hpp"

namespace maxmin {

using Vertex = int;
inline constexpr Vertex kUnmatched = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad indices, duplicates, wrong sizes).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The instance violates the standing assumption that G has a perfect matching.
class NoPerfectMatching : public Error {
 public:
  using Error::Error;
};

/// A proven property failed to hold; always an implementation bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A proposition that always holds was observed to fail.
class PropositionViolated : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Builds the graph; edges may arrive in any order but must be distinct and in range.
  BipartiteGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw InvalidInput("graph size must be non-negative");
    std::sort(edges.begin(), edges.end());
    adj_u_.assign(n, {});
    adj_v_.assign(n, {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto [u, v] = edges[i];
      if (u < 0 || u >= n || v < 0 || v >= n) {
        throw InvalidInput("edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") out of range for n=" + std::to_string(n));
      }
      if (i > 0 && edges[i - 1] == edges[i]) {
        throw InvalidInput("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      adj_u_[u].push_back(v);
      adj_v_[v].push_back(u);
    }
    edge_count_ = edges.size();
  }

  int n() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const Vertex> neighbors_of_u(Vertex u) const { return adj_u_.at(u); }
  std::span<const Vertex> neighbors_of_v(Vertex v) const { return adj_v_.at(v); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& row = adj_u_.at(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  /// Edge list in lexicographic (u, v) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v : adj_u_[u]) out.push_back({u, v});
    }
    return out;
  }

  int degree_u(Vertex u) const { return static_cast<int>(adj_u_.at(u).size()); }
  int degree_v(Vertex v) const { return static_cast<int>(adj_v_.at(v).size()); }

  /// d if every vertex on both sides has degree d, otherwise -1.
  int regular_degree() const {
    if (n_ == 0) return 0;
    const int d = degree_u(0);
    for (Vertex x = 0; x < n_; ++x) {
      if (degree_u(x) != d || degree_v(x) != d) return -1;
    }
    return d;
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.n_ == b.n_ && a.adj_u_ == b.adj_u_;
  }

 private:
  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<Vertex>> adj_u_;
  std::vector<std::vector<Vertex>> adj_v_;
};

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<Vertex> order) : order_(std::move(order)) {
    const int n = static_cast<int>(order_.size());
    rank_.assign(n, -1);
    for (int r = 0; r < n; ++r) {
      const Vertex x = order_[r];
      if (x < 0 || x >= n) {
        throw InvalidInput("permutation entry " + std::to_string(x) + " out of range at rank " +
                           std::to_string(r));
      }
      if (rank_[x] != -1) {
        throw InvalidInput("permutation repeats vertex " + std::to_string(x) + " at rank " +
                           std::to_string(r));
      }
      rank_[x] = r;
    }
  }

  static Permutation identity(int n) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    return Permutation(std::move(order));
  }

  template <class Engine>
  static Permutation random(int n, Engine& rng) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(std::span<Vertex>(order), rng);
    return Permutation(std::move(order));
  }

  int size() const { return static_cast<int>(order_.size()); }
  Vertex at(int r) const { return order_.at(r); }
  int rank_of(Vertex x) const { return rank_.at(x); }
  std::span<const Vertex> order() const { return order_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<Vertex> order_;
  std::vector<int> rank_;
};

struct PerfectMatching {
  std::vector<Vertex> v_of_u;
  std::vector<Vertex> u_of_v;

  int size() const { return static_cast<int>(v_of_u.size()); }
};

struct GreedyOutcome {
  std::vector<Vertex> matched_v_of_u;  // kUnmatched when u is unmatched
  std::vector<Vertex> matched_u_of_v;
  int size = 0;

  bool v_matched(Vertex v) const { return matched_u_of_v.at(v) != kUnmatched; }
  bool u_matched(Vertex u) const { return matched_v_of_u.at(u) != kUnmatched; }
};

/// G with U relabeled so that u_i is matched to v_i; V keeps its labels.
struct AlignedGraph {
  BipartiteGraph graph;
  std::vector<Vertex> original_u;  // original_u[i] = source label of relabeled u_i
  std::vector<Vertex> aligned_u;   // inverse of original_u

  /// Maps a permutation over relabeled U back to source labels.
  Permutation to_original_u(const Permutation& sigma) const {
    std::vector<Vertex> order(sigma.size());
    for (int r = 0; r < sigma.size(); ++r) order[r] = original_u.at(sigma.at(r));
    return Permutation(std::move(order));
  }
  Permutation to_aligned_u(const Permutation& sigma) const {
    std::vector<Vertex> order(sigma.size());
    for (int r = 0; r < sigma.size(); ++r) order[r] = aligned_u.at(sigma.at(r));
    return Permutation(std::move(order));
  }
};

inline AlignedGraph align_to_matching(const BipartiteGraph& g, const PerfectMatching& m) {
  const int n = g.n();
  if (m.size() != n) throw DimensionMismatch("matching size differs from graph size");
  AlignedGraph out;
  out.original_u.assign(n, kUnmatched);
  out.aligned_u.assign(n, kUnmatched);
  for (Vertex u = 0; u < n; ++u) {
    const Vertex v = m.v_of_u[u];
    if (v < 0 || v >= n || !g.has_edge(u, v) || out.original_u[v] != kUnmatched) {
      throw InvalidInput("matching is not a perfect matching of the graph");
    }
    out.original_u[v] = u;
    out.aligned_u[u] = v;
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({out.aligned_u[e.u], e.v});
  out.graph = BipartiteGraph(n, std::move(edges));
  return out;
}

}  // namespace maxmin
