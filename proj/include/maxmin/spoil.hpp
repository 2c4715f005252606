#pragma once

// Spoiling graph and maximal path covers.
//
// For a graph aligned to a perfect matching (u_i matched to v_i), the spoiling
// graph has a vertex w_i per matching edge and an arc (w_i, w_j), i != j,
// whenever (u_i, v_j) is an edge. A path cover is maximal when no merge or
// unbalance applies, even after rotating each of the two involved paths at
// most once.

#include <optional>
#include <string>

#include "maxmin/graph.hpp"

namespace maxmin {

class MissingArc : public Error {
 public:
  using Error::Error;
};

class LengthOrderViolated : public Error {
 public:
  using Error::Error;
};

class SpoilGraph {
 public:
  SpoilGraph() = default;
  SpoilGraph(int n, std::vector<std::vector<int>> arcs) : n_(n), arcs_(std::move(arcs)) {
    if (static_cast<int>(arcs_.size()) != n) throw InvalidInput("arc table size differs from n");
    for (int i = 0; i < n; ++i) {
      auto& row = arcs_[i];
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
        throw InvalidInput("duplicate arc from w" + std::to_string(i));
      }
      for (int j : row) {
        if (j < 0 || j >= n || j == i) throw InvalidInput("invalid arc target from w" + std::to_string(i));
      }
      arc_count_ += row.size();
    }
  }

  int n() const { return n_; }
  std::size_t arc_count() const { return arc_count_; }
  std::span<const int> targets(int i) const { return arcs_.at(i); }
  bool has_arc(int i, int j) const {
    const auto& row = arcs_.at(i);
    return std::binary_search(row.begin(), row.end(), j);
  }

 private:
  int n_ = 0;
  std::size_t arc_count_ = 0;
  std::vector<std::vector<int>> arcs_;
};

/// Requires g aligned so that (u_i, v_i) is an edge for every i.
inline SpoilGraph build_spoiling_graph(const BipartiteGraph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> arcs(n);
  for (Vertex i = 0; i < n; ++i) {
    if (!g.has_edge(i, i)) {
      throw InvalidInput("graph is not aligned to its matching: (u" + std::to_string(i) + ", v" +
                         std::to_string(i) + ") is not an edge");
    }
    for (Vertex j : g.neighbors_of_u(i)) {
      if (j != i) arcs[i].push_back(j);
    }
  }
  return SpoilGraph(n, std::move(arcs));
}

/// Vertex-disjoint directed paths covering W, kept sorted by (length, smallest vertex).
class PathCover {
 public:
  PathCover() = default;
  explicit PathCover(std::vector<std::vector<int>> paths) : paths_(std::move(paths)) { normalize(); }

  static PathCover trivial(int n) {
    std::vector<std::vector<int>> paths(n);
    for (int i = 0; i < n; ++i) paths[i] = {i};
    return PathCover(std::move(paths));
  }

  const std::vector<std::vector<int>>& paths() const { return paths_; }
  const std::vector<int>& path(int j) const { return paths_.at(j); }
  int p() const { return static_cast<int>(paths_.size()); }
  int k() const {
    int k = 0;
    while (k < p() && paths_[k].size() == 1) ++k;
    return k;
  }
  int vertex_count() const {
    int total = 0;
    for (const auto& path : paths_) total += static_cast<int>(path.size());
    return total;
  }

  /// q_1..q_k.
  std::vector<int> isolated() const {
    std::vector<int> q;
    for (int j = 0; j < k(); ++j) q.push_back(paths_[j][0]);
    return q;
  }
  /// s_{k+1}..s_p, in path order.
  std::vector<int> starts() const {
    std::vector<int> s;
    for (int j = k(); j < p(); ++j) s.push_back(paths_[j].front());
    return s;
  }
  /// t_{k+1}..t_p, in path order.
  std::vector<int> ends() const {
    std::vector<int> t;
    for (int j = k(); j < p(); ++j) t.push_back(paths_[j].back());
    return t;
  }
  /// Vertices on length-1 paths.
  std::vector<int> w1() const { return isolated(); }
  /// Vertices on longer paths, path-major in walk order.
  std::vector<int> w2() const {
    std::vector<int> out;
    for (int j = k(); j < p(); ++j) out.insert(out.end(), paths_[j].begin(), paths_[j].end());
    return out;
  }

  long long sum_of_squares() const {
    long long total = 0;
    for (const auto& path : paths_) total += static_cast<long long>(path.size()) * path.size();
    return total;
  }

  /// Throws unless the paths partition [0, n) and follow arcs of spoil.
  void validate(const SpoilGraph& spoil) const {
    const int n = spoil.n();
    std::vector<char> seen(n, 0);
    int total = 0;
    for (const auto& path : paths_) {
      if (path.empty()) throw InvalidInput("path cover contains an empty path");
      for (std::size_t i = 0; i < path.size(); ++i) {
        const int w = path[i];
        if (w < 0 || w >= n || seen[w]) throw InvalidInput("path cover is not a partition of W");
        seen[w] = 1;
        ++total;
        if (i + 1 < path.size() && !spoil.has_arc(w, path[i + 1])) {
          throw MissingArc("path uses non-arc (w" + std::to_string(w) + ", w" +
                           std::to_string(path[i + 1]) + ")");
        }
      }
    }
    if (total != n) throw InvalidInput("path cover does not cover W");
  }

  friend bool operator==(const PathCover& a, const PathCover& b) { return a.paths_ == b.paths_; }

 private:
  void normalize() {
    std::erase_if(paths_, [](const auto& path) { return path.empty(); });
    std::stable_sort(paths_.begin(), paths_.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
    });
  }

  std::vector<std::vector<int>> paths_;
};

enum class PathEnd { kFront, kBack };

/// Concatenates path i then path j; needs arc (last(i), first(j)).
inline PathCover apply_merge(const PathCover& cover, const SpoilGraph& spoil, int i, int j) {
  if (i == j) throw InvalidInput("merge needs two distinct paths");
  const auto& a = cover.path(i);
  const auto& b = cover.path(j);
  if (!spoil.has_arc(a.back(), b.front())) {
    throw MissingArc("merge needs arc (w" + std::to_string(a.back()) + ", w" +
                     std::to_string(b.front()) + ")");
  }
  auto paths = cover.paths();
  paths[i].insert(paths[i].end(), b.begin(), b.end());
  paths[j].clear();
  return PathCover(std::move(paths));
}

/// Moves one endpoint of the shorter path `shorter` onto the longer path `longer`.
/// kFront: arc (first(shorter), first(longer)); first(shorter) is prepended to longer.
/// kBack: arc (last(longer), last(shorter)); last(shorter) is appended to longer.
inline PathCover apply_unbalance(const PathCover& cover, const SpoilGraph& spoil, int longer,
                                 int shorter, PathEnd end) {
  if (longer == shorter) throw InvalidInput("unbalance needs two distinct paths");
  const auto& big = cover.path(longer);
  const auto& small = cover.path(shorter);
  if (big.size() < small.size()) {
    throw LengthOrderViolated("unbalance needs |P1| >= |P2|");
  }
  auto paths = cover.paths();
  if (end == PathEnd::kFront) {
    if (!spoil.has_arc(small.front(), big.front())) {
      throw MissingArc("unbalance needs arc (w" + std::to_string(small.front()) + ", w" +
                       std::to_string(big.front()) + ")");
    }
    paths[longer].insert(paths[longer].begin(), small.front());
    paths[shorter].erase(paths[shorter].begin());
  } else {
    if (!spoil.has_arc(big.back(), small.back())) {
      throw MissingArc("unbalance needs arc (w" + std::to_string(big.back()) + ", w" +
                       std::to_string(small.back()) + ")");
    }
    paths[longer].push_back(small.back());
    paths[shorter].pop_back();
  }
  return PathCover(std::move(paths));
}

/// Closes path i into a cycle via arc (last, first) and reopens it after
/// position `cut`, so the new path starts at old position cut + 1.
inline PathCover apply_rotation(const PathCover& cover, const SpoilGraph& spoil, int i, int cut) {
  const auto& path = cover.path(i);
  const int len = static_cast<int>(path.size());
  if (len < 2 || !spoil.has_arc(path.back(), path.front())) {
    throw MissingArc("rotation needs the closing arc (w" + std::to_string(path.back()) + ", w" +
                     std::to_string(path.front()) + ")");
  }
  if (cut < 0 || cut >= len) throw InvalidInput("rotation cut out of range");
  auto paths = cover.paths();
  std::rotate(paths[i].begin(), paths[i].begin() + (cut + 1) % len, paths[i].end());
  return PathCover(std::move(paths));
}

struct CoverOp {
  enum class Kind { kMerge, kUnbalance, kRotation };
  Kind kind = Kind::kMerge;
  int first = 0;   // merge: leading path; unbalance: longer path; rotation: path
  int second = 0;  // merge: trailing path; unbalance: shorter path
  PathEnd end = PathEnd::kFront;
  int cut = 0;

  std::string describe() const {
    switch (kind) {
      case Kind::kMerge:
        return "merge(" + std::to_string(first) + "," + std::to_string(second) + ")";
      case Kind::kUnbalance:
        return std::string("unbalance(") + std::to_string(first) + "," + std::to_string(second) +
               (end == PathEnd::kFront ? ",front)" : ",back)");
      case Kind::kRotation:
        return "rotate(" + std::to_string(first) + ",cut=" + std::to_string(cut) + ")";
    }
    return {};
  }
};

inline PathCover apply_op(const PathCover& cover, const SpoilGraph& spoil, const CoverOp& op) {
  switch (op.kind) {
    case CoverOp::Kind::kMerge:
      return apply_merge(cover, spoil, op.first, op.second);
    case CoverOp::Kind::kUnbalance:
      return apply_unbalance(cover, spoil, op.first, op.second, op.end);
    case CoverOp::Kind::kRotation:
      return apply_rotation(cover, spoil, op.first, op.cut);
  }
  return cover;
}

namespace detail {

struct CoverIndex {
  std::vector<int> path_of;
  std::vector<int> pos_of;
  std::vector<char> rotatable;
};

inline CoverIndex index_cover(const PathCover& cover, const SpoilGraph& spoil) {
  CoverIndex idx;
  idx.path_of.assign(spoil.n(), -1);
  idx.pos_of.assign(spoil.n(), -1);
  idx.rotatable.assign(cover.p(), 0);
  for (int j = 0; j < cover.p(); ++j) {
    const auto& path = cover.path(j);
    for (std::size_t i = 0; i < path.size(); ++i) {
      idx.path_of[path[i]] = j;
      idx.pos_of[path[i]] = static_cast<int>(i);
    }
    idx.rotatable[j] = path.size() >= 2 && spoil.has_arc(path.back(), path.front());
  }
  return idx;
}

}  // namespace detail

/// Finds an improving operation sequence (at most two rotations followed by a
/// merge or unbalance). Scan order: plain merges, plain unbalances, then the
/// rotation-enabled variants; arcs visited in lexicographic order.
inline std::optional<std::vector<CoverOp>> find_improvement(const PathCover& cover,
                                                            const SpoilGraph& spoil) {
  const auto idx = detail::index_cover(cover, spoil);
  auto len = [&](int j) { return static_cast<int>(cover.path(j).size()); };
  auto is_first = [&](int w) { return idx.pos_of[w] == 0; };
  auto is_last = [&](int w) { return idx.pos_of[w] == len(idx.path_of[w]) - 1; };
  // Rotation making w the first vertex of its path (none if already first).
  auto make_first = [&](int w, std::vector<CoverOp>& ops) {
    const int j = idx.path_of[w];
    if (!is_first(w)) {
      ops.push_back({CoverOp::Kind::kRotation, j, 0, PathEnd::kFront, idx.pos_of[w] - 1});
    }
  };
  auto make_last = [&](int w, std::vector<CoverOp>& ops) {
    const int j = idx.path_of[w];
    if (!is_last(w)) ops.push_back({CoverOp::Kind::kRotation, j, 0, PathEnd::kFront, idx.pos_of[w]});
  };

  for (int rotations = 0; rotations < 2; ++rotations) {
    const bool allow = rotations == 1;
    auto can_end = [&](int w) { return is_last(w) || (allow && idx.rotatable[idx.path_of[w]]); };
    auto can_start = [&](int w) { return is_first(w) || (allow && idx.rotatable[idx.path_of[w]]); };

    // Merges: arc from a (possibly rotated) end to a (possibly rotated) start.
    for (int x = 0; x < spoil.n(); ++x) {
      for (int y : spoil.targets(x)) {
        const int a = idx.path_of[x];
        const int b = idx.path_of[y];
        if (a == b || !can_end(x) || !can_start(y)) continue;
        std::vector<CoverOp> ops;
        make_last(x, ops);
        make_first(y, ops);
        ops.push_back({CoverOp::Kind::kMerge, a, b, PathEnd::kFront, 0});
        return ops;
      }
    }
    // Unbalances.
    for (int x = 0; x < spoil.n(); ++x) {
      for (int y : spoil.targets(x)) {
        const int a = idx.path_of[x];
        const int b = idx.path_of[y];
        if (a == b) continue;
        // Front: x first of shorter a, y first of longer b.
        if (len(b) >= len(a) && can_start(x) && can_start(y)) {
          std::vector<CoverOp> ops;
          make_first(x, ops);
          make_first(y, ops);
          ops.push_back({CoverOp::Kind::kUnbalance, b, a, PathEnd::kFront, 0});
          return ops;
        }
        // Back: x last of longer a, y last of shorter b.
        if (len(a) >= len(b) && can_end(x) && can_end(y)) {
          std::vector<CoverOp> ops;
          make_last(x, ops);
          make_last(y, ops);
          ops.push_back({CoverOp::Kind::kUnbalance, a, b, PathEnd::kBack, 0});
          return ops;
        }
      }
    }
  }
  return std::nullopt;
}

struct MaximalityReport {
  bool maximal = true;
  std::vector<CoverOp> witness;  // empty when maximal
};

inline MaximalityReport is_maximal(const PathCover& cover, const SpoilGraph& spoil) {
  cover.validate(spoil);
  auto ops = find_improvement(cover, spoil);
  if (!ops) return {};
  return {false, std::move(*ops)};
}

struct CoverTrace {
  int merges = 0;
  int unbalances = 0;
  int rotations = 0;
};

/// Greedy improvement from the all-isolated cover until maximal. Every
/// merge/unbalance strictly raises the sum of squared path lengths (bounded by
/// n^2), so the loop runs at most n^2 rounds.
inline PathCover maximal_path_cover(const SpoilGraph& spoil, CoverTrace* trace = nullptr) {
  PathCover cover = PathCover::trivial(spoil.n());
  CoverTrace local;
  while (auto ops = find_improvement(cover, spoil)) {
    const long long before = cover.sum_of_squares();
    const int paths_before = cover.p();
    for (const auto& op : *ops) {
      cover = apply_op(cover, spoil, op);
      if (op.kind == CoverOp::Kind::kRotation) ++local.rotations;
    }
    if (cover.sum_of_squares() <= before) {
      throw InvariantViolation("cover operation did not increase the sum of squares");
    }
    // An unbalance that empties the shorter path is a merge.
    if (ops->back().kind == CoverOp::Kind::kMerge || cover.p() < paths_before) {
      ++local.merges;
    } else {
      ++local.unbalances;
    }
  }
  if (trace) *trace = local;
  return cover;
}

/// Arc conditions every maximal cover satisfies (with paths in sorted order):
///   1. no arc from T to Q u S other than (t_j, s_j)
///   2. no arc t_j -> t_i for j > i
///   3. no arc from Q to S
///   4. no arc between distinct isolated vertices
///   5. no arc s_i -> s_j for i < j
/// Returns a description of each violation found.
inline std::vector<std::string> structural_violations(const PathCover& cover,
                                                      const SpoilGraph& spoil) {
  std::vector<std::string> out;
  const int p = cover.p();
  const int k = cover.k();
  std::vector<int> role(spoil.n(), 0);  // 1 = Q, 2 = S, 3 = T
  std::vector<int> owner(spoil.n(), -1);
  for (int j = 0; j < p; ++j) {
    const auto& path = cover.path(j);
    if (j < k) {
      role[path[0]] = 1;
    } else {
      role[path.front()] = 2;
      role[path.back()] = 3;
    }
    owner[path.front()] = j;
    owner[path.back()] = j;
  }
  auto arc_name = [](int a, int b) {
    return "(w" + std::to_string(a) + ",w" + std::to_string(b) + ")";
  };
  for (int x = 0; x < spoil.n(); ++x) {
    for (int y : spoil.targets(x)) {
      const int rx = role[x];
      const int ry = role[y];
      if (rx == 3 && (ry == 1 || ry == 2) && !(ry == 2 && owner[x] == owner[y])) {
        out.push_back("condition 1: " + arc_name(x, y));
      }
      if (rx == 3 && ry == 3 && owner[x] > owner[y]) out.push_back("condition 2: " + arc_name(x, y));
      if (rx == 1 && ry == 2) out.push_back("condition 3: " + arc_name(x, y));
      if (rx == 1 && ry == 1) out.push_back("condition 4: " + arc_name(x, y));
      if (rx == 2 && ry == 2 && owner[x] < owner[y]) out.push_back("condition 5: " + arc_name(x, y));
    }
  }
  return out;
}

}  // namespace maxmin
