#pragma once

// Permutation constructions over V derived from a maximal path cover, and the
// selector that returns the construction with the largest certified count.
//
// All guarantee arithmetic is exact. Vertex w_i of the cover corresponds to
// v_i of the aligned graph, and V keeps its original labels under alignment,
// so the constructed orders are directly permutations of the input's V.

#include <array>
#include <cstdint>
#include <string>

#include <boost/rational.hpp>

#include "maxmin/matching.hpp"
#include "maxmin/spoil.hpp"

namespace maxmin {

using Rational = boost::rational<std::int64_t>;

class CoverNotMaximal : public Error {
 public:
  using Error::Error;
};

inline std::int64_t ceil_of(const Rational& r) {
  const auto num = r.numerator();
  const auto den = r.denominator();  // always positive
  return num >= 0 ? (num + den - 1) / den : -((-num) / den);
}

inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

enum class Construction { kSort1, kSort2, kM12, kLargeM12 };

inline std::string to_string(Construction c) {
  switch (c) {
    case Construction::kSort1: return "sort1";
    case Construction::kSort2: return "sort2";
    case Construction::kM12: return "m12_order";
    case Construction::kLargeM12: return "large_m12_order";
  }
  return "unknown";
}

struct EpsilonParams {
  Rational eps1;  // 1/2 - k/n
  Rational eps2;  // (p - k)/n
  Rational eps3;  // 1/2 - |M12|/n
  int n = 0;
  int p = 0;
  int k = 0;
  int m12 = 0;
  std::vector<std::pair<int, int>> m12_arcs;  // (w in W1, w in W2)
};

struct BoundCertificate {
  Permutation pi;
  Construction construction = Construction::kSort1;
  int guaranteed_count = 0;
  Rational guaranteed_fraction;
  EpsilonParams eps;
  std::array<int, 4> candidates{};  // c1..c4 in Construction order
};

namespace detail {

inline void require_maximal(const PathCover& cover, const SpoilGraph& spoil) {
  const auto report = is_maximal(cover, spoil);
  if (!report.maximal) {
    throw CoverNotMaximal("path cover is not maximal; improving op: " +
                          report.witness.back().describe());
  }
}

/// Completes a prefix to a full permutation, appending the rest in ascending index.
inline Permutation complete_order(std::vector<Vertex> prefix, int n) {
  std::vector<char> used(n, 0);
  for (Vertex v : prefix) used.at(v) = 1;
  for (Vertex v = 0; v < n; ++v) {
    if (!used[v]) prefix.push_back(v);
  }
  return Permutation(std::move(prefix));
}

/// s_p, ..., s_{k+1}, q_1, ..., q_k
inline std::vector<Vertex> starts_then_isolated(const PathCover& cover) {
  auto s = cover.starts();
  std::vector<Vertex> out(s.rbegin(), s.rend());
  const auto q = cover.isolated();
  out.insert(out.end(), q.begin(), q.end());
  return out;
}

}  // namespace detail

/// Prefix s_p..s_{k+1}, q_1..q_k, t_{k+1}..t_p of length 2p - k.
inline std::vector<Vertex> sort1_prefix(const PathCover& cover) {
  auto out = detail::starts_then_isolated(cover);
  const auto t = cover.ends();
  out.insert(out.end(), t.begin(), t.end());
  return out;
}

inline Permutation order_sort1(const PathCover& cover, const SpoilGraph& spoil) {
  detail::require_maximal(cover, spoil);
  return detail::complete_order(sort1_prefix(cover), spoil.n());
}

inline int sort1_guarantee(const PathCover& cover) { return 2 * cover.p() - cover.k(); }

/// Alternating split of every long path with its first vertex dropped. Each
/// path's larger parity class goes to whichever of (V1, V2) is currently
/// smaller, V1 on ties of the running sizes, so |V1| = floor((n-p)/2).
struct ParitySplit {
  std::vector<Vertex> v1;
  std::vector<Vertex> v2;
};

inline ParitySplit sort2_split(const PathCover& cover) {
  ParitySplit split;
  for (int j = cover.k(); j < cover.p(); ++j) {
    const auto& path = cover.path(j);
    std::vector<Vertex> even;  // positions 1, 3, ... (0-based), i.e. 2nd, 4th, ...
    std::vector<Vertex> odd;   // positions 2, 4, ...
    for (std::size_t i = 1; i < path.size(); ++i) (i % 2 == 1 ? even : odd).push_back(path[i]);
    auto& larger = even.size() >= odd.size() ? even : odd;
    auto& smaller = even.size() >= odd.size() ? odd : even;
    auto& to_small_side = split.v1.size() <= split.v2.size() ? split.v1 : split.v2;
    auto& to_large_side = split.v1.size() <= split.v2.size() ? split.v2 : split.v1;
    to_small_side.insert(to_small_side.end(), larger.begin(), larger.end());
    to_large_side.insert(to_large_side.end(), smaller.begin(), smaller.end());
  }
  if (split.v1.size() > split.v2.size()) std::swap(split.v1, split.v2);
  return split;
}

inline Permutation order_sort2(const PathCover& cover, const SpoilGraph& spoil) {
  detail::require_maximal(cover, spoil);
  auto prefix = detail::starts_then_isolated(cover);
  const auto split = sort2_split(cover);
  prefix.insert(prefix.end(), split.v1.begin(), split.v1.end());
  prefix.insert(prefix.end(), split.v2.begin(), split.v2.end());
  return detail::complete_order(std::move(prefix), spoil.n());
}

inline int sort2_guarantee(int n, int p) {
  return static_cast<int>(ceil_of(Rational(5 * n - p, 9)));
}

/// Long-path vertices first, then isolated ones.
inline Permutation order_m12(const PathCover& cover, const SpoilGraph& spoil) {
  detail::require_maximal(cover, spoil);
  auto prefix = cover.w2();
  const auto w1 = cover.w1();
  prefix.insert(prefix.end(), w1.begin(), w1.end());
  return detail::complete_order(std::move(prefix), spoil.n());
}

/// Isolated vertices first, then long-path vertices.
inline Permutation order_large_m12(const PathCover& cover, const SpoilGraph& spoil) {
  detail::require_maximal(cover, spoil);
  auto prefix = cover.w1();
  const auto w2 = cover.w2();
  prefix.insert(prefix.end(), w2.begin(), w2.end());
  return detail::complete_order(std::move(prefix), spoil.n());
}

/// M12 is a maximum matching among arcs leading from W1 to W2.
inline EpsilonParams compute_eps(const PathCover& cover, const SpoilGraph& spoil) {
  detail::require_maximal(cover, spoil);
  const int n = spoil.n();
  if (n == 0) throw InvalidInput("empty instance");
  const auto w1 = cover.w1();
  const auto w2 = cover.w2();
  std::vector<int> right_index(n, -1);
  for (std::size_t i = 0; i < w2.size(); ++i) right_index[w2[i]] = static_cast<int>(i);
  Relation rel(static_cast<int>(w1.size()), static_cast<int>(w2.size()));
  for (std::size_t i = 0; i < w1.size(); ++i) {
    for (int target : spoil.targets(w1[i])) {
      if (right_index[target] >= 0) rel.add(static_cast<int>(i), right_index[target]);
    }
  }
  EpsilonParams eps;
  eps.n = n;
  eps.p = cover.p();
  eps.k = cover.k();
  for (const auto& [l, r] : max_matching(rel)) eps.m12_arcs.emplace_back(w1[l], w2[r]);
  eps.m12 = static_cast<int>(eps.m12_arcs.size());
  eps.eps1 = Rational(1, 2) - Rational(eps.k, n);
  eps.eps2 = Rational(eps.p - eps.k, n);
  eps.eps3 = Rational(1, 2) - Rational(eps.m12, n);
  return eps;
}

/// ceil(|W1| + |W2|/2 - |M12|/2)
inline int m12_guarantee(const EpsilonParams& e) {
  const int w1 = e.k;
  const int w2 = e.n - e.k;
  return static_cast<int>(ceil_of(Rational(2 * w1 + w2 - e.m12, 2)));
}

/// ceil((2/3 - (eps1 + eps3)/3) n)
inline int large_m12_guarantee(const EpsilonParams& e) {
  return static_cast<int>(ceil_of((Rational(2, 3) - (e.eps1 + e.eps3) / 3) * e.n));
}

struct Theorem1Result {
  BoundCertificate certificate;
  AlignedGraph aligned;
  SpoilGraph spoil;
  PathCover cover;
};

/// Perfect matching -> spoiling graph -> maximal cover -> the best of the four
/// constructions. Ties go to the earlier construction.
inline Theorem1Result build_theorem1(const BipartiteGraph& g) {
  if (g.n() == 0) throw InvalidInput("empty instance");
  Theorem1Result out;
  out.aligned = align_to_matching(g, find_perfect_matching(g));
  out.spoil = build_spoiling_graph(out.aligned.graph);
  out.cover = maximal_path_cover(out.spoil);
  const int n = g.n();

  auto& cert = out.certificate;
  cert.eps = compute_eps(out.cover, out.spoil);
  cert.candidates = {sort1_guarantee(out.cover), sort2_guarantee(n, out.cover.p()),
                     m12_guarantee(cert.eps), large_m12_guarantee(cert.eps)};
  int best = 0;
  for (int c = 1; c < 4; ++c) {
    if (cert.candidates[c] > cert.candidates[best]) best = c;
  }
  cert.construction = static_cast<Construction>(best);
  cert.guaranteed_count = std::min(cert.candidates[best], n);
  cert.guaranteed_fraction = Rational(cert.guaranteed_count, n);
  switch (cert.construction) {
    case Construction::kSort1: cert.pi = order_sort1(out.cover, out.spoil); break;
    case Construction::kSort2: cert.pi = order_sort2(out.cover, out.spoil); break;
    case Construction::kM12: cert.pi = order_m12(out.cover, out.spoil); break;
    case Construction::kLargeM12: cert.pi = order_large_m12(out.cover, out.spoil); break;
  }
  if (cert.guaranteed_fraction < Rational(1, 2) + Rational(1, 86)) {
    throw InvariantViolation("selector fell below 1/2 + 1/86: " + to_string(cert.guaranteed_fraction));
  }
  return out;
}

/// Permutation for a named construction on an already computed cover.
inline Permutation construction_order(Construction c, const PathCover& cover, const SpoilGraph& spoil) {
  switch (c) {
    case Construction::kSort1: return order_sort1(cover, spoil);
    case Construction::kSort2: return order_sort2(cover, spoil);
    case Construction::kM12: return order_m12(cover, spoil);
    case Construction::kLargeM12: return order_large_m12(cover, spoil);
  }
  throw InvalidInput("unknown construction");
}

// ---------------------------------------------------------------------------
// Selector floor as a linear program in (eps1, eps2, eps3).
//
//   f1 = 1/2 - e1 + 2 e2         (sort1)
//   f2 = 1/2 + e1/9 - e2/9       (sort2)
//   f3 = 1/2 - e1/2 + e3/2       (M12 order)
//   f4 = 2/3 - e1/3 - e3/3       (large-M12 order)
//
// minimize t  s.t.  t >= f_i,  e2 >= 0,  e3 >= 0,  e1 free.

struct LinearForm {
  Rational constant;
  std::array<Rational, 3> coef;  // e1, e2, e3

  Rational eval(const std::array<Rational, 3>& e) const {
    return constant + coef[0] * e[0] + coef[1] * e[1] + coef[2] * e[2];
  }
};

inline std::array<LinearForm, 4> selector_forms() {
  return {{
      {Rational(1, 2), {Rational(-1), Rational(2), Rational(0)}},
      {Rational(1, 2), {Rational(1, 9), Rational(-1, 9), Rational(0)}},
      {Rational(1, 2), {Rational(-1, 2), Rational(0), Rational(1, 2)}},
      {Rational(2, 3), {Rational(-1, 3), Rational(0), Rational(-1, 3)}},
  }};
}

/// max of the four forms at a point.
inline Rational selector_floor(const std::array<Rational, 3>& e) {
  const auto forms = selector_forms();
  Rational best = forms[0].eval(e);
  for (const auto& f : forms) best = std::max(best, f.eval(e));
  return best;
}

inline Rational selector_floor(const EpsilonParams& e) {
  return selector_floor(std::array<Rational, 3>{e.eps1, e.eps2, e.eps3});
}

namespace detail {

/// Solves a square rational system; nullopt if singular.
template <std::size_t N>
std::optional<std::array<Rational, N>> solve_exact(std::array<std::array<Rational, N + 1>, N> m) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    // numerator() rather than == 0: boost::rational vs int equality recurses under C++20 rewrites
    while (pivot < N && m[pivot][col].numerator() == 0) ++pivot;
    if (pivot == N) return std::nullopt;
    std::swap(m[col], m[pivot]);
    for (std::size_t row = 0; row < N; ++row) {
      if (row == col || m[row][col].numerator() == 0) continue;
      const Rational factor = m[row][col] / m[col][col];
      for (std::size_t c = col; c <= N; ++c) m[row][c] -= factor * m[col][c];
    }
  }
  std::array<Rational, N> x;
  for (std::size_t i = 0; i < N; ++i) x[i] = m[i][N] / m[i][i];
  return x;
}

}  // namespace detail

struct SelectorOptimum {
  Rational value;
  std::array<Rational, 3> eps;          // a minimizing vertex
  std::array<Rational, 4> multipliers;  // dual certificate over f1..f4
  bool dual_certified = false;          // multipliers >= 0 and prove value is a lower bound
  int vertices_examined = 0;
};

/// Exact minimum by vertex enumeration: every basic solution fixes four of
/// the six constraints {t = f_i} u {e2 = 0, e3 = 0} to equality. The optimum
/// is then certified by dual multipliers lambda >= 0, sum 1, that cancel the
/// coefficients of e1, e2, e3 (so sum lambda_i f_i is a constant lower bound).
inline SelectorOptimum solve_selector_lp() {
  const auto forms = selector_forms();
  SelectorOptimum best;
  bool have = false;
  // Unknowns: t, e1, e2, e3. Row form: a . x = b.
  std::vector<std::array<Rational, 5>> rows;
  for (const auto& f : forms) {  // t - c.e = constant
    rows.push_back({Rational(1), -f.coef[0], -f.coef[1], -f.coef[2], f.constant});
  }
  rows.push_back({Rational(0), Rational(0), Rational(1), Rational(0), Rational(0)});
  rows.push_back({Rational(0), Rational(0), Rational(0), Rational(1), Rational(0)});

  for (int mask = 0; mask < (1 << 6); ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    std::array<std::array<Rational, 5>, 4> system;
    int r = 0;
    for (int i = 0; i < 6; ++i) {
      if (mask >> i & 1) system[r++] = rows[i];
    }
    const auto x = detail::solve_exact<4>(system);
    if (!x) continue;
    ++best.vertices_examined;
    const Rational t = (*x)[0];
    const std::array<Rational, 3> e{(*x)[1], (*x)[2], (*x)[3]};
    if (e[1] < 0 || e[2] < 0) continue;
    bool feasible = true;
    for (const auto& f : forms) feasible = feasible && t >= f.eval(e);
    if (!feasible) continue;
    if (!have || t < best.value) {
      best.value = t;
      best.eps = e;
      have = true;
    }
  }
  if (!have) throw InvariantViolation("selector LP has no feasible vertex");

  // Dual: sum lambda = 1, sum lambda_i coef_i[e] = 0 for e1, e2, e3.
  std::array<std::array<Rational, 5>, 4> dual;
  for (int i = 0; i < 4; ++i) {
    dual[0][i] = 1;
    for (int j = 0; j < 3; ++j) dual[j + 1][i] = forms[i].coef[j];
  }
  dual[0][4] = 1;
  dual[1][4] = dual[2][4] = dual[3][4] = 0;
  if (const auto lambda = detail::solve_exact<4>(dual)) {
    best.multipliers = *lambda;
    Rational bound = 0;
    bool nonneg = true;
    for (int i = 0; i < 4; ++i) {
      nonneg = nonneg && (*lambda)[i] >= 0;
      bound += (*lambda)[i] * forms[i].constant;
    }
    best.dual_certified = nonneg && bound == best.value;
  }
  return best;
}

}  // namespace maxmin
