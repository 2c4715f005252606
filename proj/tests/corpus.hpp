#pragma once

// Small family instances (n <= 14) shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "maxmin/gen.hpp"

namespace corpus {

struct Instance {
  std::string name;
  maxmin::FamilySpec spec;
  maxmin::BipartiteGraph graph;
};

inline std::vector<Instance> build() {
  using maxmin::Family;
  std::vector<maxmin::FamilySpec> specs;
  auto add = [&](Family f, maxmin::FamilyParams p, std::uint64_t seed = 0) { specs.push_back({f, p, seed}); };

  add(Family::kFig1, {});
  add(Family::kFano, {});
  add(Family::kPg23, {});
  for (int c = 1; c <= 3; ++c) add(Family::kBadsetChain, {.copies = c});
  for (int d = 1; d <= 4; ++d) add(Family::kRegular89, {.d = d, .t = 1});
  add(Family::kRegular89, {.d = 1, .t = 2});
  add(Family::kRegular89, {.d = 1, .t = 3});
  add(Family::kRegular89, {.d = 1, .t = 4});
  add(Family::kRegular89, {.d = 2, .t = 2});
  for (int d = 1; d <= 7; ++d) add(Family::kTightRegular, {.d = d});
  for (int n = 2; n <= 14; n += 2) add(Family::kBicliqueHalf, {.n = n});
  for (int i = 0; i <= 3; ++i) add(Family::kIterative, {.i = i});
  for (int n : {4, 6, 8, 9, 10, 12, 14}) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      add(Family::kHamiltonianRandom, {.n = n, .extra_edges = n / 2}, seed);
    }
  }
  for (int n : {5, 7, 10, 13}) add(Family::kHamiltonianRandom, {.n = n, .extra_edges = 0}, 3);
  for (int n : {6, 8, 10, 12, 14}) {
    for (int d : {2, 3}) add(Family::kRandomRegular, {.n = n, .d = d}, 100 + n + d);
  }
  add(Family::kRandomRegular, {.n = 7, .d = 4}, 11);
  for (int n : {8, 10, 12, 14}) add(Family::kPlantedIs, {.n = n, .d = 2, .eps = 0.2}, 200 + n);

  std::vector<Instance> out;
  for (const auto& s : specs) {
    std::string name = maxmin::family_name(s.family);
    const auto& p = s.params;
    name += "_n" + std::to_string(p.n) + "_d" + std::to_string(p.d) + "_t" + std::to_string(p.t) + "_i" +
            std::to_string(p.i) + "_c" + std::to_string(p.copies) + "_s" + std::to_string(s.seed);
    out.push_back({name, s, maxmin::generate(s)});
  }
  return out;
}

inline const std::vector<Instance>& all() {
  static const std::vector<Instance> instances = build();
  return instances;
}

}  // namespace corpus
