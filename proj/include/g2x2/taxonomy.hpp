// Copyright 2026 The g2x2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef G2X2_TAXONOMY_HPP_
#define G2X2_TAXONOMY_HPP_

#include <array>
#include <string_view>

#include "g2x2/game.hpp"
#include "g2x2/solvers.hpp"
#include "g2x2/topology.hpp"

namespace g2x2 {

// Builds the ordinal game (payoffs 4 = best ... 1 = worst) whose row player
// ranks (a, b, c, d) by `row_order` and whose column player ranks its own
// row-perspective payoffs (x, z, y, w) by `col_order`. Orderings are label
// strings best to worst, e.g. "cabd".
inline GameMatrix ordinal_game(std::string_view row_order, std::string_view col_order) {
  std::array<int, 4> row{}, own_col{};
  for (int i = 0; i < 4; ++i) {
    row[row_order[i] - 'a'] = 4 - i;
    own_col[col_order[i] - 'a'] = 4 - i;
  }
  return {row, {own_col[0], own_col[2], own_col[1], own_col[3]}, {}};
}

struct TypeInfo {
  Topology topology;
  DominanceCategory category{};
  // Of the four strict ordinal games realizing the type (each graph in its
  // listed ordering or the opponent-relabeled image), how many have a PSNE.
  int psne_alignments = 0;

  bool admits_psne() const { return psne_alignments > 0; }
};

inline std::array<TypeInfo, kNumTopologies> enumerate_types() {
  std::array<TypeInfo, kNumTopologies> out{};
  auto relabel = [](std::string_view o) {
    // Swapping the opponent's actions maps a<->b and c<->d.
    std::string r(o);
    for (char& ch : r) ch = static_cast<char>('a' + ((ch - 'a') ^ 1));
    return r;
  };
  for (int t = 0; t < kNumTopologies; ++t) {
    const Topology topo = Topology::from_index(t);
    const std::string r0(detail::kOrderGraphs[static_cast<int>(topo.row_graph)].ordering);
    const std::string c0(detail::kOrderGraphs[static_cast<int>(topo.col_graph)].ordering);
    TypeInfo info{topo, {}, 0};
    for (const std::string& r : {r0, relabel(r0)}) {
      for (const std::string& c : {c0, relabel(c0)}) {
        const GameMatrix g = ordinal_game(r, c);
        info.category = dominance_category(g);
        if (!pure_nash(g).empty()) ++info.psne_alignments;
      }
    }
    out[t] = info;
  }
  return out;
}

// Number of PSNE-admitting types per dominance category (double, single, non).
inline std::array<int, 3> admissible_type_counts() {
  std::array<int, 3> counts{};
  for (const TypeInfo& t : enumerate_types()) {
    if (t.admits_psne()) ++counts[static_cast<int>(t.category)];
  }
  return counts;
}

}  // namespace g2x2

#endif  // G2X2_TAXONOMY_HPP_
