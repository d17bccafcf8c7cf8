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

#ifndef G2X2_TOPOLOGY_HPP_
#define G2X2_TOPOLOGY_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "g2x2/error.hpp"
#include "g2x2/game.hpp"

namespace g2x2 {

// Robinson-Goforth order graphs of one player's payoffs (a, b, c, d) in the
// player's own row perspective.
enum class OrderGraph : std::uint8_t {
  kChicken,
  kLeader,
  kHero,
  kCompromise,
  kDeadlock,
  kPrisonersDilemma,
  kStagHunt,
  kAssurance,
  kSafeCoordination,
  kPeace,
  kHarmony,
  kConcord,
};

inline constexpr int kNumOrderGraphs = 12;
inline constexpr int kNumTopologies = kNumOrderGraphs * kNumOrderGraphs;

namespace detail {

struct OrderGraphInfo {
  std::string_view name;
  // Payoff labels from best to worst.
  std::string_view ordering;
};

inline constexpr std::array<OrderGraphInfo, kNumOrderGraphs> kOrderGraphs = {{
    {"Chicken", "cabd"},
    {"Leader", "cbad"},
    {"Hero", "cbda"},
    {"Compromise", "cdba"},
    {"Deadlock", "cdab"},
    {"PrisonersDilemma", "cadb"},
    {"StagHunt", "acdb"},
    {"Assurance", "adcb"},
    {"SafeCoordination", "adbc"},
    {"Peace", "abdc"},
    {"Harmony", "abcd"},
    {"Concord", "acbd"},
}};

// Labels of (a, b, c, d) sorted by decreasing payoff; empty on ties.
inline std::string strict_ordering(const std::array<int, 4>& v) {
  std::array<int, 4> idx = {0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&v](int i, int j) { return v[i] > v[j]; });
  for (int i = 0; i < 3; ++i) {
    if (v[idx[i]] == v[idx[i + 1]]) return {};
  }
  std::string out(4, ' ');
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>('a' + idx[i]);
  return out;
}

inline int find_ordering(std::string_view ordering) {
  for (int i = 0; i < kNumOrderGraphs; ++i) {
    if (kOrderGraphs[i].ordering == ordering) return i;
  }
  return -1;
}

}  // namespace detail

inline std::string_view order_graph_name(OrderGraph g) {
  return detail::kOrderGraphs[static_cast<int>(g)].name;
}

// The defining strict ordering, e.g. "c>a>b>d" for Chicken.
inline std::string order_graph_ordering(OrderGraph g) {
  const auto s = detail::kOrderGraphs[static_cast<int>(g)].ordering;
  return std::string{s[0], '>', s[1], '>', s[2], '>', s[3]};
}

struct Topology {
  OrderGraph row_graph{};
  OrderGraph col_graph{};

  int index() const { return static_cast<int>(row_graph) * kNumOrderGraphs + static_cast<int>(col_graph); }
  static Topology from_index(int i) {
    return {static_cast<OrderGraph>(i / kNumOrderGraphs), static_cast<OrderGraph>(i % kNumOrderGraphs)};
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

// Order graph of payoffs given in a player's own row perspective. The SI list
// holds the 12 orderings whose best payoff is a or c; the other 12 are their
// images under a column swap and share the label.
inline OrderGraph classify_order_graph(const std::array<int, 4>& own) {
  std::string ordering = detail::strict_ordering(own);
  if (ordering.empty()) {
    throw Error(ErrorKind::kTiesNotClassifiable,
                "payoffs (" + std::to_string(own[0]) + "," + std::to_string(own[1]) + "," +
                    std::to_string(own[2]) + "," + std::to_string(own[3]) + ") contain a tie");
  }
  int idx = detail::find_ordering(ordering);
  if (idx < 0) {
    idx = detail::find_ordering(detail::strict_ordering({own[1], own[0], own[3], own[2]}));
  }
  return static_cast<OrderGraph>(idx);
}

inline Topology classify_topology(const GameMatrix& g) {
  const GameMatrix col_view = transpose_perspective(g);
  return {classify_order_graph(g.row), classify_order_graph(col_view.row)};
}

inline std::string topology_name(const Topology& t) {
  return std::string(order_graph_name(t.row_graph)) + "/" + std::string(order_graph_name(t.col_graph));
}

}  // namespace g2x2

#endif  // G2X2_TOPOLOGY_HPP_
