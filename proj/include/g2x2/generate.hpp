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

#ifndef G2X2_GENERATE_HPP_
#define G2X2_GENERATE_HPP_

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "g2x2/error.hpp"
#include "g2x2/game.hpp"
#include "g2x2/rng.hpp"
#include "g2x2/solvers.hpp"
#include "g2x2/taxonomy.hpp"
#include "g2x2/topology.hpp"

namespace g2x2 {

// Instances per type in each dominance category.
struct Quotas {
  int double_dom = 3;
  int single_dom = 8;
  int non_dom = 22;

  int of(DominanceCategory c) const {
    return c == DominanceCategory::kDouble ? double_dom : c == DominanceCategory::kSingle ? single_dom : non_dom;
  }
};

enum class QuotaMode : std::uint8_t {
  // Category total = quota * category_type_counts, spread round-robin over
  // the category's enumerated types.
  kCategoryTotals,
  // Quota applied to every enumerated type.
  kPerType,
};

struct GenerateOptions {
  Quotas quotas;
  int payoff_max = kMaxPayoff;
  QuotaMode mode = QuotaMode::kCategoryTotals;
  std::array<int, 3> category_type_counts = {36, 88, 18};
  std::uint64_t max_draws = 100'000'000;
};

struct GeneratedGames {
  std::vector<GameMatrix> base;
  // Each base game followed by its transposed twin, ids "<id>-r", "<id>-c".
  std::vector<GameMatrix> instances;
  std::array<int, kNumTopologies> per_type{};
};

// Target count for each topology index.
inline std::array<int, kNumTopologies> type_targets(const GenerateOptions& opt) {
  if (opt.quotas.double_dom <= 0 || opt.quotas.single_dom <= 0 || opt.quotas.non_dom <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "quotas must be positive");
  }
  const auto types = enumerate_types();
  std::array<int, kNumTopologies> target{};
  for (int cat = 0; cat < 3; ++cat) {
    const auto category = static_cast<DominanceCategory>(cat);
    std::vector<int> members;
    for (const TypeInfo& t : types) {
      if (t.category == category && t.admits_psne()) members.push_back(t.topology.index());
    }
    if (members.empty()) continue;
    const int quota = opt.quotas.of(category);
    if (opt.mode == QuotaMode::kPerType) {
      for (int m : members) target[m] = quota;
      continue;
    }
    const int total = quota * opt.category_type_counts[cat];
    const int n = static_cast<int>(members.size());
    for (int i = 0; i < n; ++i) target[members[i]] = total / n + (i < total % n ? 1 : 0);
  }
  return target;
}

namespace detail {

inline bool has_tie(const std::array<int, 4>& v) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (v[i] == v[j]) return true;
    }
  }
  return false;
}

}  // namespace detail

// One candidate per draw index, each from its own counter stream: the scale
// u ~ U[1, payoff_max] is drawn once per game, then 8 payoffs ~ U[1, u].
inline GameMatrix draw_candidate(const CounterRng& master, std::uint64_t index, int payoff_max) {
  CounterRng rng = master.split(index);
  const auto u = rng.uniform_int(1, payoff_max);
  GameMatrix g;
  for (int& v : g.row) v = static_cast<int>(rng.uniform_int(1, u));
  for (int& v : g.col) v = static_cast<int>(rng.uniform_int(1, u));
  return g;
}

inline GeneratedGames generate_games(std::uint64_t seed, const GenerateOptions& opt = {}) {
  if (opt.payoff_max < 4) throw Error(ErrorKind::kInvalidArgument, "payoff_max must be at least 4");
  const auto target = type_targets(opt);
  int remaining = 0;
  for (int t : target) remaining += t;

  GeneratedGames out;
  const CounterRng master(seed);
  std::uint64_t draw = 0;
  for (; remaining > 0 && draw < opt.max_draws; ++draw) {
    GameMatrix g = draw_candidate(master, draw, opt.payoff_max);
    if (detail::has_tie(g.row) || detail::has_tie(transpose_perspective(g).row)) continue;
    if (pure_nash(g).empty()) continue;
    const int t = classify_topology(g).index();
    if (out.per_type[t] >= target[t]) continue;
    ++out.per_type[t];
    --remaining;
    char id[16];
    std::snprintf(id, sizeof(id), "g%04zu", out.base.size() + 1);
    g.id = id;
    out.base.push_back(g);
  }
  if (remaining > 0) {
    throw Error(ErrorKind::kQuotaInfeasible,
                std::to_string(remaining) + " games unfilled after " + std::to_string(draw) + " draws");
  }
  out.instances.reserve(2 * out.base.size());
  for (const GameMatrix& g : out.base) {
    GameMatrix r = g;
    r.id += "-r";
    GameMatrix c = transpose_perspective(g);
    c.id = g.id + "-c";
    out.instances.push_back(std::move(r));
    out.instances.push_back(std::move(c));
  }
  return out;
}

}  // namespace g2x2

#endif  // G2X2_GENERATE_HPP_
