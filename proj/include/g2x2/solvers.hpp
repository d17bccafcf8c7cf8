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

#ifndef G2X2_SOLVERS_HPP_
#define G2X2_SOLVERS_HPP_

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "g2x2/game.hpp"

namespace g2x2 {

// Subset of a player's two actions.
struct ActionSet {
  bool first = false;
  bool second = false;

  bool contains(Action a) const { return a == Action::kFirst ? first : second; }
  int size() const { return static_cast<int>(first) + static_cast<int>(second); }
  friend bool operator==(const ActionSet&, const ActionSet&) = default;
};

inline ActionSet best_response(const GameMatrix& g, Role role, Action opp_action) {
  const int u_first = g.payoff(role, Action::kFirst, opp_action);
  const int u_second = g.payoff(role, Action::kSecond, opp_action);
  return {u_first >= u_second, u_second >= u_first};
}

struct PureEquilibrium {
  Action row_action{};
  Action col_action{};
  friend bool operator==(const PureEquilibrium&, const PureEquilibrium&) = default;
};

// Cells where both actions are weak best responses, in cell order
// (A,C), (A,D), (B,C), (B,D).
inline std::vector<PureEquilibrium> pure_nash(const GameMatrix& g) {
  std::vector<PureEquilibrium> out;
  for (Action r : {Action::kFirst, Action::kSecond}) {
    for (Action c : {Action::kFirst, Action::kSecond}) {
      if (best_response(g, Role::kRow, c).contains(r) && best_response(g, Role::kCol, r).contains(c)) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

struct MixedEquilibrium {
  double p_first_row = 0.5;  // P(row plays A)
  double p_first_col = 0.5;  // P(col plays C)
};

struct MixedNashResult {
  std::optional<MixedEquilibrium> equilibrium;
  // A zero denominator in an indifference condition.
  bool degenerate = false;
};

// Interior equilibrium from the two indifference conditions. Boundary
// solutions and zero denominators are reported as absent.
inline MixedNashResult mixed_nash(const GameMatrix& g) {
  const auto [a, b, c, d] = g.row;
  const auto [x, y, z, w] = g.col;
  const int den_col = (a - c) + (d - b);  // makes the row player indifferent
  const int den_row = (x - y) + (w - z);  // makes the column player indifferent
  MixedNashResult result;
  if (den_col == 0 || den_row == 0) {
    result.degenerate = true;
    return result;
  }
  const double q = static_cast<double>(d - b) / den_col;
  const double p = static_cast<double>(w - z) / den_row;
  if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) result.equilibrium = MixedEquilibrium{p, q};
  return result;
}

// Dominant action with at most one of the two comparisons an equality.
inline std::optional<Action> dominant_strategy(const GameMatrix& g, Role role) {
  const int u11 = g.payoff(role, Action::kFirst, Action::kFirst);
  const int u12 = g.payoff(role, Action::kFirst, Action::kSecond);
  const int u21 = g.payoff(role, Action::kSecond, Action::kFirst);
  const int u22 = g.payoff(role, Action::kSecond, Action::kSecond);
  if (u11 == u21 && u12 == u22) return std::nullopt;
  if (u11 >= u21 && u12 >= u22) return Action::kFirst;
  if (u11 <= u21 && u12 <= u22) return Action::kSecond;
  return std::nullopt;
}

enum class DominanceCategory : std::uint8_t { kDouble = 0, kSingle = 1, kNon = 2 };

inline std::string_view dominance_category_name(DominanceCategory c) {
  switch (c) {
    case DominanceCategory::kDouble: return "double";
    case DominanceCategory::kSingle: return "single";
    case DominanceCategory::kNon: return "non";
  }
  return "?";
}

inline DominanceCategory dominance_category(const GameMatrix& g) {
  const int n = static_cast<int>(dominant_strategy(g, Role::kRow).has_value()) +
                static_cast<int>(dominant_strategy(g, Role::kCol).has_value());
  return n == 2 ? DominanceCategory::kDouble : n == 1 ? DominanceCategory::kSingle : DominanceCategory::kNon;
}

inline constexpr int kMaxIterativeLevel = 3;

// Both players start by best-responding to a uniformly random opponent, then
// repeatedly best-respond to each other's previous action; ties go to the
// first action. Returns the first step whose profile repeats at the next
// step, capped at 3 (cycles never settle).
inline int iterative_rationality_level(const GameMatrix& g) {
  auto pick = [](int u_first, int u_second) { return u_first >= u_second ? Action::kFirst : Action::kSecond; };
  const auto [a, b, c, d] = g.row;
  const auto [x, y, z, w] = g.col;
  std::pair<Action, Action> profile{pick(a + b, c + d), pick(x + z, y + w)};
  for (int k = 1; k < kMaxIterativeLevel; ++k) {
    const std::pair<Action, Action> next{
        pick(g.row_payoff(Action::kFirst, profile.second), g.row_payoff(Action::kSecond, profile.second)),
        pick(g.col_payoff(profile.first, Action::kFirst), g.col_payoff(profile.first, Action::kSecond))};
    if (next == profile) return k;
    profile = next;
  }
  return kMaxIterativeLevel;
}

}  // namespace g2x2

#endif  // G2X2_SOLVERS_HPP_
