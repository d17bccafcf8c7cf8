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

#ifndef G2X2_GAME_HPP_
#define G2X2_GAME_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "g2x2/error.hpp"

namespace g2x2 {

inline constexpr int kMinPayoff = 1;
inline constexpr int kMaxPayoff = 50;

enum class Role : std::uint8_t { kRow = 0, kCol = 1 };

constexpr Role opponent(Role role) { return role == Role::kRow ? Role::kCol : Role::kRow; }

// A player's own action, independent of role: kFirst is A for the row player
// and C for the column player.
enum class Action : std::uint8_t { kFirst = 0, kSecond = 1 };

constexpr Action other(Action a) { return a == Action::kFirst ? Action::kSecond : Action::kFirst; }

inline std::string_view action_label(Role role, Action action) {
  if (role == Role::kRow) return action == Action::kFirst ? "A" : "B";
  return action == Action::kFirst ? "C" : "D";
}

inline std::string_view role_name(Role role) { return role == Role::kRow ? "row" : "col"; }

inline Role parse_role(std::string_view s) {
  if (s == "row") return Role::kRow;
  if (s == "col") return Role::kCol;
  throw Error(ErrorKind::kParse, "unknown role '" + std::string(s) + "'");
}

// Payoffs of a 2x2 game. Cells are ordered (A,C), (A,D), (B,C), (B,D):
// row = (a, b, c, d) for the row player, col = (x, y, z, w) for the column
// player.
struct GameMatrix {
  std::array<int, 4> row{};
  std::array<int, 4> col{};
  std::string id;

  static constexpr std::size_t cell(Action row_action, Action col_action) {
    return 2 * static_cast<std::size_t>(row_action) + static_cast<std::size_t>(col_action);
  }

  int row_payoff(Action row_action, Action col_action) const {
    return row[cell(row_action, col_action)];
  }
  int col_payoff(Action row_action, Action col_action) const {
    return col[cell(row_action, col_action)];
  }

  // Payoff to `role` when it plays `own` and the opponent plays `opp`.
  int payoff(Role role, Action own, Action opp) const {
    return role == Role::kRow ? row_payoff(own, opp) : col_payoff(opp, own);
  }

  friend bool operator==(const GameMatrix&, const GameMatrix&) = default;
};

inline bool same_payoffs(const GameMatrix& lhs, const GameMatrix& rhs) {
  return lhs.row == rhs.row && lhs.col == rhs.col;
}

// Throws RangeError unless every payoff lies in [lo, hi].
inline void validate_game(const GameMatrix& g, int lo = kMinPayoff, int hi = kMaxPayoff) {
  for (const auto* payoffs : {&g.row, &g.col}) {
    for (int v : *payoffs) {
      if (v < lo || v > hi) {
        throw Error(ErrorKind::kRange, "game '" + g.id + "' payoff " + std::to_string(v) +
                                           " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
      }
    }
  }
}

// Element of the Klein four-group acting on a matrix by swapping rows and/or
// columns.
struct Permutation {
  bool swap_rows = false;
  bool swap_cols = false;

  static constexpr Permutation identity() { return {}; }
  static constexpr Permutation rows() { return {true, false}; }
  static constexpr Permutation cols() { return {false, true}; }
  static constexpr Permutation both() { return {true, true}; }

  friend constexpr bool operator==(Permutation, Permutation) = default;
};

inline constexpr std::array<Permutation, 4> kAllPermutations = {
    Permutation::identity(), Permutation::rows(), Permutation::cols(), Permutation::both()};

constexpr Permutation compose(Permutation lhs, Permutation rhs) {
  return {lhs.swap_rows != rhs.swap_rows, lhs.swap_cols != rhs.swap_cols};
}

inline GameMatrix apply_permutation(const GameMatrix& g, Permutation p) {
  GameMatrix out = g;
  auto permute = [p](const std::array<int, 4>& v) {
    std::array<int, 4> r = v;
    if (p.swap_rows) r = {r[2], r[3], r[0], r[1]};
    if (p.swap_cols) r = {r[1], r[0], r[3], r[2]};
    return r;
  };
  out.row = permute(g.row);
  out.col = permute(g.col);
  return out;
}

// The game as seen by the original column player acting as row player.
inline GameMatrix transpose_perspective(const GameMatrix& g) {
  GameMatrix out;
  out.id = g.id;
  out.row = {g.col[0], g.col[2], g.col[1], g.col[3]};
  out.col = {g.row[0], g.row[2], g.row[1], g.row[3]};
  return out;
}

// The game from `role`'s seat: unchanged for the row player, transposed for
// the column player. Own actions become A/B, the opponent's C/D.
inline GameMatrix perspective(const GameMatrix& g, Role role) {
  return role == Role::kRow ? g : transpose_perspective(g);
}

// Where a displayed choice lands once the display permutation is undone.
// Displays are always in the acting player's row perspective, so only the
// row swap moves that player's own actions.
constexpr Action undo_permutation(Action displayed, Permutation p) {
  return p.swap_rows ? other(displayed) : displayed;
}

}  // namespace g2x2

#endif  // G2X2_GAME_HPP_
