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

#ifndef G2X2_TESTS_TEST_UTIL_HPP_
#define G2X2_TESTS_TEST_UTIL_HPP_

#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/game.hpp"
#include "g2x2/rng.hpp"

namespace g2x2::testing {

inline GameMatrix prisoners_dilemma() { return {{30, 10, 40, 20}, {30, 40, 10, 20}, "pd"}; }
inline GameMatrix matching_pennies() { return {{10, 1, 1, 10}, {1, 10, 10, 1}, "mp"}; }
inline GameMatrix coordination() { return {{10, 1, 1, 5}, {5, 1, 1, 10}, "coord"}; }

inline GameMatrix random_game(CounterRng& rng, int lo = 1, int hi = 50) {
  GameMatrix g;
  for (int& v : g.row) v = static_cast<int>(rng.uniform_int(lo, hi));
  for (int& v : g.col) v = static_cast<int>(rng.uniform_int(lo, hi));
  return g;
}

// Every context-invariant structure with each combination of belief noise
// and risk, plus a nondegenerate level mixture.
inline std::vector<ModelSpec> all_model_specs() {
  std::vector<ModelSpec> out;
  out.push_back({Structure::kNash, 1, false, false, std::nullopt});
  for (bool belief : {false, true}) {
    for (bool risk : {false, true}) {
      for (int k = 0; k <= kMaxLevel; ++k) out.push_back({Structure::kLevelK, k, belief, risk, std::nullopt});
      out.push_back({Structure::kQre, 1, belief, risk, std::nullopt});
      out.push_back({Structure::kLevelMixture, 1, belief, risk, std::array<double, 4>{0.1, 0.4, 0.3, 0.2}});
    }
  }
  return out;
}

}  // namespace g2x2::testing

#endif  // G2X2_TESTS_TEST_UTIL_HPP_
