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


// Generates a game set, tallies it by dominance category and prints the
// equilibria of the first few games.

#include <cstdio>
#include <cstdlib>

#include "g2x2/behavioral.hpp"
#include "g2x2/generate.hpp"
#include "g2x2/solvers.hpp"
#include "g2x2/topology.hpp"

using namespace g2x2;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const GeneratedGames games = generate_games(seed);

  int counts[3] = {0, 0, 0};
  for (const GameMatrix& g : games.base) ++counts[static_cast<int>(dominance_category(g))];
  std::printf("%zu base games, %zu instances\n", games.base.size(), games.instances.size());
  for (int c = 0; c < 3; ++c) {
    std::printf("  %-8s %d\n", std::string(dominance_category_name(static_cast<DominanceCategory>(c))).c_str(),
                counts[c]);
  }

  for (std::size_t i = 0; i < 6 && i < games.instances.size(); ++i) {
    const GameMatrix& g = games.instances[i];
    std::printf("\n%s  %s\n", g.id.c_str(), topology_name(classify_topology(g)).c_str());
    std::printf("  row (%d %d %d %d)  col (%d %d %d %d)\n", g.row[0], g.row[1], g.row[2], g.row[3], g.col[0],
                g.col[1], g.col[2], g.col[3]);
    for (const PureEquilibrium& e : pure_nash(g)) {
      std::printf("  PSNE (%s, %s)\n", e.row_action == Action::kFirst ? "A" : "B",
                  e.col_action == Action::kFirst ? "C" : "D");
    }
    const QreResult q = solve_qre(g, Role::kRow, 0.2, 0.2, 0.0);
    std::printf("  QRE eta=0.2: P(A)=%.4f P(C)=%.4f\n", q.p_self, q.p_other);
  }
  return 0;
}
