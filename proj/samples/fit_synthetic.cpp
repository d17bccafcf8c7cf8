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


// Simulates choice frequencies from a level-1 quantal response model with
// risk aversion, then recovers its parameters with the scalar fitter.

#include <cstdio>

#include "g2x2/behavioral.hpp"
#include "g2x2/data.hpp"
#include "g2x2/fitting.hpp"
#include "g2x2/generate.hpp"

using namespace g2x2;

int main() {
  const std::vector<GameMatrix> games = generate_games(5).instances;
  const ModelSpec spec{Structure::kLevelK, 1, false, true, std::nullopt};
  const BehaviorParams truth{0.15, 0.15, 0.02};

  std::vector<double> probs;
  for (const GameMatrix& g : games) probs.push_back(predict(spec, truth, g, Role::kRow));
  const Dataset data = simulate_frequencies(games, probs, 2000, 42);

  FitOptions opt;
  opt.starts = 4;
  const FitResult fit = nelder_mead_fit(spec, data, 1, opt);
  std::printf("records   %zu\n", data.size());
  std::printf("eta_self  true %.3f  fitted %.4f\n", truth.eta_self, fit.model.params.eta_self);
  std::printf("alpha     true %.3f  fitted %.4f\n", truth.alpha, fit.model.params.alpha);
  std::printf("train MSE %.3g\n", fit.train_mse);

  const CvSummary cv = cross_validate(spec, data, 3, 0.1, 7, opt);
  std::printf("CV MSE    %.3g (se %.2g)\n", cv.mean_mse, cv.se_mse);
  return 0;
}
