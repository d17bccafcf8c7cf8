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

#ifndef G2X2_COMPLEXITY_HPP_
#define G2X2_COMPLEXITY_HPP_

#include <span>
#include <utility>

#include "g2x2/features.hpp"
#include "g2x2/lasso.hpp"

namespace g2x2 {

inline constexpr double kIndexLambda = 0.2;

// Sparse index over normalized features fitted to `target` (one value per
// game), usually the negated per-game eta_self.
inline std::pair<ComplexityIndex, LassoResult> fit_complexity_index(std::span<const GameMatrix> games,
                                                                    std::span<const double> target,
                                                                    double lambda = kIndexLambda,
                                                                    const LassoOptions& opt = {}) {
  if (games.size() != target.size()) throw Error(ErrorKind::kInvalidArgument, "one target value per game required");
  const auto [Z, stats] = normalize_features(feature_matrix(games));
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
  LassoResult fit = lasso_fit(Z, y, lambda, opt);
  ComplexityIndex idx;
  for (int j = 0; j < kNumFeatures; ++j) idx.weights[j] = fit.beta[j];
  idx.intercept = fit.intercept;
  idx.stats = stats;
  return {std::move(idx), std::move(fit)};
}

}  // namespace g2x2

#endif  // G2X2_COMPLEXITY_HPP_
