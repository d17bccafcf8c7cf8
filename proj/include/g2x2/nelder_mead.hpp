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

#ifndef G2X2_NELDER_MEAD_HPP_
#define G2X2_NELDER_MEAD_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "g2x2/error.hpp"

namespace g2x2 {

struct NelderMeadOptions {
  double initial_step = 0.5;
  // Converged when both the spread of objective values and the largest
  // coordinate distance to the best vertex fall below these.
  double ftol = 1e-8;
  double xtol = 1e-8;
  int max_iter = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Unconstrained simplex minimization with the standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  auto eval = [&f](const std::vector<double>& x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "objective returned a non-finite value");
    return v;
  };
  if (n == 0) return {x0, eval(x0), 0, true};

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  NelderMeadResult res;
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&fv](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];

    double fspread = 0.0, xspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      fspread = std::max(fspread, std::fabs(fv[i] - fv[best]));
      for (std::size_t j = 0; j < n; ++j) xspread = std::max(xspread, std::fabs(simplex[i][j] - simplex[best][j]));
    }
    if (fspread <= opt.ftol && xspread <= opt.xtol) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }
    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
    };

    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    along(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      fv[i] = eval(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = simplex[best];
  res.f = fv[best];
  return res;
}

}  // namespace g2x2

#endif  // G2X2_NELDER_MEAD_HPP_
