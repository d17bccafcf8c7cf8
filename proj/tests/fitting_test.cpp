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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "g2x2/fitting.hpp"
#include "g2x2/generate.hpp"
#include "test_util.hpp"

namespace g2x2 {
namespace {

const ModelSpec kL1QR{Structure::kLevelK, 1, false, false, std::nullopt};

std::vector<GameMatrix> small_game_set(std::uint64_t seed, int per_type = 2) {
  GenerateOptions opt;
  opt.quotas = {per_type, per_type, per_type};
  opt.mode = QuotaMode::kPerType;
  return generate_games(seed, opt).instances;
}

std::vector<double> model_probs(const FittedModel& m, const std::vector<GameMatrix>& games) {
  std::vector<double> p;
  for (const GameMatrix& g : games) p.push_back(predict(m.spec, m.params, g, Role::kRow));
  return p;
}

TEST(EvaluateTest, Examples) {
  const std::vector<double> y{0.2, 0.9, 0.5, 0.5};
  const Metrics perfect = evaluate(y, y);
  EXPECT_EQ(perfect.mse, 0.0);
  EXPECT_EQ(perfect.r2, 1.0);
  EXPECT_NEAR(evaluate(std::vector<double>(4, 0.525), y).r2, 0.0, 1e-15);
  const Metrics half = evaluate(std::vector<double>(4, 0.5), std::vector<double>{0, 1, 0, 1});
  EXPECT_DOUBLE_EQ(half.mse, 0.25);
  const Metrics c = evaluate(std::vector<double>(4, 0.5), y);
  EXPECT_NEAR(c.mse, 0.0625, 1e-15);
  EXPECT_NEAR(c.r2, -0.010101010101009944, 1e-12);
  try {
    evaluate(std::vector<double>{}, std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyDataset);
  }
}

TEST(EvaluateTest, InvariantUnderRecordOrder) {
  CounterRng rng(3);
  std::vector<double> p(500), y(500);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  const Metrics base = evaluate(p, y);
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<double> ps, ys;
  for (std::size_t i : idx) {
    ps.push_back(p[i]);
    ys.push_back(y[i]);
  }
  const Metrics shuffled = evaluate(ps, ys);
  EXPECT_NEAR(shuffled.mse, base.mse, 1e-15);
  EXPECT_NEAR(shuffled.r2, base.r2, 1e-13);
}

TEST(BaselineTest, RandomDrawsMatchAnalyticExpectation) {
  Dataset d(20000);
  for (auto& r : d) r.p_first = 0.5;
  d[0].p_first = 0.4;
  const Metrics m = random_baseline(d, 1);
  EXPECT_NEAR(m.mse, 1.0 / 12.0, 0.002);
  const Metrics again = random_baseline(d, 1);
  EXPECT_EQ(m.mse, again.mse);
  EXPECT_EQ(m.r2, again.r2);
  EXPECT_NE(random_baseline(d, 2).mse, m.mse);
  EXPECT_NEAR(constant_baseline(d).mse, 0.01 / 20000.0, 1e-12);
}

TEST(CompletenessTest, Examples) {
  const CompletenessBounds published{0.0875, 0.0003, 0.0073, 0.9194};
  EXPECT_NEAR(completeness({0.0073, 0.9194}, published), 100.0, 1e-12);
  EXPECT_NEAR(completeness({0.0875, 0.0003}, published), 0.0, 1e-12);
  EXPECT_NEAR(completeness({0.1625, 0.2234}, published, true), 24.27374605592427, 1e-9);
  EXPECT_NEAR(completeness({0.0218, 0.7509}, published), 81.79352375236428, 1e-9);
  EXPECT_THROW(completeness({0.1, 0.1}, {0.01, 0.5, 0.02, 0.9}), Error);
}

TEST(CompletenessTest, Monotone) {
  const CompletenessBounds b{0.0875, 0.0003, 0.0073, 0.9194};
  CounterRng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Metrics m{rng.uniform() * 0.1, rng.uniform()};
    const Metrics better{m.mse * rng.uniform(), m.r2 + (1 - m.r2) * rng.uniform()};
    EXPECT_GE(completeness(better, b), completeness(m, b));
    EXPECT_GE(completeness(better, b, true), completeness(m, b, true));
  }
}

TEST(NelderMeadTest, Rosenbrock) {
  const auto r = nelder_mead(
      [](const std::vector<double>& x) {
        return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
      },
      {-1.2, 1.0}, {0.5, 1e-14, 1e-10, 5000});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  EXPECT_THROW(nelder_mead([](const std::vector<double>&) { return NAN; }, {0.0}), Error);
}

TEST(ParamLayoutTest, RoundTrip) {
  ModelSpec spec{Structure::kLevelMixture, 1, true, true, std::array<double, 4>{0.1, 0.2, 0.3, 0.4}};
  const FittedModel m{spec, {0.3, 0.05, 0.02}};
  const ParamLayout layout = ParamLayout::of(spec);
  EXPECT_EQ(layout.size(), 6u);
  const FittedModel back = layout.unpack(spec, layout.pack(m));
  EXPECT_NEAR(back.params.eta_self, 0.3, 1e-15);
  EXPECT_NEAR(back.params.eta_other, 0.05, 1e-15);
  EXPECT_NEAR(back.params.alpha, 0.02, 1e-15);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR((*back.spec.level_weights)[k], (*spec.level_weights)[k], 1e-15);
  EXPECT_EQ(ParamLayout::of({Structure::kNash, 1, false, false, std::nullopt}).size(), 0u);
}

TEST(FitTest, RecoversPrecisionFromLargeSamples) {
  const auto games = small_game_set(21);
  const FittedModel truth{kL1QR, {0.15, 0.15, 0.0}};
  const Dataset data = simulate_frequencies(games, model_probs(truth, games), 5000, 4);
  const FitResult fit = nelder_mead_fit(kL1QR, data, 1);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.model.params.eta_self, 0.15, 0.0075);
  for (std::size_t s = 0; s < fit.start_objectives.size(); ++s) {
    EXPECT_LE(fit.final_objectives[s], fit.start_objectives[s]);
  }
}

TEST(FitTest, UniformChoicesDrivePrecisionToZero) {
  Dataset data;
  for (const GameMatrix& g : small_game_set(5, 1)) data.push_back({g, Role::kRow, 10, 0.5, 0.0, std::nullopt});
  const FitResult fit = nelder_mead_fit(kL1QR, data, 2);
  EXPECT_LT(fit.model.params.eta_self, 1e-3);
  EXPECT_LT(fit.train_mse, 1e-8);
}

TEST(FitTest, SingleRecordFitsExactly) {
  Dataset data{{testing::prisoners_dilemma(), Role::kRow, 1, 0.2, 0.0, std::nullopt}};
  const FitResult fit = nelder_mead_fit(kL1QR, data, 3);
  EXPECT_LT(fit.train_mse, 1e-10);
  const ModelSpec nash{Structure::kNash, 1, false, false, std::nullopt};
  EXPECT_DOUBLE_EQ(nelder_mead_fit(nash, data, 3).train_mse, 0.04);
}

TEST(FitTest, ParallelStartsMatchSequential) {
  const auto games = small_game_set(8, 1);
  const FittedModel truth{{Structure::kLevelK, 2, true, true, std::nullopt}, {0.2, 0.1, 0.01}};
  const Dataset data = simulate_frequencies(games, model_probs(truth, games), 300, 9);
  FitOptions seq;
  seq.nm.max_iter = 300;
  FitOptions par = seq;
  par.threads = 4;
  const FitResult a = nelder_mead_fit(truth.spec, data, 17, seq);
  const FitResult b = nelder_mead_fit(truth.spec, data, 17, par);
  EXPECT_EQ(a.train_mse, b.train_mse);
  EXPECT_EQ(a.model.params.eta_self, b.model.params.eta_self);
  EXPECT_EQ(a.final_objectives, b.final_objectives);
}

TEST(CrossValidateTest, DeterministicAndNearSamplingFloor) {
  const auto games = small_game_set(13);
  const FittedModel truth{kL1QR, {0.15, 0.15, 0.0}};
  const auto probs = model_probs(truth, games);
  const int n = 2000;
  const Dataset data = simulate_frequencies(games, probs, n, 6);
  FitOptions opt;
  opt.starts = 2;
  const CvSummary a = cross_validate(kL1QR, data, 10, 0.1, 99, opt);
  opt.threads = 3;
  const CvSummary b = cross_validate(kL1QR, data, 10, 0.1, 99, opt);
  ASSERT_EQ(a.rounds.size(), 10u);
  EXPECT_EQ(a.mean_mse, b.mean_mse);
  EXPECT_EQ(a.se_mse, b.se_mse);
  double floor = 0.0;
  for (double p : probs) floor += p * (1 - p) / n;
  floor /= static_cast<double>(probs.size());
  EXPECT_NEAR(a.mean_mse, floor, 0.25 * floor);
  std::vector<double> mse;
  for (const auto& r : a.rounds) mse.push_back(r.test.mse);
  const auto [mean, se] = mean_se(mse);
  EXPECT_EQ(mean, a.mean_mse);
  EXPECT_EQ(se, a.se_mse);
  Dataset tiny(data.begin(), data.begin() + 3);
  try {
    cross_validate(kL1QR, tiny, 1, 0.1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientData);
  }
}

TEST(CrossValidateTest, TwoPrecisionRegimesBeatTheContextInvariantFit) {
  const auto games = small_game_set(31);
  std::vector<double> probs;
  for (const GameMatrix& g : games) {
    const double eta = *std::max_element(g.row.begin(), g.row.end()) > 25 ? 0.03 : 0.6;
    probs.push_back(predict(kL1QR, BehaviorParams{eta, eta, 0.0}, g, Role::kRow));
  }
  const Dataset data = simulate_frequencies(games, probs, 5000, 2);
  FitOptions opt;
  opt.starts = 2;
  const CvSummary cv = cross_validate(kL1QR, data, 3, 0.1, 4, opt);
  const CounterRng master(4);
  for (std::size_t r = 0; r < cv.rounds.size(); ++r) {
    CounterRng rng = master.split(r);
    const std::array<double, 2> fr{0.9, 0.1};
    const auto test = split_indices(data.size(), fr, rng)[1];
    std::vector<double> oracle;
    for (std::size_t i : test) oracle.push_back(probs[i]);
    EXPECT_LT(evaluate(oracle, subset(data, test)).mse, cv.rounds[r].test.mse);
  }
}

TEST(CvTableTest, Schema) {
  CvSummary s;
  s.mean_mse = 0.0218;
  s.mean_r2 = 0.7509;
  const std::vector<CvTableRow> rows{{"L1+QR+Risk", s, false}};
  std::ostringstream out;
  write_cv_table(out, rows, CompletenessBounds{0.0875, 0.0003, 0.0073, 0.9194});
  EXPECT_EQ(out.str(), "model,mse,se_mse,r2,se_r2,completeness\nL1+QR+Risk,0.021800,0.000000,0.750900,0.000000,81.79\n");
}

}  // namespace
}  // namespace g2x2
