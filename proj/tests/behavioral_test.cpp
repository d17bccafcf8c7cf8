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

#include "g2x2/behavioral.hpp"
#include "g2x2/model_spec.hpp"
#include "test_util.hpp"

namespace g2x2 {
namespace {

using testing::all_model_specs;
using testing::coordination;
using testing::matching_pennies;
using testing::prisoners_dilemma;
using testing::random_game;

constexpr double kLogistic10 = 4.5397868702434395e-05;  // 1 / (1 + e^10)

ModelSpec level(int k, bool belief = false, bool risk = false) {
  return {Structure::kLevelK, k, belief, risk, std::nullopt};
}

TEST(CaraUtilityTest, Examples) {
  EXPECT_EQ(cara_utility(37.0, 0.0), 37.0);
  EXPECT_EQ(cara_utility(0.0, 0.5), 0.0);
  EXPECT_NEAR(cara_utility(10.0, 0.1), 6.321205588285577, 1e-12);
}

TEST(CaraUtilityTest, ContinuousAtZeroAndIncreasing) {
  for (double x : {1.0, 7.0, 50.0}) {
    EXPECT_NEAR(cara_utility(x, 1e-12), x - 0.5e-12 * x * x, 1e-12);
    using D = Dual<1>;
    const D u = cara_utility(x, D::variable(0.0, 0));
    const D u_small = cara_utility(x, D::variable(1e-9, 0));
    EXPECT_NEAR(u.d[0], -0.5 * x * x, 1e-12);
    EXPECT_NEAR(u_small.d[0], u.d[0], 1e-5 * x * x);
  }
  for (double alpha : {0.0, 0.01, 0.1}) {
    for (int x = 1; x < 50; ++x) EXPECT_LT(cara_utility(x, alpha), cara_utility(x + 1.0, alpha));
  }
  // Strongly risk-averse utility saturates at 1/alpha in double precision.
  for (int x = 1; x < 50; ++x) EXPECT_LE(cara_utility(x, 1.0), cara_utility(x + 1.0, 1.0));
}

TEST(LogitChoiceTest, Examples) {
  EXPECT_EQ(logit_choice(0.0, 3.0), 0.5);
  EXPECT_NEAR(logit_choice(std::log(3.0), 1.0), 0.75, 1e-15);
  EXPECT_NEAR(logit_choice(-10.0, 1.0), kLogistic10, 1e-15);
}

TEST(LogitChoiceTest, ExactComplementAndSaturation) {
  CounterRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double d = (rng.uniform() - 0.5) * 200.0;
    EXPECT_EQ(logit_choice(-d, 0.7), 1.0 - logit_choice(d, 0.7));
  }
  EXPECT_EQ(logit_choice(1e4, 1.0), 1.0);
  EXPECT_EQ(logit_choice(-1e4, 1.0), 0.0);
  EXPECT_TRUE(std::isfinite(logit_choice(-1e4, 1e4)));
}

TEST(ExpectedUtilityTest, Examples) {
  const auto [ea, eb] = expected_utilities(prisoners_dilemma(), Role::kRow, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(ea, 20.0);
  EXPECT_DOUBLE_EQ(eb, 30.0);
  const auto [c1, c2] = expected_utilities(prisoners_dilemma(), Role::kRow, 1.0, 0.05);
  EXPECT_DOUBLE_EQ(c1, cara_utility(30.0, 0.05));
  EXPECT_DOUBLE_EQ(c2, cara_utility(40.0, 0.05));
  GameMatrix flat{{9, 9, 9, 9}, {9, 9, 9, 9}, "f"};
  const auto [f1, f2] = expected_utilities(flat, Role::kCol, 0.3, 0.02);
  EXPECT_DOUBLE_EQ(f1, f2);
}

TEST(LevelKBeliefTest, Examples) {
  EXPECT_EQ(level_k_belief(prisoners_dilemma(), Role::kRow, 1, 1.0, 0.0), 0.5);
  EXPECT_NEAR(level_k_belief(prisoners_dilemma(), Role::kRow, 2, 1.0, 0.0), kLogistic10, 1e-15);
  EXPECT_EQ(level_k_belief(coordination(), Role::kRow, 2, 0.0, 0.0), 0.5);
  EXPECT_EQ(level_k_belief(coordination(), Role::kRow, 3, 0.0, 0.1), 0.5);
}

TEST(PredictTest, Examples) {
  const BehaviorParams unit{1.0, 1.0, 0.0};
  EXPECT_NEAR(predict(level(1), unit, prisoners_dilemma(), Role::kRow), kLogistic10, 1e-15);
  // Level 2 in the PD: belief ~ 4.54e-5 on C leaves the gap at -10.
  EXPECT_NEAR(predict(level(2), unit, prisoners_dilemma(), Role::kRow), 4.539786870243432e-05, 1e-15);
  const BehaviorParams zero{0.0, 0.0, 0.0};
  CounterRng rng(2);
  for (const ModelSpec& spec : all_model_specs()) {
    if (spec.structure == Structure::kNash) continue;
    EXPECT_EQ(predict(spec, zero, random_game(rng), Role::kRow), 0.5);
  }
  ModelSpec all_zero{Structure::kLevelMixture, 1, false, false, std::array<double, 4>{1, 0, 0, 0}};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(predict(all_zero, unit, random_game(rng), Role::kRow), 0.5);
}

TEST(PredictTest, ColumnRoleUsesTransposedGame) {
  CounterRng rng(12);
  const BehaviorParams params{0.3, 0.2, 0.01};
  for (const ModelSpec& spec : all_model_specs()) {
    for (int i = 0; i < 20; ++i) {
      const GameMatrix g = random_game(rng);
      EXPECT_NEAR(predict(spec, params, g, Role::kCol), predict(spec, params, transpose_perspective(g), Role::kRow),
                  1e-12);
    }
  }
}

TEST(PredictTest, InvalidSpecs) {
  ModelSpec bad = level(2);
  bad.level_weights = std::array<double, 4>{0.25, 0.25, 0.25, 0.25};
  EXPECT_THROW(validate_spec(bad), Error);
  ModelSpec mix{Structure::kLevelMixture, 1, false, false, std::array<double, 4>{0.5, 0.5, 0.5, 0.0}};
  EXPECT_THROW(validate_spec(mix), Error);
  ModelSpec nash{Structure::kNash, 1, false, true, std::nullopt};
  EXPECT_THROW(validate_spec(nash), Error);
}

TEST(PredictNashTest, Examples) {
  EXPECT_EQ(predict_nash(prisoners_dilemma(), Role::kRow), 0.0);
  EXPECT_EQ(predict_nash(coordination(), Role::kRow), 0.5);
  EXPECT_EQ(predict_nash(matching_pennies(), Role::kRow), 0.5);
  EXPECT_EQ(predict_nash(matching_pennies(), Role::kCol), 0.5);
}

TEST(QreTest, MatchingPenniesAndZeroPrecision) {
  for (double eta : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const QreResult r = solve_qre(matching_pennies(), Role::kRow, eta, eta, 0.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.p_self, 0.5, 1e-12);
    EXPECT_NEAR(r.p_other, 0.5, 1e-12);
  }
  CounterRng rng(6);
  for (int i = 0; i < 100; ++i) {
    const QreResult r = solve_qre(random_game(rng), Role::kRow, 0.0, 0.0, 0.03);
    EXPECT_EQ(r.p_self, 0.5);
    EXPECT_EQ(r.p_other, 0.5);
  }
}

TEST(QreTest, LargePrecisionApproachesStrictEquilibrium) {
  const QreResult r = solve_qre(prisoners_dilemma(), Role::kRow, 5.0, 5.0, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.p_self, 1e-15);
  EXPECT_LT(r.p_other, 1e-15);
  const QreResult mild = solve_qre(prisoners_dilemma(), Role::kRow, 0.05, 0.05, 0.0);
  EXPECT_GT(mild.p_self, r.p_self);
}

TEST(QreTest, PrincipalBranchInCoordinationGame) {
  // At high precision the coordination game has three QREs; continuation
  // from uniform play ends at the risk-dominant (A,C) equilibrium.
  GameMatrix g{{40, 1, 1, 20}, {40, 1, 1, 20}, "co"};
  const QreResult r = solve_qre(g, Role::kRow, 2.0, 2.0, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.p_self, 0.999);
  EXPECT_GT(r.p_other, 0.999);
}

// Reference values from integrating the branch tangent field in (p, eta
// scale) with a stiff ODE solver.
TEST(QreTest, BranchThroughFoldsAndPitchforks) {
  struct Case {
    GameMatrix g;
    double eta;
    double p;
  };
  const std::vector<Case> cases = {
      {{{38, 2, 34, 33}, {25, 10, 28, 27}, "fold"}, 1.0, 0.9820135467779564},
      {{{38, 2, 34, 33}, {25, 10, 28, 27}, "fold"}, 10.0, 1.0},
      {{{5, 37, 36, 21}, {1, 32, 38, 22}, "symmetric"}, 0.2, 0.3886265174325887},
      {{{3, 10, 9, 4}, {2, 6, 8, 4}, "degenerate"}, 0.5, 0.5},
  };
  for (const Case& c : cases) {
    const QreResult r = solve_qre(c.g, Role::kRow, c.eta, c.eta, 0.0);
    EXPECT_TRUE(r.converged) << c.g.id << " eta " << c.eta;
    EXPECT_NEAR(r.p_self, c.p, 1e-9) << c.g.id << " eta " << c.eta;
  }
}

TEST(QreTest, ResidualAndNoConvergence) {
  CounterRng rng(13);
  const ModelSpec qre{Structure::kQre, 1, true, true, std::nullopt};
  for (int i = 0; i < 500; ++i) {
    const GameMatrix g = random_game(rng);
    const QreResult r = predict_qre(g, qre, {0.7, 0.2, 0.02});
    const UtilityTable<double> u(g, 0.02);
    EXPECT_LE(std::fabs(r.p_self - logistic(0.7 * utility_gap(u.of(Role::kRow), r.p_other))), 1e-10);
    EXPECT_LE(std::fabs(r.p_other - logistic(0.2 * utility_gap(u.of(Role::kCol), r.p_self))), 1e-10);
  }
  try {
    predict_qre(coordination(), qre, {1.0, 1.0, 0.0}, QreOptions{1e-10, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoConvergence);
  }
}

// Row-swap equivariance, column-swap invariance, translation invariance and
// scale-precision equivalence for every spec.
TEST(SymmetryTest, AllSpecsOnRandomGames) {
  CounterRng rng(17);
  const BehaviorParams params{0.2, 0.35, 0.03};
  for (const ModelSpec& spec : all_model_specs()) {
    for (int i = 0; i < 100; ++i) {
      const GameMatrix g = random_game(rng);
      const double p = predict(spec, params, g, Role::kRow);
      EXPECT_NEAR(predict(spec, params, apply_permutation(g, Permutation::rows()), Role::kRow), 1.0 - p, 1e-12);
      EXPECT_NEAR(predict(spec, params, apply_permutation(g, Permutation::cols()), Role::kRow), p, 1e-12);
      if (spec.use_risk) continue;
      GameMatrix shifted = g;
      for (int& v : shifted.row) v += 17;
      EXPECT_NEAR(predict(spec, params, shifted, Role::kRow), p, 1e-12);
      GameMatrix scaled = g;
      for (int& v : scaled.row) v *= 3;
      for (int& v : scaled.col) v *= 3;
      const BehaviorParams tighter{params.eta_self / 3.0, params.eta_other / 3.0, 0.0};
      EXPECT_NEAR(predict(spec, tighter, scaled, Role::kRow), p, 1e-12);
    }
  }
}

TEST(LimitTest, LargePrecisionMatchesLevelKBestResponse) {
  CounterRng rng(23);
  for (int i = 0; i < 300; ++i) {
    const GameMatrix g = random_game(rng);
    const double gap1 = (g.row[0] + g.row[1]) - (g.row[2] + g.row[3]);
    if (gap1 == 0) continue;
    const double p = predict(level(1), BehaviorParams{1e3, 1e3, 0.0}, g, Role::kRow);
    EXPECT_EQ(p, gap1 > 0 ? 1.0 : 0.0);
  }
}

TEST(GradientTest, DualMatchesFiniteDifferences) {
  CounterRng rng(29);
  using D = Dual<3>;
  for (const ModelSpec& spec : all_model_specs()) {
    if (spec.structure == Structure::kNash) continue;
    for (int i = 0; i < 10; ++i) {
      const GameMatrix g = random_game(rng);
      const double base[3] = {0.08, 0.05, 0.02};
      const BehaviorParamsT<D> dp{D::variable(base[0], 0), D::variable(base[1], 1), D::variable(base[2], 2)};
      const D out = predict(spec, dp, g, Role::kRow);
      EXPECT_NEAR(out.v, predict(spec, BehaviorParams{base[0], base[1], base[2]}, g, Role::kRow), 1e-14);
      for (int j = 0; j < 3; ++j) {
        double lo[3] = {base[0], base[1], base[2]}, hi[3] = {base[0], base[1], base[2]};
        lo[j] -= 1e-6;
        hi[j] += 1e-6;
        const double fd = (predict(spec, BehaviorParams{hi[0], hi[1], hi[2]}, g, Role::kRow) -
                           predict(spec, BehaviorParams{lo[0], lo[1], lo[2]}, g, Role::kRow)) /
                          2e-6;
        EXPECT_NEAR(out.d[j], fd, 1e-6 + 1e-5 * std::fabs(fd));
      }
    }
  }
}

TEST(ModelSpecTest, ParsesLabels) {
  const auto m = parse_model("L2+QR+Belief+Risk");
  EXPECT_EQ(m.base.structure, Structure::kLevelK);
  EXPECT_EQ(m.base.k, 2);
  EXPECT_TRUE(m.base.use_belief_noise);
  EXPECT_TRUE(m.base.use_risk);
  EXPECT_FALSE(m.is_neural());
  const auto n = parse_model("nL+nQR+nBelief+Risk");
  EXPECT_TRUE(n.slots.level_mixture && n.slots.eta_self && n.slots.eta_other);
  EXPECT_EQ(format_model(n), "nL+nQR+nBelief+Risk");
  EXPECT_EQ(parse_model("nQRE+Belief").slots.eta_self, true);
  EXPECT_TRUE(parse_model("MLP").direct_mlp);
  for (const char* label : {"Nash", "L1+QR", "L3+nQR+Risk", "QRE+Belief+Risk", "L+QR+Risk", "MLP"}) {
    EXPECT_EQ(format_model(parse_model(label)), label);
  }
  for (const char* bad : {"L4+QR", "L1", "Nash+Risk", "L1+QR+QR", "Foo", "QRE+QR", ""}) {
    try {
      parse_model(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidSpec);
    }
  }
}

}  // namespace
}  // namespace g2x2
