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
#include <set>
#include <sstream>

#include "g2x2/data.hpp"
#include "g2x2/generate.hpp"
#include "g2x2/taxonomy.hpp"
#include "test_util.hpp"

namespace g2x2 {
namespace {

TEST(TaxonomyTest, OrdinalGameMatchesGraphs) {
  const GameMatrix g = ordinal_game("cabd", "adcb");
  EXPECT_EQ(classify_topology(g).row_graph, OrderGraph::kChicken);
  EXPECT_EQ(classify_topology(g).col_graph, OrderGraph::kAssurance);
}

TEST(TaxonomyTest, EveryTypeAdmitsPsne) {
  const auto types = enumerate_types();
  std::array<int, 3> by_category{};
  for (const TypeInfo& t : types) {
    EXPECT_TRUE(t.admits_psne()) << topology_name(t.topology);
    ++by_category[static_cast<int>(t.category)];
    if (t.category != DominanceCategory::kNon) EXPECT_EQ(t.psne_alignments, 4);
  }
  EXPECT_EQ(by_category, (std::array<int, 3>{36, 72, 36}));
  EXPECT_EQ(admissible_type_counts(), (std::array<int, 3>{36, 72, 36}));
}

TEST(GenerateTest, TargetsMatchQuotaTotals) {
  const auto target = type_targets({});
  std::array<int, 3> totals{};
  const auto types = enumerate_types();
  for (int t = 0; t < kNumTopologies; ++t) {
    totals[static_cast<int>(types[t].category)] += target[t];
    EXPECT_GT(target[t], 0);
  }
  EXPECT_EQ(totals, (std::array<int, 3>{108, 704, 396}));
  GenerateOptions per_type;
  per_type.mode = QuotaMode::kPerType;
  int sum = 0;
  for (int t : type_targets(per_type)) sum += t;
  EXPECT_EQ(sum, 36 * 3 + 72 * 8 + 36 * 22);
}

TEST(GenerateTest, SmallQuotasAreDeterministicAndValid) {
  GenerateOptions opt;
  opt.quotas = {1, 1, 1};
  opt.mode = QuotaMode::kPerType;
  const GeneratedGames a = generate_games(7, opt);
  const GeneratedGames b = generate_games(7, opt);
  ASSERT_EQ(a.base.size(), 144u);
  ASSERT_EQ(a.instances.size(), 288u);
  for (std::size_t i = 0; i < a.base.size(); ++i) EXPECT_EQ(a.base[i], b.base[i]);
  std::set<int> seen;
  for (const GameMatrix& g : a.base) {
    validate_game(g);
    EXPECT_FALSE(pure_nash(g).empty());
    seen.insert(classify_topology(g).index());
  }
  EXPECT_EQ(seen.size(), 144u);
  EXPECT_EQ(a.instances[0].id, "g0001-r");
  EXPECT_EQ(a.instances[1].id, "g0001-c");
  EXPECT_TRUE(same_payoffs(a.instances[1], transpose_perspective(a.base[0])));
  EXPECT_NE(generate_games(8, opt).base[0], a.base[0]);
}

TEST(GenerateTest, PayoffMaxAndInfeasibleBudget) {
  GenerateOptions opt;
  opt.quotas = {1, 1, 1};
  opt.payoff_max = 12;
  for (const GameMatrix& g : generate_games(3, opt).base) {
    for (int v : g.row) EXPECT_LE(v, 12);
    for (int v : g.col) EXPECT_LE(v, 12);
  }
  opt.max_draws = 50;
  try {
    generate_games(3, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kQuotaInfeasible);
  }
  opt.quotas = {0, 1, 1};
  EXPECT_THROW(generate_games(3, opt), Error);
}

constexpr const char* kTrialsCsv =
    "# comment\n"
    "participant_id,game_id,role,swap_rows,swap_cols,choice,rt_ms,confidence\n"
    "p1,g1,row,0,0,first,1200,0.5\n"
    "p1,g1,row,1,0,first,900,\n"
    "p2,g1,col,0,1,second,3000,1\n";

TEST(ParseTrialsTest, WellFormedFile) {
  std::istringstream in(kTrialsCsv);
  const auto trials = parse_trials(in);
  ASSERT_EQ(trials.size(), 3u);
  EXPECT_EQ(trials[1].permutation, Permutation::rows());
  EXPECT_FALSE(trials[1].confidence.has_value());
  EXPECT_EQ(trials[2].role, Role::kCol);
  EXPECT_EQ(trials[2].choice, Action::kSecond);
  EXPECT_EQ(*trials[2].confidence, 1.0);
  std::ostringstream out;
  write_trials(out, trials);
  std::istringstream back(out.str());
  const auto again = parse_trials(back);
  ASSERT_EQ(again.size(), 3u);
  EXPECT_EQ(again[0].rt_ms, 1200);
  EXPECT_EQ(*again[0].confidence, 0.5);
}

void expect_error(const std::string& body, ErrorKind kind, const std::string& where) {
  std::istringstream in("participant_id,game_id,role,swap_rows,swap_cols,choice,rt_ms,confidence\n" + body);
  try {
    parse_trials(in);
    FAIL() << body;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << body;
    EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
  }
}

TEST(ParseTrialsTest, Errors) {
  expect_error("p,g,row,0,0,first,0,\n", ErrorKind::kRange, "line 2");
  expect_error("p,g,row,0,0,first,10,1.2\n", ErrorKind::kRange, "line 2");
  expect_error("p,g,row,0,0,first,10,\np,g,row,0,0,maybe,10,\n", ErrorKind::kParse, "line 3");
  expect_error("p,g,row,0,0,first\n", ErrorKind::kParse, "line 2");
  expect_error("p,g,diag,0,0,first,10,\n", ErrorKind::kParse, "line 2");
  expect_error("p,g,row,2,0,first,10,\n", ErrorKind::kParse, "line 2");
  std::istringstream missing("participant_id,game_id,role\n");
  EXPECT_THROW(parse_trials(missing), Error);
}

std::vector<TrialRecord> trials_for(const std::string& game, int n_first, int n_second) {
  std::vector<TrialRecord> out;
  for (int i = 0; i < n_first + n_second; ++i) {
    TrialRecord t;
    t.participant_id = "p" + std::to_string(i % 3);
    t.game_id = game;
    t.choice = i < n_first ? Action::kFirst : Action::kSecond;
    t.rt_ms = 500 + 100 * i;
    out.push_back(t);
  }
  return out;
}

TEST(AggregateTest, FrequencyAndPermutationUndo) {
  GameMatrix g = testing::prisoners_dilemma();
  g.id = "g1";
  const auto trials = trials_for("g1", 7, 3);
  const Dataset d = aggregate_trials(trials, std::vector<GameMatrix>{g});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].p_first, 0.7);
  EXPECT_EQ(d[0].n, 10);

  TrialRecord t;
  t.participant_id = "p";
  t.game_id = "g1";
  t.permutation = Permutation::rows();
  t.choice = Action::kFirst;
  EXPECT_EQ(aggregate_trials(std::vector<TrialRecord>{t}, std::vector<GameMatrix>{g})[0].p_first, 0.0);
  t.permutation = Permutation::cols();
  EXPECT_EQ(aggregate_trials(std::vector<TrialRecord>{t}, std::vector<GameMatrix>{g})[0].p_first, 1.0);
  for (Permutation p : kAllPermutations) {
    for (Action a : {Action::kFirst, Action::kSecond}) {
      const Action shown = p.swap_rows ? other(a) : a;
      EXPECT_EQ(canonical_choice(shown, p), a);
    }
  }
  t.game_id = "missing";
  try {
    aggregate_trials(std::vector<TrialRecord>{t}, std::vector<GameMatrix>{g});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownGame);
  }
}

TEST(AggregateTest, RtNormalizationAndOrderInvariance) {
  GameMatrix g1 = testing::prisoners_dilemma(), g2 = testing::coordination();
  g1.id = "g1";
  g2.id = "g2";
  std::vector<TrialRecord> trials;
  for (int i = 0; i < 4; ++i) {
    TrialRecord t;
    t.participant_id = "const";
    t.game_id = i % 2 ? "g1" : "g2";
    t.rt_ms = 800;
    t.confidence = 0.3;
    trials.push_back(t);
  }
  const std::vector<GameMatrix> games{g1, g2};
  Dataset d = aggregate_trials(trials, games);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].rt_norm, 0.0);
  EXPECT_EQ(*d[0].conf_norm, 0.0);

  // One participant: ln RT z-scores of {e^1, e^2, e^3} are -1.2247, 0, 1.2247.
  trials.clear();
  for (int i = 1; i <= 3; ++i) {
    TrialRecord t;
    t.participant_id = "p";
    t.game_id = i == 3 ? "g2" : "g1";
    t.rt_ms = static_cast<int>(std::lround(std::exp(i + 5.0)));
    trials.push_back(t);
  }
  d = aggregate_trials(trials, games);
  EXPECT_NEAR(d[0].rt_norm, -0.6123724356957945, 1e-3);
  EXPECT_NEAR(d[1].rt_norm, 1.224744871391589, 1e-3);
  EXPECT_FALSE(d[0].conf_norm.has_value());

  CounterRng rng(4);
  auto many = trials_for("g1", 30, 20);
  auto more = trials_for("g2", 5, 45);
  many.insert(many.end(), more.begin(), more.end());
  const Dataset base = aggregate_trials(many, games);
  for (int rep = 0; rep < 5; ++rep) {
    rng.shuffle(std::span<TrialRecord>(many));
    const Dataset shuffled = aggregate_trials(many, games);
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(shuffled[i].p_first, base[i].p_first);
      EXPECT_EQ(shuffled[i].rt_norm, base[i].rt_norm);
    }
  }
}

TEST(SimulateTest, BinomialBoundsAndRoundTrip) {
  GenerateOptions opt;
  opt.quotas = {1, 1, 1};
  opt.mode = QuotaMode::kPerType;
  const auto games = generate_games(11, opt).instances;
  std::vector<double> probs(games.size());
  CounterRng rng(5);
  for (double& p : probs) p = rng.uniform();
  probs[0] = 0.5;
  SimulationOptions sim;
  sim.participants_per_game = 10000;
  const std::vector<GameMatrix> subset(games.begin(), games.begin() + 40);
  const std::vector<double> sub_probs(probs.begin(), probs.begin() + 40);
  const auto trials = simulate_choices(subset, sub_probs, sim, 9);
  EXPECT_EQ(trials.size(), 400000u);
  const Dataset d = aggregate_trials(trials, subset);
  ASSERT_EQ(d.size(), 40u);
  for (const GameRecord& r : d) {
    const auto i = static_cast<std::size_t>(std::find_if(subset.begin(), subset.end(),
                                                         [&](const GameMatrix& g) { return g.id == r.game.id; }) -
                                            subset.begin());
    const double sd = std::sqrt(sub_probs[i] * (1 - sub_probs[i]) / 10000.0);
    EXPECT_LE(std::fabs(r.p_first - sub_probs[i]), 3 * sd + 1e-12) << r.game.id;
  }
  const auto half = std::find_if(d.begin(), d.end(), [&](const GameRecord& r) { return r.game.id == games[0].id; });
  EXPECT_LE(std::fabs(half->p_first - 0.5), 0.015);

  sim.participants_per_game = 1;
  for (const GameRecord& r : aggregate_trials(simulate_choices(games, probs, sim, 1), games)) {
    EXPECT_TRUE(r.p_first == 0.0 || r.p_first == 1.0);
  }
  const Dataset f = simulate_frequencies(games, probs, 10000, 3);
  for (std::size_t i = 0; i < games.size(); ++i) {
    EXPECT_LE(std::fabs(f[i].p_first - probs[i]), 4 * std::sqrt(probs[i] * (1 - probs[i]) / 10000.0) + 1e-12);
  }
}

TEST(SimulateTest, RtLoadingProducesCorrelation) {
  GenerateOptions opt;
  opt.quotas = {3, 3, 3};
  opt.mode = QuotaMode::kPerType;
  const auto games = generate_games(2, opt).instances;
  std::vector<double> probs(games.size(), 0.5), signal(games.size());
  CounterRng rng(8);
  for (double& s : signal) s = rng.normal();
  SimulationOptions sim;
  sim.participants_per_game = 200;
  sim.rt.loading = 0.6;
  sim.rt_signal = signal;
  const Dataset d = aggregate_trials(simulate_choices(games, probs, sim, 3), games);
  // Records come back sorted by id; map signals accordingly.
  std::unordered_map<std::string, double> sig;
  for (std::size_t i = 0; i < games.size(); ++i) sig[games[i].id] = signal[i];
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const GameRecord& r : d) {
    const double x = sig[r.game.id], y = r.rt_norm;
    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
  }
  const double n = static_cast<double>(d.size());
  const double r = (sxy - sx * sy / n) / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
  EXPECT_NEAR(r, 0.6, 0.1);
}

}  // namespace
}  // namespace g2x2
