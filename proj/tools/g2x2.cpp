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

// g2x2: command-line pipelines over 2x2 games, behavioral models and
// complexity analyses.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/complexity.hpp"
#include "g2x2/data.hpp"
#include "g2x2/error.hpp"
#include "g2x2/features.hpp"
#include "g2x2/fitting.hpp"
#include "g2x2/game.hpp"
#include "g2x2/generate.hpp"
#include "g2x2/io.hpp"
#include "g2x2/model_spec.hpp"
#include "g2x2/neural.hpp"
#include "g2x2/parallel.hpp"
#include "g2x2/psychometric.hpp"
#include "g2x2/solvers.hpp"
#include "g2x2/topology.hpp"

namespace {

using namespace g2x2;
using nlohmann::json;

// Options in these groups do not change results and stay out of the config
// hash.
constexpr const char* kOutputGroup = "Outputs";
constexpr const char* kExecutionGroup = "Execution";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_string(const CLI::App& sub) {
  std::string s(sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt == sub.get_help_ptr() || opt->get_group() == kOutputGroup || opt->get_group() == kExecutionGroup) continue;
    s += '\n';
    s += opt->get_name();
    s += '=';
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) s += (i ? "," : "") + res[i];
    } else {
      s += opt->get_default_str();
    }
  }
  return s;
}

struct Provenance {
  std::string command;
  std::uint64_t hash = 0;
  std::uint64_t seed = 0;

  std::string line() const { return "g2x2 " + command + " config=" + hex64(hash) + " seed=" + std::to_string(seed); }
  std::string csv_header() const { return "# " + line() + "\n"; }
  std::string json_header() const { return "// " + line() + "\n"; }
};

class Input {
 public:
  explicit Input(const std::string& path) : path_(path) {
    if (path_ == "-") return;
    file_.open(path_, std::ios::binary);
    if (!file_) throw Error(ErrorKind::kIo, "cannot read '" + path_ + "'");
  }
  std::istream& get() { return path_ == "-" ? std::cin : file_; }

 private:
  std::string path_;
  std::ifstream file_;
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ == "-") return;
    file_.open(path_, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(ErrorKind::kIo, "cannot write '" + path_ + "'");
  }
  std::ostream& get() { return path_ == "-" ? std::cout : file_; }
  void finish() {
    get().flush();
    if (!get()) throw Error(ErrorKind::kIo, "error writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::vector<GameMatrix> load_games(const std::string& path) {
  Input in(path);
  return read_games(in.get());
}

Dataset load_records(const std::string& path) {
  Input in(path);
  return read_records(in.get());
}

json load_json(const std::string& path, std::string_view what) {
  Input in(path);
  return read_json(in.get(), what);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Dataset row_records(std::span<const GameMatrix> games) {
  Dataset out;
  out.reserve(games.size());
  for (const GameMatrix& g : games) out.push_back({g, Role::kRow, 1, 0.5, 0.0, {}});
  return out;
}

std::vector<GameMatrix> own_views(const Dataset& data) {
  std::vector<GameMatrix> out;
  out.reserve(data.size());
  for (const GameRecord& r : data) out.push_back(perspective(r.game, r.role));
  return out;
}

// Distinct games of a record set, in the player's own perspective.
std::vector<GameMatrix> distinct_games(const Dataset& data) {
  std::vector<GameMatrix> out;
  std::unordered_set<std::string> seen;
  for (const GameRecord& r : data) {
    GameMatrix g = perspective(r.game, r.role);
    if (r.role == Role::kCol) g.id += "@col";
    if (!seen.insert(g.id).second) continue;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<double> neg_eta_self(const AugmentedModel& model, const Dataset& data) {
  if (!model.eta_self_net()) throw Error(ErrorKind::kInvalidArgument, "checkpoint has no per-game eta_self network");
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<double> out = model.slot_values(data, idx).eta_self;
  for (double& v : out) v = -v;
  return out;
}

AugmentedModel load_augmented(const std::string& path) {
  const NeuralModel model = NeuralModel::from_checkpoint(load_json(path, "checkpoint"));
  if (!model.augmented()) throw Error(ErrorKind::kInvalidArgument, "checkpoint holds a direct MLP, not a behavioral model");
  return *model.augmented();
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct BehaviorOptions {
  std::string model;
  double eta_self = 0.1;
  std::optional<double> eta_other;
  double alpha = 0.0;
  std::vector<double> weights;

  void add(CLI::App* sub) {
    sub->add_option("--eta-self", eta_self, "Precision eta_self")->capture_default_str();
    sub->add_option("--eta-other", eta_other, "Believed opponent precision (defaults to eta_self)");
    sub->add_option("--alpha", alpha, "CARA risk aversion")->capture_default_str();
    sub->add_option("--weights", weights, "Level 0..3 weights for level mixtures")->expected(4)->delimiter(',');
  }

  FittedModel build(const ModelDescriptor& d) const {
    if (!(eta_self > 0.0) || !(eta_other.value_or(eta_self) > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "precisions must be positive");
    }
    if (!(alpha >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "alpha must be non-negative");
    FittedModel m{d.base, {eta_self, eta_other.value_or(eta_self), alpha}};
    if (!weights.empty()) {
      if (d.base.structure != Structure::kLevelMixture) throw Error(ErrorKind::kInvalidArgument, "--weights applies to level mixtures only");
      m.spec.level_weights = std::array<double, kMaxLevel + 1>{weights[0], weights[1], weights[2], weights[3]};
      validate_spec(m.spec);
    }
    return m;
  }
};

struct FitFlags {
  int starts = 8;
  double ftol = 1e-8;
  double xtol = 1e-8;
  int max_iter = 5000;

  void add(CLI::App* sub) {
    sub->add_option("--starts", starts, "Nelder-Mead multi-starts")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--ftol", ftol, "Simplex objective spread tolerance")->capture_default_str();
    sub->add_option("--xtol", xtol, "Simplex size tolerance")->capture_default_str();
    sub->add_option("--max-iter", max_iter, "Nelder-Mead iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  }

  FitOptions options(int threads) const {
    FitOptions o;
    o.starts = starts;
    o.nm.ftol = ftol;
    o.nm.xtol = xtol;
    o.nm.max_iter = max_iter;
    o.threads = threads;
    return o;
  }
};

struct TrainFlags {
  std::vector<int> hidden{300, 300, 300};
  double lr = 1e-3;
  int batch = 64;
  int epochs = 5000;
  int eval_interval = 100;
  int patience = 2;
  std::vector<double> split{0.8, 0.1, 0.1};
  bool no_augment = false;

  void add(CLI::App* sub, bool with_split) {
    sub->add_option("--hidden", hidden, "Hidden layer widths")->delimiter(',')->capture_default_str();
    sub->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    sub->add_option("--batch", batch, "Minibatch size")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--epochs", epochs, "Maximum epochs")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--eval-interval", eval_interval, "Epochs between validation checks")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--patience", patience, "Consecutive validation rises before stopping")->capture_default_str()->check(CLI::PositiveNumber);
    if (with_split) sub->add_option("--split", split, "Train/validation/test fractions")->expected(3)->delimiter(',')->capture_default_str();
    sub->add_flag("--no-augment", no_augment, "Skip row/column swap augmentation");
  }

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig c;
    c.adam.lr = lr;
    c.batch = batch;
    c.max_epochs = epochs;
    c.eval_interval = eval_interval;
    c.patience = patience;
    c.seed = seed;
    c.hidden = hidden;
    double total = 0.0;
    for (double f : split) {
      if (!(f >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "split fractions must be non-negative");
      total += f;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw Error(ErrorKind::kInvalidArgument, "split fractions must sum to 1");
    c.split = {split[0], split[1], split[2]};
    c.augment = !no_augment;
    for (int h : hidden) {
      if (h < 1) throw Error(ErrorKind::kInvalidArgument, "hidden widths must be positive");
    }
    return c;
  }
};

// Where a per-record score (complexity, a feature, or -eta_self) comes from.
struct ScoreFlags {
  std::string index_path;
  bool published = false;
  std::string feature;
  std::string checkpoint;

  void add(CLI::App* sub) {
    sub->add_option("--index", index_path, "Complexity index JSON");
    sub->add_flag("--published", published, "Use the published index weights, normalized over these games");
    sub->add_option("--feature", feature, "A single game feature");
    sub->add_option("--checkpoint", checkpoint, "Checkpoint whose per-game -eta_self is the score");
  }

  std::vector<double> scores(const Dataset& data, std::string& label) const {
    const int chosen = !index_path.empty() + published + !feature.empty() + !checkpoint.empty();
    if (chosen != 1) throw Error(ErrorKind::kInvalidArgument, "choose exactly one of --index, --published, --feature, --checkpoint");
    const std::vector<GameMatrix> views = own_views(data);
    std::vector<double> out;
    if (!checkpoint.empty()) {
      label = "neg_eta_self";
      return neg_eta_self(load_augmented(checkpoint), data);
    }
    if (!feature.empty()) {
      const Feature f = parse_feature(feature);
      label = std::string(feature_name(f));
      for (const GameMatrix& g : views) out.push_back(compute_features(g)[f]);
      return out;
    }
    ComplexityIndex idx;
    if (published) {
      idx = published_index(normalize_features(feature_matrix(views)).second);
    } else {
      idx = index_from_json(load_json(index_path, "index file"));
    }
    label = "complexity";
    for (const GameMatrix& g : views) out.push_back(idx(g));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
  std::string output = "-";
  int threads = 0;

  void add(CLI::App* sub, bool with_threads) {
    sub->add_option("--seed", seed, "Seed for all randomness")->capture_default_str();
    sub->add_option("-o,--output", output, "Output path, - for stdout")->capture_default_str()->group(kOutputGroup);
    if (with_threads) {
      sub->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str()->group(kExecutionGroup);
    }
  }
};

void run_generate(const Provenance& prov, const Common& c, const std::vector<int>& quotas, int payoff_max, bool per_type,
                  double max_draws) {
  GenerateOptions opt;
  opt.quotas = {quotas[0], quotas[1], quotas[2]};
  opt.payoff_max = payoff_max;
  opt.mode = per_type ? QuotaMode::kPerType : QuotaMode::kCategoryTotals;
  if (!(max_draws >= 1)) throw Error(ErrorKind::kInvalidArgument, "--max-draws must be positive");
  opt.max_draws = static_cast<std::uint64_t>(max_draws);
  if (payoff_max < 2) throw Error(ErrorKind::kInvalidArgument, "--payoff-max must be at least 2");
  const GeneratedGames gen = generate_games(c.seed, opt);
  std::array<int, 3> counts{};
  for (const GameMatrix& g : gen.base) ++counts[static_cast<int>(dominance_category(g))];
  Output out(c.output);
  out.get() << prov.json_header();
  write_games(out.get(), gen.instances);
  out.finish();
  std::fprintf(stderr, "generated %zu base games (double %d, single %d, non %d), %zu instances\n", gen.base.size(),
               counts[0], counts[1], counts[2], gen.instances.size());
}

void run_classify(const Provenance& prov, const Common& c, const std::string& games_path) {
  const auto games = load_games(games_path);
  Output out(c.output);
  std::ostream& os = out.get();
  os << prov.csv_header() << "id,row_graph,col_graph,topology,type_index,category,num_psne\n";
  for (const GameMatrix& g : games) {
    const Topology t = classify_topology(g);
    os << g.id << ',' << order_graph_name(t.row_graph) << ',' << order_graph_name(t.col_graph) << ','
       << topology_name(t) << ',' << t.index() << ',' << dominance_category_name(dominance_category(g)) << ','
       << pure_nash(g).size() << '\n';
  }
  out.finish();
}

void run_solve(const Provenance& prov, const Common& c, const std::string& games_path, std::optional<double> qre_eta,
               double alpha) {
  const auto games = load_games(games_path);
  if (qre_eta && !(*qre_eta > 0.0)) throw Error(ErrorKind::kInvalidArgument, "--qre-eta must be positive");
  std::vector<std::pair<double, double>> qre(games.size());
  if (qre_eta) {
    parallel_for(games.size(), resolve_threads(c.threads), [&](std::size_t i) {
      const ModelSpec spec{Structure::kQre, 1, false, alpha > 0.0, std::nullopt};
      const QreResult r = predict_qre(games[i], spec, {*qre_eta, *qre_eta, alpha});
      qre[i] = {r.p_self, r.p_other};
    });
  }
  Output out(c.output);
  std::ostream& os = out.get();
  os << prov.csv_header() << "id,psne,num_psne,msne_p_row,msne_q_col,dominant_row,dominant_col,iterative_level";
  if (qre_eta) os << ",qre_p_row,qre_q_col";
  os << '\n';
  auto dominant = [](const GameMatrix& g, Role role) -> std::string {
    const auto a = dominant_strategy(g, role);
    return a ? std::string(action_label(role, *a)) : "";
  };
  for (std::size_t i = 0; i < games.size(); ++i) {
    const GameMatrix& g = games[i];
    const auto eqs = pure_nash(g);
    std::string psne;
    for (const auto& e : eqs) {
      if (!psne.empty()) psne += ';';
      psne += std::string(action_label(Role::kRow, e.row_action)) + std::string(action_label(Role::kCol, e.col_action));
    }
    const auto mixed = mixed_nash(g).equilibrium;
    os << g.id << ',' << psne << ',' << eqs.size() << ',' << (mixed ? format_double(mixed->p_first_row) : "") << ','
       << (mixed ? format_double(mixed->p_first_col) : "") << ',' << dominant(g, Role::kRow) << ','
       << dominant(g, Role::kCol) << ',' << iterative_rationality_level(g);
    if (qre_eta) os << ',' << format_double(qre[i].first) << ',' << format_double(qre[i].second);
    os << '\n';
  }
  out.finish();
}

void run_features(const Provenance& prov, const Common& c, const std::string& games_path) {
  const auto games = load_games(games_path);
  Output out(c.output);
  out.get() << prov.csv_header();
  write_features_csv(out.get(), games);
  out.finish();
}

struct SimulateFlags {
  std::string games;
  std::string checkpoint;
  BehaviorOptions behavior;
  int participants = 100;
  int games_per_participant = 20;
  double rt_loading = 0.0;
  std::string rt_index;
  bool confidence = false;
  bool frequencies = false;
};

void run_simulate(const Provenance& prov, const Common& c, const SimulateFlags& f) {
  const auto games = load_games(f.games);
  const Dataset as_records = row_records(games);
  std::vector<double> probs(games.size());
  if (!f.checkpoint.empty()) {
    if (!f.behavior.model.empty()) throw Error(ErrorKind::kInvalidArgument, "give either --model or --checkpoint");
    probs = NeuralModel::from_checkpoint(load_json(f.checkpoint, "checkpoint")).predict(as_records);
  } else {
    if (f.behavior.model.empty()) throw Error(ErrorKind::kInvalidArgument, "--model or --checkpoint is required");
    const ModelDescriptor d = parse_model(f.behavior.model);
    if (d.is_neural()) throw Error(ErrorKind::kInvalidArgument, "neural models simulate from --checkpoint");
    const FittedModel m = f.behavior.build(d);
    parallel_for(games.size(), resolve_threads(c.threads), [&](std::size_t i) { probs[i] = predict_record(m, as_records[i]); });
  }

  if (f.frequencies) {
    Output out(c.output);
    out.get() << prov.csv_header();
    write_records(out.get(), simulate_frequencies(games, probs, f.participants, c.seed));
    out.finish();
    return;
  }

  SimulationOptions opt;
  opt.participants_per_game = f.participants;
  opt.games_per_participant = f.games_per_participant;
  opt.rt.loading = f.rt_loading;
  opt.with_confidence = f.confidence;
  if (f.rt_loading != 0.0) {
    const ComplexityIndex idx = f.rt_index.empty() ? published_index(normalize_features(feature_matrix(games)).second)
                                                   : index_from_json(load_json(f.rt_index, "index file"));
    std::vector<double> signal;
    for (const GameMatrix& g : games) signal.push_back(idx(g));
    opt.rt_signal = detail::zscore(signal);
  }
  const auto trials = simulate_choices(games, probs, opt, c.seed);
  Output out(c.output);
  out.get() << prov.csv_header();
  write_trials(out.get(), trials);
  out.finish();
}

void run_aggregate(const Provenance& prov, const Common& c, const std::string& trials_path, const std::string& games_path) {
  const auto games = load_games(games_path);
  std::vector<TrialRecord> trials;
  {
    Input in(trials_path);
    trials = parse_trials(in.get());
  }
  Output out(c.output);
  out.get() << prov.csv_header();
  write_records(out.get(), aggregate_trials(trials, games));
  out.finish();
}

json params_json(const FittedModel& m) {
  json p = {{"eta_self", m.params.eta_self}};
  if (m.spec.use_belief_noise) p["eta_other"] = m.params.eta_other;
  if (m.spec.use_risk) p["alpha"] = m.params.alpha;
  if (m.spec.level_weights) p["level_weights"] = *m.spec.level_weights;
  return p;
}

json metrics_json(const Metrics& m) { return {{"mse", m.mse}, {"r2", m.r2}}; }

ModelDescriptor behavioral_descriptor(const std::string& label) {
  const ModelDescriptor d = parse_model(label);
  if (d.is_neural()) throw Error(ErrorKind::kInvalidArgument, "'" + label + "' is a neural model; use train");
  return d;
}

void run_fit(const Provenance& prov, const Common& c, const std::string& records_path, const std::string& model,
             const FitFlags& ff) {
  const ModelDescriptor d = behavioral_descriptor(model);
  const Dataset data = load_records(records_path);
  const FitResult fit = nelder_mead_fit(d.base, data, c.seed, ff.options(resolve_threads(c.threads)));
  const Metrics m = evaluate(predict_dataset(fit.model, data), data);
  json j = {{"model", format_model(d)},
            {"params", fit.model.spec.structure == Structure::kNash ? json::object() : params_json(fit.model)},
            {"train_mse", fit.train_mse},
            {"train_r2", m.r2},
            {"n_records", data.size()},
            {"iterations", fit.iterations},
            {"converged", fit.converged},
            {"start_objectives", fit.start_objectives},
            {"final_objectives", fit.final_objectives}};
  Output out(c.output);
  out.get() << prov.json_header() << j.dump(2) << '\n';
  out.finish();
}

struct CvFlags {
  std::string records;
  std::vector<std::string> models{"Nash", "L1+QR", "L1+QR+Risk"};
  int rounds = 10;
  double test_fraction = 0.1;
  FitFlags fit;
  TrainFlags train;
  std::optional<double> upper_mse, upper_r2;
};

void run_cv(const Provenance& prov, const Common& c, const CvFlags& f) {
  if (!(f.test_fraction > 0.0 && f.test_fraction < 1.0)) throw Error(ErrorKind::kInvalidArgument, "--test-fraction must lie in (0, 1)");
  if (f.upper_mse.has_value() != f.upper_r2.has_value()) throw Error(ErrorKind::kInvalidArgument, "give both --upper-mse and --upper-r2");
  std::vector<ModelDescriptor> descs;
  for (const auto& label : f.models) descs.push_back(parse_model(label));
  const Dataset data = load_records(f.records);
  const int threads = resolve_threads(c.threads);

  std::vector<CvTableRow> rows;
  rows.push_back({"Random", random_baseline_cv(data, f.rounds, f.test_fraction, c.seed), false});
  std::optional<Metrics> mlp;
  for (const ModelDescriptor& d : descs) {
    CvSummary s;
    if (d.is_neural()) {
      s = cross_validate_neural(d, data, f.rounds, f.test_fraction, c.seed, f.train.config(c.seed), threads);
    } else {
      s = cross_validate(d.base, data, f.rounds, f.test_fraction, c.seed, f.fit.options(threads));
    }
    if (d.direct_mlp) mlp = Metrics{s.mean_mse, s.mean_r2};
    rows.push_back({format_model(d), std::move(s), d.base.structure == Structure::kNash && !d.direct_mlp});
  }
  std::optional<CompletenessBounds> bounds;
  const CvSummary& random = rows.front().summary;
  if (f.upper_mse) {
    bounds = CompletenessBounds{random.mean_mse, random.mean_r2, *f.upper_mse, *f.upper_r2};
  } else if (mlp) {
    bounds = CompletenessBounds{random.mean_mse, random.mean_r2, mlp->mse, mlp->r2};
  }
  if (bounds && !(bounds->upper_mse < bounds->random_mse && bounds->upper_r2 > bounds->random_r2)) {
    std::fprintf(stderr, "upper bound does not beat the random baseline; completeness omitted\n");
    bounds.reset();
  }
  Output out(c.output);
  out.get() << prov.csv_header();
  write_cv_table(out.get(), rows, bounds);
  out.finish();
}

void run_train(const Provenance& prov, const Common& c, const std::string& records_path, const std::string& model,
               const TrainFlags& tf, const std::string& checkpoint_path) {
  const ModelDescriptor d = parse_model(model);
  const TrainConfig cfg = tf.config(c.seed);
  const Dataset data = load_records(records_path);
  NeuralModel net(d, cfg.hidden);
  const TrainReport report = net.train(data, cfg);
  {
    Output ck(checkpoint_path);
    ck.get() << prov.json_header() << net.checkpoint().dump() << '\n';
    ck.finish();
  }
  json j = {{"model", format_model(d)},
            {"n_records", data.size()},
            {"epochs", report.epochs},
            {"early_stopped", report.early_stopped},
            {"train_mse", report.train_mse},
            {"validation_history", report.validation_history}};
  if (report.validation) j["validation"] = metrics_json(*report.validation);
  if (report.test) j["test"] = metrics_json(*report.test);
  if (const AugmentedModel* aug = net.augmented()) j["scalars"] = params_json(aug->scalar_model());
  Output out(c.output);
  out.get() << prov.json_header() << j.dump(2) << '\n';
  out.finish();
}

void run_index(const Provenance& prov, const Common& c, const std::string& checkpoint, const std::string& games_path,
               const std::string& records_path, double lambda, double eta_scale) {
  if (games_path.empty() == records_path.empty()) throw Error(ErrorKind::kInvalidArgument, "give exactly one of --games, --records");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "--lambda must be non-negative");
  const std::vector<GameMatrix> games = games_path.empty() ? distinct_games(load_records(records_path)) : load_games(games_path);
  const AugmentedModel model = load_augmented(checkpoint);
  if (!(eta_scale > 0.0)) throw Error(ErrorKind::kInvalidArgument, "--eta-scale must be positive");
  std::vector<double> target = neg_eta_self(model, row_records(games));
  for (double& v : target) v *= eta_scale;
  const auto [idx, fit] = fit_complexity_index(games, target, lambda);
  json j = index_to_json(idx);
  j["target"] = "neg_eta_self";
  j["lambda"] = lambda;
  j["eta_scale"] = eta_scale;
  j["r2"] = fit.r2;
  j["n_games"] = games.size();
  json nonzero = json::array();
  for (int k = 0; k < kNumFeatures; ++k) {
    if (idx.weights[k] != 0.0) nonzero.push_back(kFeatureNames[k]);
  }
  j["selected"] = nonzero;
  Output out(c.output);
  out.get() << prov.json_header() << j.dump(2) << '\n';
  out.finish();
}

std::vector<double> record_target(const Dataset& data, const std::string& target) {
  std::vector<double> y;
  for (const GameRecord& r : data) {
    if (target == "rt") {
      y.push_back(r.rt_norm);
    } else if (target == "confidence") {
      if (!r.conf_norm) throw Error(ErrorKind::kInsufficientData, "record '" + r.game.id + "' has no confidence");
      // Cognitive uncertainty is the negated certainty rating.
      y.push_back(-*r.conf_norm);
    } else {
      y.push_back(r.p_first);
    }
  }
  return y;
}

void run_correlate(const Provenance& prov, const Common& c, const std::string& records_path, const ScoreFlags& sf,
                   const std::string& target) {
  const Dataset data = load_records(records_path);
  std::string label;
  const std::vector<double> x = sf.scores(data, label);
  const std::vector<double> y = record_target(data, target);
  const Correlation r = pearson_r(x, y);
  Output out(c.output);
  out.get() << prov.csv_header() << "x,y,r,p_value,n\n"
            << label << ',' << (target == "rt" ? "rt_norm" : target == "confidence" ? "uncertainty" : "p_first") << ','
            << format_double(r.r) << ',' << format_double(r.p_value) << ',' << r.n << '\n';
  out.finish();
}

void run_psychometric(const Provenance& prov, const Common& c, const std::string& records_path, const ScoreFlags& sf,
                      int bins) {
  if (bins < 1) throw Error(ErrorKind::kInvalidArgument, "--bins must be positive");
  const Dataset data = load_records(records_path);
  std::string label;
  const std::vector<double> split = sf.scores(data, label);
  const auto table = psychometric_bins(data, split, bins);
  Output out(c.output);
  out.get() << prov.csv_header() << "# split=" << label << '\n';
  write_psychometric_csv(out.get(), table);
  out.finish();
}

void print_error(std::string_view kind, std::string_view message, int code) {
  const json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral modeling and complexity analysis for 2x2 games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "g2x2 1.0.0");

  std::function<void(const Provenance&)> action;
  auto command = [&](const std::string& name, const std::string& help, Common& common, bool threads) {
    CLI::App* sub = app.add_subcommand(name, help);
    common.add(sub, threads);
    return sub;
  };

  Common gen_c;
  std::vector<int> quotas{3, 8, 22};
  int payoff_max = kMaxPayoff;
  bool per_type = false;
  double max_draws = 1e8;
  CLI::App* gen = command("generate", "Draw games meeting dominance and topology quotas", gen_c, false);
  gen->add_option("--quotas", quotas, "Per-type quotas for double, single and non dominance")->expected(3)->delimiter(',')->capture_default_str();
  gen->add_option("--payoff-max", payoff_max, "Largest payoff")->capture_default_str();
  gen->add_flag("--per-type", per_type, "Apply quotas to every admissible type instead of category totals");
  gen->add_option("--max-draws", max_draws, "Candidate draw budget")->capture_default_str();
  gen->callback([&] { action = [&](const Provenance& p) { run_generate(p, gen_c, quotas, payoff_max, per_type, max_draws); }; });

  Common cls_c;
  std::string cls_games;
  CLI::App* cls = command("classify", "Topology and dominance category of each game", cls_c, false);
  cls->add_option("-g,--games", cls_games, "Games JSON")->required();
  cls->callback([&] { action = [&](const Provenance& p) { run_classify(p, cls_c, cls_games); }; });

  Common sol_c;
  std::string sol_games;
  std::optional<double> sol_eta;
  double sol_alpha = 0.0;
  CLI::App* sol = command("solve", "Equilibria, dominance and iterative rationality", sol_c, true);
  sol->add_option("-g,--games", sol_games, "Games JSON")->required();
  sol->add_option("--qre-eta", sol_eta, "Also report the logit QRE at this precision");
  sol->add_option("--alpha", sol_alpha, "CARA risk aversion for the QRE")->capture_default_str();
  sol->callback([&] { action = [&](const Provenance& p) { run_solve(p, sol_c, sol_games, sol_eta, sol_alpha); }; });

  Common fea_c;
  std::string fea_games;
  CLI::App* fea = command("features", "The 18 structural game features", fea_c, false);
  fea->add_option("-g,--games", fea_games, "Games JSON")->required();
  fea->callback([&] { action = [&](const Provenance& p) { run_features(p, fea_c, fea_games); }; });

  Common sim_c;
  SimulateFlags sim_f;
  CLI::App* sim = command("simulate", "Synthetic participants playing the row role of every game", sim_c, true);
  sim->add_option("-g,--games", sim_f.games, "Games JSON")->required();
  sim->add_option("-m,--model", sim_f.behavior.model, "Behavioral model label, e.g. L1+QR+Risk");
  sim_f.behavior.add(sim);
  sim->add_option("--checkpoint", sim_f.checkpoint, "Simulate from a trained checkpoint instead");
  sim->add_option("--participants", sim_f.participants, "Participants per game")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--games-per-participant", sim_f.games_per_participant, "Games each participant plays")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--rt-loading", sim_f.rt_loading, "Loading of per-game log RT on the complexity index")->capture_default_str()->check(CLI::Range(-1.0, 1.0));
  sim->add_option("--rt-index", sim_f.rt_index, "Index JSON for the RT signal (default: published weights)");
  sim->add_flag("--confidence", sim_f.confidence, "Also draw confidence ratings");
  sim->add_flag("--frequencies", sim_f.frequencies, "Write aggregated records instead of trials");
  sim->callback([&] { action = [&](const Provenance& p) { run_simulate(p, sim_c, sim_f); }; });

  Common agg_c;
  std::string agg_trials, agg_games;
  CLI::App* agg = command("aggregate", "Per-game choice frequencies and normalized RT/confidence", agg_c, false);
  agg->add_option("-t,--trials", agg_trials, "Trials CSV, - for stdin")->required();
  agg->add_option("-g,--games", agg_games, "Games JSON")->required();
  agg->callback([&] { action = [&](const Provenance& p) { run_aggregate(p, agg_c, agg_trials, agg_games); }; });

  Common fit_c;
  std::string fit_records, fit_model;
  FitFlags fit_f;
  CLI::App* fit = command("fit", "Nelder-Mead fit of a behavioral model", fit_c, true);
  fit->add_option("-r,--records", fit_records, "Records CSV")->required();
  fit->add_option("-m,--model", fit_model, "Model label")->required();
  fit_f.add(fit);
  fit->callback([&] { action = [&](const Provenance& p) { run_fit(p, fit_c, fit_records, fit_model, fit_f); }; });

  Common cv_c;
  CvFlags cv_f;
  CLI::App* cv = command("cv", "Repeated train/test comparison of models", cv_c, true);
  cv->add_option("-r,--records", cv_f.records, "Records CSV")->required();
  cv->add_option("-m,--models", cv_f.models, "Model labels")->delimiter(',')->capture_default_str();
  cv->add_option("--rounds", cv_f.rounds, "Cross-validation rounds")->capture_default_str()->check(CLI::PositiveNumber);
  cv->add_option("--test-fraction", cv_f.test_fraction, "Held-out fraction per round")->capture_default_str();
  cv->add_option("--upper-mse", cv_f.upper_mse, "Upper-bound MSE for completeness");
  cv->add_option("--upper-r2", cv_f.upper_r2, "Upper-bound R^2 for completeness");
  cv_f.fit.add(cv);
  cv_f.train.add(cv, false);
  cv->callback([&] { action = [&](const Provenance& p) { run_cv(p, cv_c, cv_f); }; });

  Common tr_c;
  std::string tr_records, tr_model = "MLP", tr_checkpoint;
  TrainFlags tr_f;
  CLI::App* tr = command("train", "Train an MLP or a model with network-produced parameters", tr_c, false);
  tr->add_option("-r,--records", tr_records, "Records CSV")->required();
  tr->add_option("-m,--model", tr_model, "Model label, e.g. MLP or L2+nQR+nBelief")->capture_default_str();
  tr->add_option("--checkpoint", tr_checkpoint, "Checkpoint output path")->required()->group(kOutputGroup);
  tr_f.add(tr, true);
  tr->callback([&] { action = [&](const Provenance& p) { run_train(p, tr_c, tr_records, tr_model, tr_f, tr_checkpoint); }; });

  Common idx_c;
  std::string idx_checkpoint, idx_games, idx_records;
  double idx_lambda = kIndexLambda;
  double idx_eta_scale = kMaxPayoff;
  CLI::App* idx = command("index", "LASSO complexity index on a checkpoint's per-game -eta_self", idx_c, false);
  idx->add_option("--checkpoint", idx_checkpoint, "Checkpoint with a per-game eta_self network")->required();
  idx->add_option("-g,--games", idx_games, "Games JSON");
  idx->add_option("-r,--records", idx_records, "Records CSV (its games are used)");
  idx->add_option("--lambda", idx_lambda, "L1 penalty")->capture_default_str();
  idx->add_option("--eta-scale", idx_eta_scale, "Multiplier expressing eta_self per payoff range rather than per payoff unit")->capture_default_str();
  idx->callback([&] { action = [&](const Provenance& p) { run_index(p, idx_c, idx_checkpoint, idx_games, idx_records, idx_lambda, idx_eta_scale); }; });

  Common cor_c;
  std::string cor_records, cor_target = "rt";
  ScoreFlags cor_s;
  CLI::App* cor = command("correlate", "Pearson correlation of a game score with RT, uncertainty or choice", cor_c, false);
  cor->add_option("-r,--records", cor_records, "Records CSV")->required();
  cor_s.add(cor);
  cor->add_option("--target", cor_target, "rt, confidence or p_first")->capture_default_str()->check(CLI::IsMember({"rt", "confidence", "p_first"}));
  cor->callback([&] { action = [&](const Provenance& p) { run_correlate(p, cor_c, cor_records, cor_s, cor_target); }; });

  Common psy_c;
  std::string psy_records;
  int psy_bins = 10;
  ScoreFlags psy_s;
  CLI::App* psy = command("psychometric", "Choice frequency against level-1 EU gap, split at a score's median", psy_c, false);
  psy->add_option("-r,--records", psy_records, "Records CSV")->required();
  psy_s.add(psy);
  psy->add_option("--bins", psy_bins, "EU gap bins")->capture_default_str();
  psy->callback([&] { action = [&](const Provenance& p) { run_psychometric(p, psy_c, psy_records, psy_s, psy_bins); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what(), 2);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  Provenance prov;
  prov.command = sub->get_name();
  prov.hash = fnv1a64(config_string(*sub));
  prov.seed = sub->get_option("--seed")->as<std::uint64_t>();
  try {
    action(prov);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    print_error(error_kind_name(e.kind()), e.detail(), code);
    return code;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what(), 1);
    return 1;
  }
  return 0;
}
