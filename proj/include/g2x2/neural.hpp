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

#ifndef G2X2_NEURAL_HPP_
#define G2X2_NEURAL_HPP_

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/data.hpp"
#include "g2x2/dual.hpp"
#include "g2x2/error.hpp"
#include "g2x2/fitting.hpp"
#include "g2x2/mlp.hpp"
#include "g2x2/model_spec.hpp"
#include "g2x2/parallel.hpp"
#include "g2x2/rng.hpp"

namespace g2x2 {

// Adds the row-swapped, column-swapped and doubly swapped copy of every
// record, each in the player's own row perspective. Swapping rows flips the
// target; swapping columns keeps it.
inline Dataset augment_dataset(const Dataset& data) {
  static constexpr std::array<std::string_view, 4> kSuffix = {"", "#r", "#c", "#rc"};
  Dataset out;
  out.reserve(4 * data.size());
  for (const GameRecord& r : data) {
    const GameMatrix own = perspective(r.game, r.role);
    for (int i = 0; i < 4; ++i) {
      GameRecord v = r;
      v.role = Role::kRow;
      v.game = apply_permutation(own, kAllPermutations[i]);
      v.game.id = r.game.id + std::string(kSuffix[i]);
      if (kAllPermutations[i].swap_rows) v.p_first = 1.0 - r.p_first;
      out.push_back(std::move(v));
    }
  }
  return out;
}

struct TrainConfig {
  AdamConfig adam;
  int batch = 64;
  int eval_interval = 100;
  int patience = 2;
  int max_epochs = 5000;
  std::uint64_t seed = 0;
  std::vector<int> hidden = {300, 300, 300};
  std::array<double, 3> split = {0.8, 0.1, 0.1};
  bool augment = true;
};

struct TrainReport {
  double train_mse = 0.0;
  std::optional<Metrics> validation;
  std::optional<Metrics> test;
  int epochs = 0;
  bool early_stopped = false;
  std::vector<double> validation_history;
  std::vector<std::size_t> train_idx, validation_idx, test_idx;
};

inline Eigen::MatrixXd batch_inputs(const Dataset& data, std::span<const std::size_t> idx) {
  Eigen::MatrixXd x(kGameInputDim, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const GameRecord& r = data[idx[j]];
    x.col(static_cast<Eigen::Index>(j)) = game_input(perspective(r.game, r.role));
  }
  return x;
}

// MLP mapping a game directly to p(first action).
class DirectMlpModel {
 public:
  explicit DirectMlpModel(const std::vector<int>& hidden) : net_(MlpConfig{kGameInputDim, hidden, Head::kProbability}) {}
  explicit DirectMlpModel(Mlp net) : net_(std::move(net)) {}

  void init(CounterRng& rng) { net_.init_uniform(rng); }

  std::vector<double> predict(const Dataset& data, std::span<const std::size_t> idx) const {
    const Eigen::MatrixXd out = net_.forward(batch_inputs(data, idx));
    return {out.row(0).begin(), out.row(0).end()};
  }

  // Mean squared error over the batch and its gradient.
  double loss_grad(const Dataset& data, std::span<const std::size_t> idx, Eigen::VectorXd& grad) const {
    Mlp::Cache cache;
    const Eigen::MatrixXd out = net_.forward(batch_inputs(data, idx), &cache);
    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(2, out.cols());
    const double inv = 1.0 / static_cast<double>(idx.size());
    double loss = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double e = out(0, static_cast<Eigen::Index>(j)) - data[idx[j]].p_first;
      loss += e * e * inv;
      d_out(0, static_cast<Eigen::Index>(j)) = 2.0 * e * inv;
    }
    grad = net_.backward(cache, d_out);
    return loss;
  }

  Eigen::VectorXd flat() const { return net_.params(); }
  void set_flat(const Eigen::VectorXd& v) { net_.params() = v; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
};

// Behavioral model whose slots (eta_self, eta_other, level mixture) may be
// produced per game by networks. Scalar parameters are log eta_self, log
// eta_other, log alpha and three mixture logits relative to level 0.
class AugmentedModel {
 public:
  static constexpr int kNumScalars = 6;

  AugmentedModel(ModelDescriptor desc, const std::vector<int>& hidden) : desc_(std::move(desc)) {
    if (desc_.direct_mlp || desc_.base.structure == Structure::kNash) {
      throw Error(ErrorKind::kInvalidSpec, "augmented models need a behavioral structure");
    }
    validate_spec(desc_.base);
    if (desc_.slots.eta_self) eta_self_net_ = Mlp({kGameInputDim, hidden, Head::kPositive});
    if (desc_.slots.eta_other) eta_other_net_ = Mlp({kGameInputDim, hidden, Head::kPositive});
    if (desc_.slots.level_mixture) mixture_net_ = Mlp({kGameInputDim, hidden, Head::kSimplex4});
    scalars_ = Eigen::VectorXd::Zero(kNumScalars);
    set_scalar_values({0.1, 0.1, 0.01});
  }

  void set_scalar_values(const BehaviorParams& p) {
    scalars_[0] = std::log(p.eta_self);
    scalars_[1] = std::log(p.eta_other);
    scalars_[2] = std::log(std::max(p.alpha, 1e-12));
    if (desc_.base.level_weights) {
      const auto& w = *desc_.base.level_weights;
      for (int k = 1; k <= kMaxLevel; ++k) scalars_[k + 2] = std::log(w[k]) - std::log(w[0]);
    }
  }

  // Networks start uniform with the positive heads' output bias set so the
  // initial precision matches the scalar start.
  void init(CounterRng& rng) {
    for (Mlp* net : nets()) {
      net->init_uniform(rng);
      if (net->config().head == Head::kPositive) {
        const double start = std::exp(scalars_[0]);
        net->params()[net->num_params() - 1] = std::log(std::expm1(start));
      }
    }
  }

  const ModelDescriptor& descriptor() const { return desc_; }
  Eigen::VectorXd& scalars() { return scalars_; }
  const Eigen::VectorXd& scalars() const { return scalars_; }
  const std::optional<Mlp>& eta_self_net() const { return eta_self_net_; }
  const std::optional<Mlp>& eta_other_net() const { return eta_other_net_; }
  const std::optional<Mlp>& mixture_net() const { return mixture_net_; }
  std::optional<Mlp>& eta_self_net() { return eta_self_net_; }
  std::optional<Mlp>& eta_other_net() { return eta_other_net_; }
  std::optional<Mlp>& mixture_net() { return mixture_net_; }

  // Per-game parameter values in the order of `idx`.
  struct Slots {
    std::vector<double> eta_self, eta_other, alpha;
    std::vector<std::array<double, kMaxLevel + 1>> weights;
  };

  Slots slot_values(const Dataset& data, std::span<const std::size_t> idx, std::array<Mlp::Cache, 3>* caches = nullptr) const {
    const std::size_t n = idx.size();
    Slots s;
    s.eta_self.assign(n, std::exp(scalars_[0]));
    s.eta_other.assign(n, std::exp(scalars_[1]));
    s.alpha.assign(n, desc_.base.use_risk ? std::exp(scalars_[2]) : 0.0);
    s.weights.assign(n, scalar_weights());
    if (!eta_self_net_ && !eta_other_net_ && !mixture_net_) return s;
    const Eigen::MatrixXd x = batch_inputs(data, idx);
    if (eta_self_net_) {
      const Eigen::MatrixXd out = eta_self_net_->forward(x, caches ? &(*caches)[0] : nullptr);
      for (std::size_t j = 0; j < n; ++j) s.eta_self[j] = out(0, static_cast<Eigen::Index>(j));
    }
    if (eta_other_net_) {
      const Eigen::MatrixXd out = eta_other_net_->forward(x, caches ? &(*caches)[1] : nullptr);
      for (std::size_t j = 0; j < n; ++j) s.eta_other[j] = out(0, static_cast<Eigen::Index>(j));
    }
    if (mixture_net_) {
      const Eigen::MatrixXd out = mixture_net_->forward(x, caches ? &(*caches)[2] : nullptr);
      for (std::size_t j = 0; j < n; ++j) {
        for (int k = 0; k <= kMaxLevel; ++k) s.weights[j][k] = out(k, static_cast<Eigen::Index>(j));
      }
    }
    return s;
  }

  std::vector<double> predict(const Dataset& data, std::span<const std::size_t> idx) const {
    const Slots s = slot_values(data, idx);
    std::vector<double> out(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) out[j] = behave<double>(data[idx[j]], s, j).v;
    return out;
  }

  double loss_grad(const Dataset& data, std::span<const std::size_t> idx, Eigen::VectorXd& grad) const {
    std::array<Mlp::Cache, 3> caches;
    const Slots s = slot_values(data, idx, &caches);
    const std::size_t n = idx.size();
    const double inv = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd d_es = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(n));
    Eigen::MatrixXd d_eo = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(n));
    Eigen::MatrixXd d_mix = Eigen::MatrixXd::Zero(kMaxLevel + 1, static_cast<Eigen::Index>(n));
    Eigen::VectorXd d_scalar = Eigen::VectorXd::Zero(kNumScalars);
    double loss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const Behavior b = behave<Dual<3>>(data[idx[j]], s, j);
      const double e = b.v - data[idx[j]].p_first;
      loss += e * e * inv;
      const double g = 2.0 * e * inv;
      if (eta_self_net_) {
        d_es(0, jj) = g * b.d[0];
      } else {
        d_scalar[0] += g * b.d[0] * s.eta_self[j];
      }
      if (eta_other_net_) {
        d_eo(0, jj) = g * b.d[1];
      } else {
        d_scalar[1] += g * b.d[1] * s.eta_other[j];
      }
      d_scalar[2] += g * b.d[2] * s.alpha[j];
      if (desc_.base.structure == Structure::kLevelMixture) {
        if (mixture_net_) {
          for (int k = 0; k <= kMaxLevel; ++k) d_mix(k, jj) = g * b.level_preds[k];
        } else {
          for (int k = 1; k <= kMaxLevel; ++k) d_scalar[k + 2] += g * s.weights[j][k] * (b.level_preds[k] - b.v);
        }
      }
    }
    grad = Eigen::VectorXd::Zero(num_params());
    Eigen::Index off = 0;
    if (eta_self_net_) {
      grad.segment(off, eta_self_net_->num_params()) = eta_self_net_->backward(caches[0], d_es);
      off += eta_self_net_->num_params();
    }
    if (eta_other_net_) {
      grad.segment(off, eta_other_net_->num_params()) = eta_other_net_->backward(caches[1], d_eo);
      off += eta_other_net_->num_params();
    }
    if (mixture_net_) {
      grad.segment(off, mixture_net_->num_params()) = mixture_net_->backward(caches[2], d_mix);
      off += mixture_net_->num_params();
    }
    grad.segment(off, kNumScalars) = d_scalar;
    return loss;
  }

  Eigen::Index num_params() const {
    Eigen::Index n = kNumScalars;
    for (const Mlp* net : nets()) n += net->num_params();
    return n;
  }

  Eigen::VectorXd flat() const {
    Eigen::VectorXd v(num_params());
    Eigen::Index off = 0;
    for (const Mlp* net : nets()) {
      v.segment(off, net->num_params()) = net->params();
      off += net->num_params();
    }
    v.segment(off, kNumScalars) = scalars_;
    return v;
  }

  void set_flat(const Eigen::VectorXd& v) {
    Eigen::Index off = 0;
    for (Mlp* net : nets()) {
      net->params() = v.segment(off, net->num_params());
      off += net->num_params();
    }
    scalars_ = v.segment(off, kNumScalars);
  }

  // The scalar part as a fitted model (weights from the scalar logits).
  FittedModel scalar_model() const {
    FittedModel m{desc_.base, {std::exp(scalars_[0]), std::exp(scalars_[1]), desc_.base.use_risk ? std::exp(scalars_[2]) : 0.0}};
    if (m.spec.structure == Structure::kLevelMixture) m.spec.level_weights = scalar_weights();
    return m;
  }

 private:
  struct Behavior {
    double v = 0.0;
    std::array<double, 3> d{};
    std::array<double, kMaxLevel + 1> level_preds{};
  };

  std::array<double, kMaxLevel + 1> scalar_weights() const {
    std::array<double, kMaxLevel + 1> w{1.0, std::exp(scalars_[3]), std::exp(scalars_[4]), std::exp(scalars_[5])};
    const double sum = w[0] + w[1] + w[2] + w[3];
    for (double& x : w) x /= sum;
    return w;
  }

  std::vector<Mlp*> nets() {
    std::vector<Mlp*> out;
    for (auto* n : {&eta_self_net_, &eta_other_net_, &mixture_net_}) {
      if (*n) out.push_back(&**n);
    }
    return out;
  }
  std::vector<const Mlp*> nets() const {
    std::vector<const Mlp*> out;
    for (auto* n : {&eta_self_net_, &eta_other_net_, &mixture_net_}) {
      if (*n) out.push_back(&**n);
    }
    return out;
  }

  // Prediction for one record and, when T is a dual, its derivatives with
  // respect to (eta_self, eta_other, alpha).
  template <typename T>
  Behavior behave(const GameRecord& r, const Slots& s, std::size_t j) const {
    const GameMatrix g = perspective(r.game, r.role);
    T es, eo, alpha;
    if constexpr (std::is_same_v<T, double>) {
      es = s.eta_self[j];
      eo = s.eta_other[j];
      alpha = s.alpha[j];
    } else {
      es = T::variable(s.eta_self[j], 0);
      eo = T::variable(s.eta_other[j], 1);
      alpha = T::variable(s.alpha[j], 2);
    }
    if (!desc_.base.use_belief_noise) eo = es;
    if (!desc_.base.use_risk) alpha = T(0.0);
    const UtilityTable<T> table(g, alpha);
    Behavior b;
    T out(0.0);
    switch (desc_.base.structure) {
      case Structure::kLevelK:
        out = level_k_prediction(table, Role::kRow, desc_.base.k, es, eo);
        break;
      case Structure::kQre:
        out = qre_prediction(table, Role::kRow, es, eo, QreOptions{});
        break;
      case Structure::kLevelMixture: {
        const auto preds = level_predictions(table, Role::kRow, es, eo);
        for (int k = 0; k <= kMaxLevel; ++k) {
          out += T(s.weights[j][k]) * preds[k];
          b.level_preds[k] = value_of(preds[k]);
        }
        break;
      }
      case Structure::kNash:
        break;
    }
    b.v = value_of(out);
    if constexpr (!std::is_same_v<T, double>) b.d = out.d;
    return b;
  }

  ModelDescriptor desc_;
  std::optional<Mlp> eta_self_net_, eta_other_net_, mixture_net_;
  Eigen::VectorXd scalars_;
};

inline std::vector<double> predict_all(const auto& model, const Dataset& data) {
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<double> out;
  out.reserve(data.size());
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < idx.size(); start += kChunk) {
    const std::span<const std::size_t> part(idx.data() + start, std::min(kChunk, idx.size() - start));
    const auto p = model.predict(data, part);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

// Adam on mini-batches of the (optionally augmented) training split, with
// validation every eval_interval epochs. Training stops once validation
// error has risen at `patience` consecutive checkpoints; the parameters with
// the lowest validation error are restored. Without a validation split the
// run lasts max_epochs.
template <typename Model>
TrainReport train_model(Model& model, const Dataset& data, const TrainConfig& cfg) {
  if (data.empty()) throw Error(ErrorKind::kEmptyDataset, "cannot train on an empty dataset");
  if (cfg.batch < 1 || cfg.eval_interval < 1 || cfg.patience < 1 || cfg.max_epochs < 0) {
    throw Error(ErrorKind::kInvalidArgument, "training configuration values must be positive");
  }
  const CounterRng master(cfg.seed);
  TrainReport report;
  {
    CounterRng rng = master.split(0);
    auto parts = split_indices(data.size(), cfg.split, rng);
    report.train_idx = std::move(parts[0]);
    report.validation_idx = std::move(parts[1]);
    report.test_idx = std::move(parts[2]);
  }
  if (report.train_idx.empty()) throw Error(ErrorKind::kInsufficientData, "empty training split");
  const Dataset train_raw = subset(data, report.train_idx);
  const Dataset train = cfg.augment ? augment_dataset(train_raw) : train_raw;
  const Dataset validation = subset(data, report.validation_idx);

  Eigen::VectorXd theta = model.flat();
  Adam adam(theta.size(), cfg.adam);
  CounterRng shuffle_rng = master.split(1);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  Eigen::VectorXd best = theta;
  double best_val = std::numeric_limits<double>::infinity();
  double prev_val = std::numeric_limits<double>::infinity();
  int rises = 0;
  Eigen::VectorXd grad;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch)) {
      const std::span<const std::size_t> batch(order.data() + start,
                                               std::min<std::size_t>(static_cast<std::size_t>(cfg.batch), order.size() - start));
      const double loss = model.loss_grad(train, batch, grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw Error(ErrorKind::kDivergence, "training loss became non-finite at epoch " + std::to_string(epoch));
      }
      adam.step(theta, grad);
      model.set_flat(theta);
    }
    report.epochs = epoch;
    if (validation.empty() || epoch % cfg.eval_interval != 0) continue;
    const double val = evaluate(predict_all(model, validation), validation).mse;
    report.validation_history.push_back(val);
    if (val < best_val) {
      best_val = val;
      best = theta;
    }
    rises = val > prev_val ? rises + 1 : 0;
    prev_val = val;
    if (rises >= cfg.patience) {
      report.early_stopped = true;
      break;
    }
  }
  if (!validation.empty() && !report.validation_history.empty()) model.set_flat(best);
  report.train_mse = evaluate(predict_all(model, train_raw), train_raw).mse;
  if (!validation.empty()) report.validation = evaluate(predict_all(model, validation), validation);
  if (!report.test_idx.empty()) {
    const Dataset test = subset(data, report.test_idx);
    report.test = evaluate(predict_all(model, test), test);
  }
  return report;
}

inline TrainReport train_direct_mlp(DirectMlpModel& model, const Dataset& data, const TrainConfig& cfg) {
  CounterRng rng = CounterRng(cfg.seed).split(2);
  model.init(rng);
  return train_model(model, data, cfg);
}

inline TrainReport train_augmented(AugmentedModel& model, const Dataset& data, const TrainConfig& cfg) {
  CounterRng rng = CounterRng(cfg.seed).split(2);
  model.init(rng);
  return train_model(model, data, cfg);
}

// Checkpoints: {"format": "g2x2-checkpoint", "version": 1, "model": label,
// "nets": {slot: net}, "scalars": [...]}.
inline nlohmann::json mlp_to_json(const Mlp& net) {
  const auto& p = net.params();
  return {{"input_dim", net.config().input_dim},
          {"hidden", net.config().hidden},
          {"head", head_name(net.config().head)},
          {"params", std::vector<double>(p.data(), p.data() + p.size())}};
}

inline Mlp mlp_from_json(const nlohmann::json& j) {
  Mlp net({j.at("input_dim").get<int>(), j.at("hidden").get<std::vector<int>>(), parse_head(j.at("head").get<std::string>())});
  const auto p = j.at("params").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(p.size()) != net.num_params()) {
    throw Error(ErrorKind::kParse, "checkpoint parameter count does not match the layer shapes");
  }
  net.params() = Eigen::Map<const Eigen::VectorXd>(p.data(), net.num_params());
  return net;
}

inline nlohmann::json checkpoint_json(const DirectMlpModel& m) {
  return {{"format", "g2x2-checkpoint"}, {"version", 1}, {"model", "MLP"}, {"nets", {{"direct", mlp_to_json(m.net())}}}};
}

inline nlohmann::json checkpoint_json(const AugmentedModel& m) {
  nlohmann::json nets = nlohmann::json::object();
  if (m.eta_self_net()) nets["eta_self"] = mlp_to_json(*m.eta_self_net());
  if (m.eta_other_net()) nets["eta_other"] = mlp_to_json(*m.eta_other_net());
  if (m.mixture_net()) nets["level_mixture"] = mlp_to_json(*m.mixture_net());
  const auto& s = m.scalars();
  return {{"format", "g2x2-checkpoint"},
          {"version", 1},
          {"model", format_model(m.descriptor())},
          {"nets", nets},
          {"scalars", std::vector<double>(s.data(), s.data() + s.size())}};
}

inline void check_checkpoint(const nlohmann::json& j) {
  if (j.value("format", "") != "g2x2-checkpoint" || j.value("version", 0) != 1) {
    throw Error(ErrorKind::kParse, "not a version 1 checkpoint");
  }
}

inline DirectMlpModel direct_from_checkpoint(const nlohmann::json& j) {
  check_checkpoint(j);
  if (j.at("model") != "MLP") throw Error(ErrorKind::kParse, "checkpoint does not hold a direct MLP");
  return DirectMlpModel(mlp_from_json(j.at("nets").at("direct")));
}

inline AugmentedModel augmented_from_checkpoint(const nlohmann::json& j) {
  check_checkpoint(j);
  const ModelDescriptor desc = parse_model(j.at("model").get<std::string>());
  AugmentedModel m(desc, {1});
  const auto& nets = j.at("nets");
  if (desc.slots.eta_self) m.eta_self_net() = mlp_from_json(nets.at("eta_self"));
  if (desc.slots.eta_other) m.eta_other_net() = mlp_from_json(nets.at("eta_other"));
  if (desc.slots.level_mixture) m.mixture_net() = mlp_from_json(nets.at("level_mixture"));
  const auto s = j.at("scalars").get<std::vector<double>>();
  if (s.size() != AugmentedModel::kNumScalars) throw Error(ErrorKind::kParse, "checkpoint scalars malformed");
  m.scalars() = Eigen::Map<const Eigen::VectorXd>(s.data(), AugmentedModel::kNumScalars);
  return m;
}


// A direct MLP or a behavioral model with network slots, chosen by label.
class NeuralModel {
 public:
  NeuralModel(const ModelDescriptor& desc, const std::vector<int>& hidden) : model_(make(desc, hidden)) {}

  static NeuralModel from_checkpoint(const nlohmann::json& j) {
    check_checkpoint(j);
    if (j.at("model") == "MLP") return NeuralModel(direct_from_checkpoint(j));
    return NeuralModel(augmented_from_checkpoint(j));
  }

  TrainReport train(const Dataset& data, const TrainConfig& cfg) {
    return std::visit(
        [&](auto& m) {
          CounterRng rng = CounterRng(cfg.seed).split(2);
          m.init(rng);
          return train_model(m, data, cfg);
        },
        model_);
  }

  std::vector<double> predict(const Dataset& data) const {
    return std::visit([&](const auto& m) { return predict_all(m, data); }, model_);
  }

  nlohmann::json checkpoint() const {
    return std::visit([](const auto& m) { return checkpoint_json(m); }, model_);
  }

  const AugmentedModel* augmented() const { return std::get_if<AugmentedModel>(&model_); }

 private:
  explicit NeuralModel(DirectMlpModel m) : model_(std::move(m)) {}
  explicit NeuralModel(AugmentedModel m) : model_(std::move(m)) {}

  static std::variant<DirectMlpModel, AugmentedModel> make(const ModelDescriptor& desc, const std::vector<int>& hidden) {
    if (desc.direct_mlp) return DirectMlpModel(hidden);
    return AugmentedModel(desc, hidden);
  }

  std::variant<DirectMlpModel, AugmentedModel> model_;
};

// Cross-validation with the same partitions as cross_validate for the same
// seed. Each round trains on its train fold, holding out part of it for
// early stopping in the proportions of cfg.split.
inline CvSummary cross_validate_neural(const ModelDescriptor& desc, const Dataset& data, int rounds,
                                       double test_fraction, std::uint64_t seed, const TrainConfig& cfg,
                                       int threads = 1) {
  if (rounds < 1) throw Error(ErrorKind::kInvalidArgument, "rounds must be positive");
  const double fit_total = cfg.split[0] + cfg.split[1];
  if (!(fit_total > 0)) throw Error(ErrorKind::kInvalidArgument, "training split fractions must be positive");
  const CounterRng master(seed);
  std::vector<CvRound> out(static_cast<std::size_t>(rounds));
  parallel_for(out.size(), threads, [&](std::size_t r) {
    CounterRng rng = master.split(r);
    const std::array<double, 2> fractions{1.0 - test_fraction, test_fraction};
    const auto parts = split_indices(data.size(), fractions, rng);
    if (parts[0].empty() || parts[1].empty()) throw Error(ErrorKind::kInsufficientData, "empty train or test fold");
    const Dataset train = subset(data, parts[0]), test = subset(data, parts[1]);
    TrainConfig round_cfg = cfg;
    round_cfg.seed = rng.next_u64();
    round_cfg.split = {cfg.split[0] / fit_total, cfg.split[1] / fit_total, 0.0};
    NeuralModel model(desc, cfg.hidden);
    const TrainReport report = model.train(train, round_cfg);
    CvRound cv;
    if (const AugmentedModel* aug = model.augmented()) cv.model = aug->scalar_model();
    cv.train_mse = report.train_mse;
    cv.test = evaluate(model.predict(test), test);
    out[r] = std::move(cv);
  });
  return summarize_rounds(std::move(out));
}

}  // namespace g2x2

#endif  // G2X2_NEURAL_HPP_
