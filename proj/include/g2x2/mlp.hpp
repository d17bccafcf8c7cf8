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

#ifndef G2X2_MLP_HPP_
#define G2X2_MLP_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "g2x2/error.hpp"
#include "g2x2/game.hpp"
#include "g2x2/rng.hpp"

namespace g2x2 {

enum class Head : std::uint8_t {
  // Softmax over two logits; output (p, 1 - p).
  kProbability,
  // Softplus of one logit, floored away from zero.
  kPositive,
  // Softmax over four logits.
  kSimplex4,
};

inline std::string_view head_name(Head h) {
  switch (h) {
    case Head::kProbability: return "probability";
    case Head::kPositive: return "positive";
    case Head::kSimplex4: return "simplex4";
  }
  return "?";
}

inline Head parse_head(std::string_view s) {
  if (s == "probability") return Head::kProbability;
  if (s == "positive") return Head::kPositive;
  if (s == "simplex4") return Head::kSimplex4;
  throw Error(ErrorKind::kParse, "unknown head '" + std::string(s) + "'");
}

inline int head_dim(Head h) { return h == Head::kProbability ? 2 : h == Head::kPositive ? 1 : 4; }

inline constexpr int kGameInputDim = 8;
inline constexpr double kMinPositive = 1e-12;

struct MlpConfig {
  int input_dim = kGameInputDim;
  std::vector<int> hidden = {300, 300, 300};
  Head head = Head::kProbability;
};

// The 8 payoffs (a, b, c, d, x, y, z, w) divided by 50.
inline Eigen::VectorXd game_input(const GameMatrix& g) {
  Eigen::VectorXd v(kGameInputDim);
  for (int i = 0; i < 4; ++i) {
    v[i] = g.row[i] / static_cast<double>(kMaxPayoff);
    v[4 + i] = g.col[i] / static_cast<double>(kMaxPayoff);
  }
  return v;
}

inline double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : 1.0 - 1.0 / (1.0 + std::exp(z)); }

inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Feed-forward network with sigmoid hidden layers. All weights and biases
// live in one flat vector: per layer the weight matrix (column-major,
// out x in) followed by the bias.
class Mlp {
 public:
  Mlp() = default;

  explicit Mlp(MlpConfig config) : config_(std::move(config)) {
    if (config_.input_dim < 1) throw Error(ErrorKind::kInvalidArgument, "input_dim must be positive");
    int in = config_.input_dim;
    std::size_t offset = 0;
    auto add = [&](int out) {
      if (out < 1) throw Error(ErrorKind::kInvalidArgument, "layer widths must be positive");
      layers_.push_back({in, out, offset});
      offset += static_cast<std::size_t>(in) * out + out;
      in = out;
    };
    for (int h : config_.hidden) add(h);
    add(head_dim(config_.head));
    params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(offset));
  }

  // Symmetric uniform weights with bound 1/sqrt(fan_in); zero biases.
  void init_uniform(CounterRng& rng) {
    params_.setZero();
    for (const Layer& l : layers_) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
      auto w = weights(l);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = bound * (2.0 * rng.uniform() - 1.0);
    }
  }

  const MlpConfig& config() const { return config_; }
  int output_dim() const { return head_dim(config_.head); }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  Eigen::Index num_params() const { return params_.size(); }

  // Activations retained for the backward pass.
  struct Cache {
    std::vector<Eigen::MatrixXd> acts;  // input, then each hidden layer
    Eigen::MatrixXd logits;
    Eigen::MatrixXd out;
  };

  // Inputs are columns; returns head outputs as columns.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const {
    Cache local;
    Cache& c = cache ? *cache : local;
    c.acts.assign(1, x);
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
      Eigen::MatrixXd z = weights(layers_[i]) * c.acts.back();
      z.colwise() += bias(layers_[i]);
      c.acts.push_back(z.unaryExpr([](double v) { return sigmoid(v); }));
    }
    c.logits = weights(layers_.back()) * c.acts.back();
    c.logits.colwise() += bias(layers_.back());
    c.out = apply_head(c.logits);
    return c.out;
  }

  Eigen::VectorXd predict(const Eigen::VectorXd& x) const { return forward(x).col(0); }

  // Gradient of a loss with respect to all parameters, given dL/d(head
  // output) for every column of the cached batch.
  Eigen::VectorXd backward(const Cache& c, const Eigen::MatrixXd& d_out) const {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params_.size());
    Eigen::MatrixXd dz = head_backward(c, d_out);
    for (std::size_t li = layers_.size(); li-- > 0;) {
      const Layer& l = layers_[li];
      const Eigen::MatrixXd& a = c.acts[li];
      Eigen::Map<Eigen::MatrixXd>(grad.data() + l.offset, l.out, l.in).noalias() = dz * a.transpose();
      Eigen::Map<Eigen::VectorXd>(grad.data() + l.offset + static_cast<std::size_t>(l.out) * l.in, l.out) =
          dz.rowwise().sum();
      if (li == 0) break;
      Eigen::MatrixXd da = weights(l).transpose() * dz;
      dz = da.array() * a.array() * (1.0 - a.array());
    }
    return grad;
  }

 private:
  struct Layer {
    int in;
    int out;
    std::size_t offset;
  };

  Eigen::Map<Eigen::MatrixXd> weights(const Layer& l) {
    return {params_.data() + l.offset, l.out, l.in};
  }
  Eigen::Map<const Eigen::MatrixXd> weights(const Layer& l) const {
    return {params_.data() + l.offset, l.out, l.in};
  }
  Eigen::Map<const Eigen::VectorXd> bias(const Layer& l) const {
    return {params_.data() + l.offset + static_cast<std::size_t>(l.out) * l.in, l.out};
  }

  Eigen::MatrixXd apply_head(const Eigen::MatrixXd& z) const {
    if (config_.head == Head::kPositive) {
      return z.unaryExpr([](double v) { return softplus(v) + kMinPositive; });
    }
    Eigen::MatrixXd out(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const Eigen::VectorXd e = (z.col(j).array() - z.col(j).maxCoeff()).exp();
      out.col(j) = e / e.sum();
    }
    return out;
  }

  Eigen::MatrixXd head_backward(const Cache& c, const Eigen::MatrixXd& d_out) const {
    if (config_.head == Head::kPositive) {
      return d_out.array() * c.logits.unaryExpr([](double v) { return sigmoid(v); }).array();
    }
    // Softmax Jacobian: dz_i = s_i (g_i - sum_j s_j g_j).
    Eigen::MatrixXd dz(c.out.rows(), c.out.cols());
    for (Eigen::Index j = 0; j < c.out.cols(); ++j) {
      const double dot = c.out.col(j).dot(d_out.col(j));
      dz.col(j) = c.out.col(j).array() * (d_out.col(j).array() - dot);
    }
    return dz;
  }

  MlpConfig config_;
  std::vector<Layer> layers_;
  Eigen::VectorXd params_;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index n, AdamConfig cfg) : cfg_(cfg), m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

  void step(Eigen::Ref<Eigen::VectorXd> theta, const Eigen::VectorXd& grad) {
    ++t_;
    m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
    v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    theta.array() -= cfg_.lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + cfg_.eps);
  }

 private:
  AdamConfig cfg_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  Eigen::Index worst_index = -1;
  int coordinates = 0;
};

// Compares `analytic` with central differences of `loss` on `coordinates`
// randomly chosen parameter indices (all of them if fewer). Relative error
// is |a - n| / max(|a|, |n|, 1e-8).
inline GradCheckResult grad_check(const std::function<double(const Eigen::VectorXd&)>& loss, Eigen::VectorXd theta,
                                  const Eigen::VectorXd& analytic, int coordinates, CounterRng& rng,
                                  double step = 1e-5) {
  const Eigen::Index n = theta.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(std::span<Eigen::Index>(idx));
  if (coordinates < n) idx.resize(static_cast<std::size_t>(coordinates));
  GradCheckResult res;
  for (Eigen::Index i : idx) {
    const double saved = theta[i];
    theta[i] = saved + step;
    const double up = loss(theta);
    theta[i] = saved - step;
    const double down = loss(theta);
    theta[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double err = std::fabs(analytic[i] - numeric) / std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-8});
    if (err > res.max_rel_error || res.worst_index < 0) {
      res.max_rel_error = std::max(res.max_rel_error, err);
      res.worst_index = i;
    }
    ++res.coordinates;
  }
  return res;
}

}  // namespace g2x2

#endif  // G2X2_MLP_HPP_
