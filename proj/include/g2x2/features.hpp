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

#ifndef G2X2_FEATURES_HPP_
#define G2X2_FEATURES_HPP_

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "g2x2/error.hpp"
#include "g2x2/game.hpp"
#include "g2x2/solvers.hpp"

namespace g2x2 {

inline constexpr int kNumFeatures = 18;

enum class Feature : std::uint8_t {
  kDominantSolvableSelf,
  kDominantSolvableOther,
  kDissimilaritySelf,
  kDissimilarityOther,
  kLevelIterRational,
  kNumPsne,
  kNumMsne,
  kPayoffDomEquilibrium,
  kPayoffDomNonEquilibrium,
  kParetoDomEquilibrium,
  kPureMotives,
  kMaxSelf,
  kMaxOther,
  kPayoffVarSelf,
  kPayoffVarOther,
  kNonZeroSum,
  kInequality,
  kAsymmetry,
};

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "DominantSolvable_self", "DominantSolvable_other", "Dissimilarity_self", "Dissimilarity_other",
    "LevelIterRational",     "NumPSNE",                "NumMSNE",            "PayoffDomEquilibrium",
    "PayoffDomNonEquilibrium", "ParetoDomEquilibrium", "PureMotives",        "Max_self",
    "Max_other",             "PayoffVar_self",         "PayoffVar_other",    "NonZeroSum",
    "Inequality",            "Asymmetry",
};

inline std::string_view feature_name(Feature f) { return kFeatureNames[static_cast<int>(f)]; }

inline Feature parse_feature(std::string_view name) {
  for (int i = 0; i < kNumFeatures; ++i) {
    if (kFeatureNames[i] == name) return static_cast<Feature>(i);
  }
  throw Error(ErrorKind::kParse, "unknown feature '" + std::string(name) + "'");
}

struct FeatureVector {
  std::array<double, kNumFeatures> values{};

  double operator[](Feature f) const { return values[static_cast<int>(f)]; }
  double& operator[](Feature f) { return values[static_cast<int>(f)]; }
};

namespace detail {

// One action weakly dominates the other, not both comparisons equal.
inline bool dominance_solvable(int u1, int u2, int v1, int v2) {
  if (u1 == v1 && u2 == v2) return false;
  return (u1 >= v1 && u2 >= v2) || (u1 <= v1 && u2 <= v2);
}

inline std::array<double, 4> average_ranks(const std::array<int, 4>& v) {
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    int below = 0, equal = 0;
    for (int j = 0; j < 4; ++j) {
      below += v[j] < v[i];
      equal += v[j] == v[i];
    }
    r[i] = below + 0.5 * (equal + 1);
  }
  return r;
}

}  // namespace detail

// Spearman correlation of the two players' payoffs over the four cells,
// using average ranks; 0 when either player's payoffs are constant.
inline double payoff_rank_correlation(const GameMatrix& g) {
  const auto rx = detail::average_ranks(g.row), ry = detail::average_ranks(g.col);
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (rx[i] - 2.5) * (ry[i] - 2.5);
    sxx += (rx[i] - 2.5) * (rx[i] - 2.5);
    syy += (ry[i] - 2.5) * (ry[i] - 2.5);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline FeatureVector compute_features(const GameMatrix& g) {
  const auto [a, b, c, d] = g.row;
  const auto [x, y, z, w] = g.col;
  FeatureVector f;
  f[Feature::kDominantSolvableSelf] = detail::dominance_solvable(a, b, c, d);
  f[Feature::kDominantSolvableOther] = detail::dominance_solvable(x, z, y, w);

  const double mu_up = (a + b) / 2.0, mu_down = (c + d) / 2.0;
  const double mu_left = (x + z) / 2.0, mu_right = (y + w) / 2.0;
  f[Feature::kDissimilaritySelf] = std::abs(a - c) / 2.0 + std::abs(b - d) / 2.0 - std::fabs(mu_up - mu_down);
  f[Feature::kDissimilarityOther] = std::abs(x - y) / 2.0 + std::abs(z - w) / 2.0 - std::fabs(mu_left - mu_right);
  f[Feature::kLevelIterRational] = iterative_rationality_level(g);

  const auto psne = pure_nash(g);
  f[Feature::kNumPsne] = static_cast<double>(psne.size());
  f[Feature::kNumMsne] = mixed_nash(g).equilibrium.has_value() ? 1.0 : 0.0;

  const int max_row = *std::max_element(g.row.begin(), g.row.end());
  const int max_col = *std::max_element(g.col.begin(), g.col.end());
  auto cell_of = [](const PureEquilibrium& e) { return GameMatrix::cell(e.row_action, e.col_action); };
  bool dom_eq = false;
  for (const auto& e : psne) dom_eq |= g.row[cell_of(e)] == max_row && g.col[cell_of(e)] == max_col;
  bool dom_non_eq = false;
  for (int cell = 0; cell < 4; ++cell) {
    if (g.row[cell] != max_row || g.col[cell] != max_col) continue;
    const bool is_eq = std::any_of(psne.begin(), psne.end(), [&](const PureEquilibrium& e) { return cell_of(e) == cell; });
    dom_non_eq |= !is_eq;
  }
  f[Feature::kPayoffDomEquilibrium] = dom_eq;
  f[Feature::kPayoffDomNonEquilibrium] = dom_non_eq;

  bool pareto = psne.size() == 1;
  for (std::size_t i = 0; i < psne.size() && psne.size() > 1 && !pareto; ++i) {
    const int ci = cell_of(psne[i]);
    bool beats_all = true;
    for (std::size_t j = 0; j < psne.size(); ++j) {
      if (i == j) continue;
      const int cj = cell_of(psne[j]);
      const bool weak = g.row[ci] >= g.row[cj] && g.col[ci] >= g.col[cj];
      const bool strict = g.row[ci] > g.row[cj] || g.col[ci] > g.col[cj];
      beats_all &= weak && strict;
    }
    pareto = beats_all;
  }
  f[Feature::kParetoDomEquilibrium] = pareto;
  f[Feature::kPureMotives] = std::fabs(std::fabs(payoff_rank_correlation(g)) - 1.0) < 1e-12;

  f[Feature::kMaxSelf] = max_row;
  f[Feature::kMaxOther] = max_col;
  f[Feature::kPayoffVarSelf] =
      ((a - mu_up) * (a - mu_up) + (b - mu_up) * (b - mu_up) + (c - mu_down) * (c - mu_down) + (d - mu_down) * (d - mu_down)) / 4.0;
  f[Feature::kPayoffVarOther] = ((x - mu_left) * (x - mu_left) + (z - mu_left) * (z - mu_left) +
                                 (y - mu_right) * (y - mu_right) + (w - mu_right) * (w - mu_right)) / 4.0;
  f[Feature::kNonZeroSum] = std::abs(a - c + x - z) + std::abs(a - b + x - y) + std::abs(c - d + z - w) + std::abs(b - d + y - w);
  f[Feature::kInequality] = max_row - max_col;
  f[Feature::kAsymmetry] = (std::abs(a - x) + std::abs(b - z) + std::abs(c - y) + std::abs(d - w)) / 4.0;
  return f;
}

inline Eigen::MatrixXd feature_matrix(std::span<const GameMatrix> games) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(games.size()), kNumFeatures);
  for (std::size_t i = 0; i < games.size(); ++i) {
    const FeatureVector f = compute_features(games[i]);
    for (int j = 0; j < kNumFeatures; ++j) X(static_cast<Eigen::Index>(i), j) = f.values[j];
  }
  return X;
}

inline void write_features_csv(std::ostream& out, std::span<const GameMatrix> games) {
  out << "id";
  for (auto name : kFeatureNames) out << ',' << name;
  out << '\n';
  char buf[32];
  for (const GameMatrix& g : games) {
    out << g.id;
    for (double v : compute_features(g).values) {
      std::snprintf(buf, sizeof(buf), ",%.10g", v);
      out << buf;
    }
    out << '\n';
  }
}

struct NormalizationStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

inline Eigen::MatrixXd apply_normalization(const Eigen::MatrixXd& X, const NormalizationStats& s) {
  return (X.rowwise() - s.mean.transpose()).array().rowwise() / s.sd.transpose().array();
}

// Column z-scores with the population sd; constant columns get sd 1 and
// map to zero.
inline std::pair<Eigen::MatrixXd, NormalizationStats> normalize_features(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) throw Error(ErrorKind::kInsufficientData, "normalization needs at least two rows");
  NormalizationStats s;
  s.mean = X.colwise().mean().transpose();
  s.sd.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - s.mean[j]).square().mean();
    s.sd[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return {apply_normalization(X, s), s};
}

// Linear score on normalized features: intercept + sum_j w_j z_j.
struct ComplexityIndex {
  std::array<double, kNumFeatures> weights{};
  double intercept = 0.0;
  NormalizationStats stats;

  double operator()(const GameMatrix& g) const {
    const FeatureVector f = compute_features(g);
    double out = intercept;
    for (int j = 0; j < kNumFeatures; ++j) out += weights[j] * (f.values[j] - stats.mean[j]) / stats.sd[j];
    return out;
  }
};

// The published sparse weights for negated eta_self, paired with
// normalization statistics from the caller's game set.
inline ComplexityIndex published_index(NormalizationStats stats) {
  ComplexityIndex idx;
  idx.weights[static_cast<int>(Feature::kDissimilaritySelf)] = 0.28;
  idx.weights[static_cast<int>(Feature::kLevelIterRational)] = 0.38;
  idx.weights[static_cast<int>(Feature::kPayoffDomEquilibrium)] = -0.80;
  idx.weights[static_cast<int>(Feature::kMaxSelf)] = 0.30;
  idx.weights[static_cast<int>(Feature::kPayoffVarSelf)] = 0.40;
  idx.weights[static_cast<int>(Feature::kInequality)] = 0.85;
  idx.weights[static_cast<int>(Feature::kAsymmetry)] = -0.09;
  idx.intercept = -9.28;
  idx.stats = std::move(stats);
  return idx;
}

inline nlohmann::json index_to_json(const ComplexityIndex& idx) {
  nlohmann::json weights = nlohmann::json::object(), mean = nlohmann::json::object(), sd = nlohmann::json::object();
  for (int j = 0; j < kNumFeatures; ++j) {
    const std::string name(kFeatureNames[j]);
    weights[name] = idx.weights[j];
    mean[name] = idx.stats.mean[j];
    sd[name] = idx.stats.sd[j];
  }
  return {{"weights", weights}, {"intercept", idx.intercept}, {"normalization", {{"mean", mean}, {"sd", sd}}}};
}

inline ComplexityIndex index_from_json(const nlohmann::json& j) {
  ComplexityIndex idx;
  idx.stats.mean.resize(kNumFeatures);
  idx.stats.sd.resize(kNumFeatures);
  try {
    for (int k = 0; k < kNumFeatures; ++k) {
      const std::string name(kFeatureNames[k]);
      idx.weights[k] = j.at("weights").at(name).get<double>();
      idx.stats.mean[k] = j.at("normalization").at("mean").at(name).get<double>();
      idx.stats.sd[k] = j.at("normalization").at("sd").at(name).get<double>();
    }
    idx.intercept = j.at("intercept").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("index file: ") + e.what());
  }
  for (int k = 0; k < kNumFeatures; ++k) {
    if (!(idx.stats.sd[k] > 0)) throw Error(ErrorKind::kRange, "index file: sd must be positive");
  }
  return idx;
}

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Sample Pearson correlation with a two-sided p-value from the t transform
// on n - 2 degrees of freedom.
inline Correlation pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kInvalidArgument, "series lengths differ");
  if (x.size() < 3) throw Error(ErrorKind::kInsufficientData, "correlation needs at least three points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) throw Error(ErrorKind::kZeroVariance, "a series is constant");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) throw Error(ErrorKind::kZeroVariance, "a series is constant");
  Correlation c;
  c.n = x.size();
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::fabs(c.r) >= 1.0) {
    c.p_value = 0.0;
    return c;
  }
  const double df = n - 2.0;
  const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
  const boost::math::students_t dist(df);
  c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return c;
}

}  // namespace g2x2

#endif  // G2X2_FEATURES_HPP_
