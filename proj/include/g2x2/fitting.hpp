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

#ifndef G2X2_FITTING_HPP_
#define G2X2_FITTING_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/data.hpp"
#include "g2x2/error.hpp"
#include "g2x2/nelder_mead.hpp"
#include "g2x2/parallel.hpp"
#include "g2x2/rng.hpp"

namespace g2x2 {

struct Metrics {
  double mse = 0.0;
  double r2 = 0.0;
};

// MSE and R^2 = 1 - SS_res / SS_tot. When every target is equal, R^2 is 1
// for an exact fit and 0 otherwise.
inline Metrics evaluate(std::span<const double> predictions, std::span<const double> targets) {
  if (targets.empty()) throw Error(ErrorKind::kEmptyDataset, "cannot evaluate on an empty dataset");
  if (predictions.size() != targets.size()) throw Error(ErrorKind::kInvalidArgument, "one prediction per record required");
  const double n = static_cast<double>(targets.size());
  double mean = 0.0;
  for (double y : targets) mean += y;
  mean /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ss_res += (targets[i] - predictions[i]) * (targets[i] - predictions[i]);
    ss_tot += (targets[i] - mean) * (targets[i] - mean);
  }
  Metrics m;
  m.mse = ss_res / n;
  m.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return m;
}

inline std::vector<double> targets_of(const Dataset& data) {
  std::vector<double> y;
  y.reserve(data.size());
  for (const GameRecord& r : data) y.push_back(r.p_first);
  return y;
}

inline Metrics evaluate(std::span<const double> predictions, const Dataset& data) {
  return evaluate(predictions, targets_of(data));
}

// Predictions drawn i.i.d. uniform on [0, 1], one per record.
inline Metrics random_baseline(const Dataset& data, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> p(data.size());
  for (double& v : p) v = rng.uniform();
  return evaluate(p, data);
}

inline Metrics constant_baseline(const Dataset& data, double value = 0.5) {
  return evaluate(std::vector<double>(data.size(), value), data);
}

struct CompletenessBounds {
  double random_mse = 0.0;
  double random_r2 = 0.0;
  double upper_mse = 0.0;
  double upper_r2 = 1.0;
};

// Accuracy rescaled so the random baseline scores 0 and the upper bound
// 100: the mean of the MSE- and R^2-based scores, or the R^2 score alone.
inline double completeness(const Metrics& model, const CompletenessBounds& b, bool r2_only = false) {
  if (!(b.upper_mse < b.random_mse) || !(b.upper_r2 > b.random_r2)) {
    throw Error(ErrorKind::kInvalidArgument, "upper bound must beat the random baseline");
  }
  const double c_mse = (b.random_mse - model.mse) / (b.random_mse - b.upper_mse);
  const double c_r2 = (model.r2 - b.random_r2) / (b.upper_r2 - b.random_r2);
  return 100.0 * (r2_only ? c_r2 : 0.5 * (c_mse + c_r2));
}

// A behavioral spec with concrete parameters. For level mixtures the
// weights live in spec.level_weights.
struct FittedModel {
  ModelSpec spec;
  BehaviorParams params;
};

inline double predict_record(const FittedModel& m, const GameRecord& r, const QreOptions& qre = {}) {
  return predict(m.spec, m.params, r.game, r.role, qre);
}

inline std::vector<double> predict_dataset(const FittedModel& m, const Dataset& data, const QreOptions& qre = {}) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict_record(m, data[i], qre);
  return out;
}

// Free parameters of a spec in unconstrained coordinates: log eta_self,
// log eta_other (belief noise), log alpha (risk), then three mixture logits
// relative to level 0.
struct ParamLayout {
  bool eta_self = false;
  bool eta_other = false;
  bool alpha = false;
  bool mixture = false;

  static ParamLayout of(const ModelSpec& spec) {
    if (spec.structure == Structure::kNash) return {};
    return {true, spec.use_belief_noise, spec.use_risk, spec.structure == Structure::kLevelMixture};
  }

  std::size_t size() const {
    return static_cast<std::size_t>(eta_self) + eta_other + alpha + (mixture ? kMaxLevel : 0);
  }

  std::vector<double> pack(const FittedModel& m) const {
    auto safe_log = [](double v) { return std::log(std::max(v, 1e-12)); };
    std::vector<double> x;
    if (eta_self) x.push_back(safe_log(m.params.eta_self));
    if (eta_other) x.push_back(safe_log(m.params.eta_other));
    if (alpha) x.push_back(safe_log(m.params.alpha));
    if (mixture) {
      const auto w = m.spec.level_weights.value_or(std::array<double, kMaxLevel + 1>{0.25, 0.25, 0.25, 0.25});
      for (int k = 1; k <= kMaxLevel; ++k) x.push_back(safe_log(w[k]) - safe_log(w[0]));
    }
    return x;
  }

  FittedModel unpack(const ModelSpec& spec, std::span<const double> x) const {
    FittedModel m{spec, {}};
    std::size_t i = 0;
    if (eta_self) m.params.eta_self = std::exp(x[i++]);
    m.params.eta_other = eta_other ? std::exp(x[i++]) : m.params.eta_self;
    m.params.alpha = alpha ? std::exp(x[i++]) : 0.0;
    if (mixture) {
      std::array<double, kMaxLevel + 1> logits{0.0, x[i], x[i + 1], x[i + 2]};
      const double hi = *std::max_element(logits.begin(), logits.end());
      double sum = 0.0;
      for (double& l : logits) sum += (l = std::exp(l - hi));
      for (double& l : logits) l /= sum;
      m.spec.level_weights = logits;
    }
    return m;
  }
};

struct FitOptions {
  int starts = 8;
  // Standard deviation of the start perturbations in log space.
  double start_spread = 1.0;
  NelderMeadOptions nm;
  QreOptions qre;
  int threads = 1;
};

struct FitResult {
  FittedModel model;
  double train_mse = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective at the starting point of each start.
  std::vector<double> start_objectives;
  std::vector<double> final_objectives;
};

inline FittedModel default_init(const ModelSpec& spec) {
  FittedModel m{spec, {0.1, 0.1, 0.01}};
  if (spec.structure == Structure::kLevelMixture && !m.spec.level_weights) {
    m.spec.level_weights = std::array<double, kMaxLevel + 1>{0.25, 0.25, 0.25, 0.25};
  }
  return m;
}

inline double training_mse(const FittedModel& m, const Dataset& train, const QreOptions& qre = {}) {
  double ss = 0.0;
  for (const GameRecord& r : train) {
    const double e = predict_record(m, r, qre) - r.p_first;
    ss += e * e;
  }
  return ss / static_cast<double>(train.size());
}

// Multi-start Nelder-Mead on the training MSE. Start 0 begins at `init`,
// the rest at log-space perturbations drawn from independent streams.
inline FitResult nelder_mead_fit(const ModelSpec& spec, const Dataset& train, const FittedModel& init,
                                 std::uint64_t seed, const FitOptions& opt = {}) {
  validate_spec(spec);
  if (train.empty()) throw Error(ErrorKind::kEmptyDataset, "cannot fit on an empty dataset");
  const ParamLayout layout = ParamLayout::of(spec);
  FittedModel start_model = init;
  start_model.spec = spec;
  if (layout.mixture && !start_model.spec.level_weights) start_model.spec.level_weights = default_init(spec).spec.level_weights;
  const std::vector<double> x0 = layout.pack(start_model);

  auto objective = [&](std::span<const double> x) { return training_mse(layout.unpack(spec, x), train, opt.qre); };
  const int starts = layout.size() == 0 ? 1 : std::max(opt.starts, 1);
  std::vector<NelderMeadResult> results(static_cast<std::size_t>(starts));
  std::vector<double> initial(static_cast<std::size_t>(starts));
  const CounterRng master(seed);
  parallel_for(results.size(), opt.threads, [&](std::size_t s) {
    std::vector<double> x = x0;
    if (s > 0) {
      CounterRng rng = master.split(s);
      for (double& v : x) v += opt.start_spread * rng.normal();
    }
    initial[s] = objective(x);
    results[s] = nelder_mead([&](const std::vector<double>& v) { return objective(v); }, x, opt.nm);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (results[s].f < results[best].f) best = s;
  }
  FitResult out;
  out.model = layout.unpack(spec, results[best].x);
  out.train_mse = results[best].f;
  out.iterations = results[best].iterations;
  out.converged = results[best].converged;
  out.start_objectives = initial;
  for (const auto& r : results) out.final_objectives.push_back(r.f);
  return out;
}

inline FitResult nelder_mead_fit(const ModelSpec& spec, const Dataset& train, std::uint64_t seed,
                                 const FitOptions& opt = {}) {
  return nelder_mead_fit(spec, train, default_init(spec), seed, opt);
}

// Shuffled index partition into consecutive blocks with the given
// fractions; the last block takes the remainder.
inline std::vector<std::vector<std::size_t>> split_indices(std::size_t n, std::span<const double> fractions,
                                                           CounterRng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<std::vector<std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    const std::size_t count = f + 1 == fractions.size()
                                  ? n - start
                                  : std::min(n - start, static_cast<std::size_t>(std::llround(fractions[f] * n)));
    out.emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(start + count));
    start += count;
  }
  return out;
}

inline Dataset subset(const Dataset& data, std::span<const std::size_t> idx) {
  Dataset out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(data[i]);
  return out;
}

struct CvRound {
  FittedModel model;
  double train_mse = 0.0;
  Metrics test;
};

struct CvSummary {
  double mean_mse = 0.0;
  double se_mse = 0.0;
  double mean_r2 = 0.0;
  double se_r2 = 0.0;
  std::vector<CvRound> rounds;
};

// Mean and standard error (sample sd / sqrt(n)).
inline std::pair<double, double> mean_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

inline CvSummary summarize_rounds(std::vector<CvRound> rounds) {
  std::vector<double> mse, r2;
  for (const CvRound& r : rounds) {
    mse.push_back(r.test.mse);
    r2.push_back(r.test.r2);
  }
  CvSummary s;
  std::tie(s.mean_mse, s.se_mse) = mean_se(mse);
  std::tie(s.mean_r2, s.se_r2) = mean_se(r2);
  s.rounds = std::move(rounds);
  return s;
}

// Repeated random train/test partitions over records. Round r uses stream r
// of the seed for both its partition and its multi-start fit, so rounds can
// run in parallel with identical results.
inline CvSummary cross_validate(const ModelSpec& spec, const Dataset& data, int rounds, double test_fraction,
                                std::uint64_t seed, const FitOptions& opt = {}) {
  if (rounds < 1) throw Error(ErrorKind::kInvalidArgument, "rounds must be positive");
  const CounterRng master(seed);
  std::vector<CvRound> out(static_cast<std::size_t>(rounds));
  FitOptions inner = opt;
  inner.threads = 1;
  parallel_for(out.size(), opt.threads, [&](std::size_t r) {
    CounterRng rng = master.split(r);
    const std::array<double, 2> fractions{1.0 - test_fraction, test_fraction};
    const auto parts = split_indices(data.size(), fractions, rng);
    if (parts[0].empty() || parts[1].empty()) throw Error(ErrorKind::kInsufficientData, "empty train or test fold");
    const Dataset train = subset(data, parts[0]), test = subset(data, parts[1]);
    const FitResult fit = nelder_mead_fit(spec, train, rng.next_u64(), inner);
    out[r] = {fit.model, fit.train_mse, evaluate(predict_dataset(fit.model, test, opt.qre), test)};
  });
  return summarize_rounds(std::move(out));
}

// Uniform random predictions scored on the cross_validate test folds.
inline CvSummary random_baseline_cv(const Dataset& data, int rounds, double test_fraction, std::uint64_t seed) {
  if (rounds < 1) throw Error(ErrorKind::kInvalidArgument, "rounds must be positive");
  const CounterRng master(seed);
  std::vector<CvRound> out(static_cast<std::size_t>(rounds));
  for (std::size_t r = 0; r < out.size(); ++r) {
    CounterRng rng = master.split(r);
    const std::array<double, 2> fractions{1.0 - test_fraction, test_fraction};
    const auto parts = split_indices(data.size(), fractions, rng);
    if (parts[1].empty()) throw Error(ErrorKind::kInsufficientData, "empty test fold");
    out[r].test = random_baseline(subset(data, parts[1]), rng.next_u64());
  }
  return summarize_rounds(std::move(out));
}

struct CvTableRow {
  std::string model;
  CvSummary summary;
  bool r2_only = false;
};

// One row per model: mean and SE of test MSE and R^2 plus completeness,
// written as NA without bounds.
inline void write_cv_table(std::ostream& out, std::span<const CvTableRow> rows,
                           const std::optional<CompletenessBounds>& bounds) {
  out << "model,mse,se_mse,r2,se_r2,completeness\n";
  char buf[160];
  for (const CvTableRow& row : rows) {
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f,", row.summary.mean_mse, row.summary.se_mse,
                  row.summary.mean_r2, row.summary.se_r2);
    out << row.model << buf;
    if (bounds) {
      std::snprintf(buf, sizeof(buf), "%.2f\n", completeness({row.summary.mean_mse, row.summary.mean_r2}, *bounds, row.r2_only));
      out << buf;
    } else {
      out << "NA\n";
    }
  }
}

}  // namespace g2x2

#endif  // G2X2_FITTING_HPP_
