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

#ifndef G2X2_PSYCHOMETRIC_HPP_
#define G2X2_PSYCHOMETRIC_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/data.hpp"
#include "g2x2/error.hpp"
#include "g2x2/nelder_mead.hpp"

namespace g2x2 {

// EU(first) - EU(second) of a level-1 player (uniform belief, linear
// utility) in the record's role.
inline double level1_eu_gap(const GameMatrix& g, Role role) {
  const auto [ea, eb] = expected_utilities(g, role, 0.5, 0.0);
  return ea - eb;
}

struct PsychometricBin {
  int group = 0;  // 0: split value at or below the median, 1: above
  int bin = 0;
  double eu_lo = 0.0, eu_hi = 0.0;
  double mean_eu = 0.0;
  double mean_p = 0.0;
  std::optional<double> se;
  int count = 0;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorKind::kEmptyDataset, "median of an empty series");
  return detail::median(std::move(v));
}

// Splits records at the median of `split_values` and bins each group's
// level-1 EU gaps into n_bins equal-width bins over the common range.
// Empty bins are omitted; the SE needs at least two records.
inline std::vector<PsychometricBin> psychometric_bins(const Dataset& records, std::span<const double> split_values,
                                                      int n_bins) {
  if (records.empty()) throw Error(ErrorKind::kEmptyDataset, "no records");
  if (split_values.size() != records.size()) throw Error(ErrorKind::kInvalidArgument, "one split value per record");
  if (n_bins < 1) throw Error(ErrorKind::kInvalidArgument, "n_bins must be positive");
  const double med = median_of({split_values.begin(), split_values.end()});
  std::vector<double> gap(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) gap[i] = level1_eu_gap(records[i].game, records[i].role);
  const double lo = *std::min_element(gap.begin(), gap.end());
  const double hi = *std::max_element(gap.begin(), gap.end());
  const double width = hi > lo ? (hi - lo) / n_bins : 1.0;

  struct Acc {
    int n = 0;
    double eu = 0, p = 0, p2 = 0;
  };
  std::vector<Acc> acc(2 * static_cast<std::size_t>(n_bins));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int group = split_values[i] > med ? 1 : 0;
    const int bin = std::min(n_bins - 1, static_cast<int>((gap[i] - lo) / width));
    Acc& a = acc[static_cast<std::size_t>(group * n_bins + bin)];
    ++a.n;
    a.eu += gap[i];
    a.p += records[i].p_first;
    a.p2 += records[i].p_first * records[i].p_first;
  }
  std::vector<PsychometricBin> out;
  for (int group = 0; group < 2; ++group) {
    for (int bin = 0; bin < n_bins; ++bin) {
      const Acc& a = acc[static_cast<std::size_t>(group * n_bins + bin)];
      if (a.n == 0) continue;
      PsychometricBin b;
      b.group = group;
      b.bin = bin;
      b.eu_lo = lo + bin * width;
      b.eu_hi = lo + (bin + 1) * width;
      b.mean_eu = a.eu / a.n;
      b.mean_p = a.p / a.n;
      b.count = a.n;
      if (a.n >= 2) {
        const double var = std::max(0.0, (a.p2 - a.n * b.mean_p * b.mean_p) / (a.n - 1));
        b.se = std::sqrt(var / a.n);
      }
      out.push_back(b);
    }
  }
  return out;
}

inline void write_psychometric_csv(std::ostream& out, std::span<const PsychometricBin> bins) {
  out << "group,bin,eu_lo,eu_hi,mean_eu,mean_p,se,count\n";
  char buf[200];
  for (const PsychometricBin& b : bins) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.6g,%.6g,%.6g,%.6f,", b.group ? "high" : "low", b.bin, b.eu_lo, b.eu_hi,
                  b.mean_eu, b.mean_p);
    out << buf;
    if (b.se) {
      std::snprintf(buf, sizeof(buf), "%.6f", *b.se);
      out << buf;
    }
    out << ',' << b.count << '\n';
  }
}

struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Least-squares fit of p = logistic(intercept + slope * x).
inline LogisticFit fit_logistic(std::span<const double> x, std::span<const double> p) {
  if (x.size() != p.size() || x.empty()) throw Error(ErrorKind::kInvalidArgument, "need matching, non-empty series");
  auto sse = [&](const std::vector<double>& c) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = logistic(c[0] + c[1] * x[i]) - p[i];
      s += e * e;
    }
    return s;
  };
  NelderMeadOptions opt;
  opt.initial_step = 0.1;
  opt.ftol = 1e-14;
  opt.xtol = 1e-10;
  opt.max_iter = 20000;
  const auto r = nelder_mead(sse, {0.0, 0.0}, opt);
  return {r.x[0], r.x[1]};
}

}  // namespace g2x2

#endif  // G2X2_PSYCHOMETRIC_HPP_
