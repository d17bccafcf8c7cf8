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

#ifndef G2X2_DATA_HPP_
#define G2X2_DATA_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "g2x2/error.hpp"
#include "g2x2/game.hpp"
#include "g2x2/rng.hpp"

namespace g2x2 {

// One participant decision. `choice` is in the coordinates the participant
// saw: their own row-perspective matrix with `permutation` applied.
struct TrialRecord {
  std::string participant_id;
  std::string game_id;
  Role role = Role::kRow;
  Permutation permutation;
  Action choice = Action::kFirst;
  int rt_ms = 1;
  std::optional<double> confidence;
};

// Behavior aggregated per (game, role). p_first is the frequency of the
// role's own first action (A for row, C for col).
struct GameRecord {
  GameMatrix game;
  Role role = Role::kRow;
  int n = 0;
  double p_first = 0.5;
  double rt_norm = 0.0;
  std::optional<double> conf_norm;
};

using Dataset = std::vector<GameRecord>;

// Canonical own action behind a displayed choice.
inline Action canonical_choice(Action displayed, Permutation p) {
  return p.swap_rows ? other(displayed) : displayed;
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

template <typename T>
T parse_number(std::string_view s, std::size_t line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::kParse, at_line(line) + "bad " + std::string(column) + " '" + std::string(s) + "'");
  }
  return value;
}

inline bool parse_flag(std::string_view s, std::size_t line, std::string_view column) {
  if (s == "0" || s == "false") return false;
  if (s == "1" || s == "true") return true;
  throw Error(ErrorKind::kParse, at_line(line) + "bad " + std::string(column) + " '" + std::string(s) + "'");
}

// Population z-scores; a zero or undefined sd falls back to 1. Moments are
// summed in sorted order so the result does not depend on input order.
inline std::vector<double> zscore(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double x : sorted) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : sorted) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline constexpr std::array<std::string_view, 8> kTrialColumns = {
    "participant_id", "game_id", "role", "swap_rows", "swap_cols", "choice", "rt_ms", "confidence"};

// Reads the trials CSV. Blank lines and lines starting with '#' are skipped;
// the first remaining line is the header. The confidence column may be
// omitted or left empty.
inline std::vector<TrialRecord> parse_trials(std::istream& in) {
  std::vector<TrialRecord> out;
  std::array<int, kTrialColumns.size()> pos;
  pos.fill(-1);
  bool have_header = false;
  std::size_t columns = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = detail::split_csv(line);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto it = std::find(kTrialColumns.begin(), kTrialColumns.end(), fields[i]);
        if (it != kTrialColumns.end()) pos[it - kTrialColumns.begin()] = static_cast<int>(i);
      }
      for (std::size_t c = 0; c + 1 < kTrialColumns.size(); ++c) {
        if (pos[c] < 0) {
          throw Error(ErrorKind::kParse, detail::at_line(lineno) + "missing column '" + std::string(kTrialColumns[c]) + "'");
        }
      }
      columns = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != columns) {
      throw Error(ErrorKind::kParse, detail::at_line(lineno) + "expected " + std::to_string(columns) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    auto field = [&](int c) { return fields[static_cast<std::size_t>(pos[c])]; };
    TrialRecord t;
    t.participant_id = std::string(field(0));
    t.game_id = std::string(field(1));
    if (t.participant_id.empty() || t.game_id.empty()) throw Error(ErrorKind::kParse, detail::at_line(lineno) + "empty id");
    try {
      t.role = parse_role(field(2));
    } catch (const Error&) {
      throw Error(ErrorKind::kParse, detail::at_line(lineno) + "bad role '" + std::string(field(2)) + "'");
    }
    t.permutation = {detail::parse_flag(field(3), lineno, "swap_rows"), detail::parse_flag(field(4), lineno, "swap_cols")};
    const auto choice = field(5);
    if (choice == "first") {
      t.choice = Action::kFirst;
    } else if (choice == "second") {
      t.choice = Action::kSecond;
    } else {
      throw Error(ErrorKind::kParse, detail::at_line(lineno) + "bad choice '" + std::string(choice) + "'");
    }
    const auto rt = detail::parse_number<long long>(field(6), lineno, "rt_ms");
    if (rt <= 0 || rt > 1'000'000'000) throw Error(ErrorKind::kRange, detail::at_line(lineno) + "rt_ms must be positive");
    t.rt_ms = static_cast<int>(rt);
    if (pos[7] >= 0 && !field(7).empty()) {
      const double conf = detail::parse_number<double>(field(7), lineno, "confidence");
      if (!(conf >= 0.0 && conf <= 1.0)) {
        throw Error(ErrorKind::kRange, detail::at_line(lineno) + "confidence must lie in [0, 1]");
      }
      t.confidence = conf;
    }
    out.push_back(std::move(t));
  }
  if (!have_header) throw Error(ErrorKind::kParse, "trials file has no header");
  return out;
}

inline void write_trials(std::ostream& out, std::span<const TrialRecord> trials) {
  out << "participant_id,game_id,role,swap_rows,swap_cols,choice,rt_ms,confidence\n";
  char buf[32];
  for (const TrialRecord& t : trials) {
    out << t.participant_id << ',' << t.game_id << ',' << role_name(t.role) << ',' << int{t.permutation.swap_rows}
        << ',' << int{t.permutation.swap_cols} << ',' << (t.choice == Action::kFirst ? "first" : "second") << ','
        << t.rt_ms << ',';
    if (t.confidence) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), *t.confidence);
      out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

// Aggregates trials into one record per (game, role), ordered by game id
// then role. RTs are log-transformed and z-scored within participant, then
// summarized by the per-game median; confidence is z-scored within
// participant and averaged per game.
inline Dataset aggregate_trials(std::span<const TrialRecord> trials, std::span<const GameMatrix> games) {
  std::unordered_map<std::string_view, const GameMatrix*> by_id;
  for (const GameMatrix& g : games) by_id.emplace(g.id, &g);

  std::vector<double> rt_z(trials.size());
  std::vector<std::optional<double>> conf_z(trials.size());
  {
    std::map<std::string_view, std::vector<std::size_t>> by_participant;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (!by_id.count(trials[i].game_id)) throw Error(ErrorKind::kUnknownGame, "unknown game id '" + trials[i].game_id + "'");
      by_participant[trials[i].participant_id].push_back(i);
    }
    for (const auto& [pid, idx] : by_participant) {
      std::vector<double> log_rt;
      std::vector<double> conf;
      std::vector<std::size_t> conf_idx;
      for (std::size_t i : idx) {
        log_rt.push_back(std::log(static_cast<double>(trials[i].rt_ms)));
        if (trials[i].confidence) {
          conf.push_back(*trials[i].confidence);
          conf_idx.push_back(i);
        }
      }
      const auto z = detail::zscore(log_rt);
      for (std::size_t j = 0; j < idx.size(); ++j) rt_z[idx[j]] = z[j];
      if (!conf.empty()) {
        const auto cz = detail::zscore(conf);
        for (std::size_t j = 0; j < conf_idx.size(); ++j) conf_z[conf_idx[j]] = cz[j];
      }
    }
  }

  struct Acc {
    int n = 0;
    int first = 0;
    std::vector<double> rt;
    double conf_sum = 0.0;
    int conf_n = 0;
  };
  std::map<std::pair<std::string_view, int>, Acc> groups;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialRecord& t = trials[i];
    Acc& acc = groups[{t.game_id, static_cast<int>(t.role)}];
    ++acc.n;
    if (canonical_choice(t.choice, t.permutation) == Action::kFirst) ++acc.first;
    acc.rt.push_back(rt_z[i]);
    if (conf_z[i]) {
      acc.conf_sum += *conf_z[i];
      ++acc.conf_n;
    }
  }
  Dataset out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    GameRecord r;
    r.game = *by_id.at(key.first);
    r.role = static_cast<Role>(key.second);
    r.n = acc.n;
    r.p_first = static_cast<double>(acc.first) / acc.n;
    r.rt_norm = detail::median(std::move(acc.rt));
    if (acc.conf_n > 0) r.conf_norm = acc.conf_sum / acc.conf_n;
    out.push_back(std::move(r));
  }
  return out;
}

// Latent response-time structure. Per game, g = loading * signal + sqrt(1 -
// loading^2) * N(0,1) where `signal` should be standardized; a trial's
// ln RT = log_rt_mean + game_sd * g + participant_sd * N(0,1) + trial_sd *
// N(0,1).
struct RtModel {
  double log_rt_mean = 8.5;
  double loading = 0.0;
  double game_sd = 0.3;
  double participant_sd = 0.4;
  double trial_sd = 0.5;
};

struct SimulationOptions {
  int participants_per_game = 100;
  // Games each synthetic participant plays.
  int games_per_participant = 20;
  RtModel rt;
  // Per-game standardized RT signal; empty means none.
  std::vector<double> rt_signal;
  bool with_confidence = false;
};

// Simulates trials for the row player of every game instance, where
// probs[i] is the probability of the first action in games[i]. In round r
// the games are shuffled and dealt to participants in chunks; each trial
// shows a uniformly random permutation of the matrix.
inline std::vector<TrialRecord> simulate_choices(std::span<const GameMatrix> games, std::span<const double> probs,
                                                 const SimulationOptions& opt, std::uint64_t seed) {
  if (probs.size() != games.size()) throw Error(ErrorKind::kInvalidArgument, "one probability per game required");
  if (opt.participants_per_game < 1 || opt.games_per_participant < 1) {
    throw Error(ErrorKind::kInvalidArgument, "participant counts must be positive");
  }
  if (!opt.rt_signal.empty() && opt.rt_signal.size() != games.size()) {
    throw Error(ErrorKind::kInvalidArgument, "one RT signal value per game required");
  }
  if (std::fabs(opt.rt.loading) > 1.0) throw Error(ErrorKind::kInvalidArgument, "RT loading must lie in [-1, 1]");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kRange, "probabilities must lie in [0, 1]");
  }
  const CounterRng master(seed);
  std::vector<double> game_effect(games.size());
  {
    CounterRng rng = master.split(0);
    for (std::size_t i = 0; i < games.size(); ++i) {
      const double signal = opt.rt_signal.empty() ? 0.0 : opt.rt_signal[i];
      game_effect[i] = opt.rt.loading * signal + std::sqrt(1.0 - opt.rt.loading * opt.rt.loading) * rng.normal();
    }
  }
  std::vector<TrialRecord> out;
  out.reserve(games.size() * static_cast<std::size_t>(opt.participants_per_game));
  std::vector<std::size_t> order(games.size());
  for (int round = 0; round < opt.participants_per_game; ++round) {
    CounterRng rng = master.split(1 + static_cast<std::uint64_t>(round));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    const std::size_t chunk = static_cast<std::size_t>(opt.games_per_participant);
    double participant_effect = 0.0;
    std::string pid;
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (j % chunk == 0) {
        participant_effect = opt.rt.participant_sd * rng.normal();
        pid = "p" + std::to_string(round) + "_" + std::to_string(j / chunk);
      }
      const std::size_t gi = order[j];
      TrialRecord t;
      t.participant_id = pid;
      t.game_id = games[gi].id;
      t.role = Role::kRow;
      t.permutation = {rng.bernoulli(0.5), rng.bernoulli(0.5)};
      const Action canonical = rng.bernoulli(probs[gi]) ? Action::kFirst : Action::kSecond;
      t.choice = t.permutation.swap_rows ? other(canonical) : canonical;
      const double log_rt = opt.rt.log_rt_mean + opt.rt.game_sd * game_effect[gi] + participant_effect +
                            opt.rt.trial_sd * rng.normal();
      t.rt_ms = static_cast<int>(std::clamp(std::lround(std::exp(log_rt)), 1L, 600'000L));
      if (opt.with_confidence) {
        const double certainty = std::fabs(2.0 * probs[gi] - 1.0);
        t.confidence = std::clamp(0.5 + 0.4 * certainty + 0.15 * rng.normal(), 0.0, 1.0);
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Game-level frequencies from n Bernoulli draws per game, without
// materializing trials.
inline Dataset simulate_frequencies(std::span<const GameMatrix> games, std::span<const double> probs, int n,
                                    std::uint64_t seed) {
  if (probs.size() != games.size()) throw Error(ErrorKind::kInvalidArgument, "one probability per game required");
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  const CounterRng master(seed);
  Dataset out;
  out.reserve(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    CounterRng rng = master.split(i);
    int first = 0;
    for (int j = 0; j < n; ++j) first += rng.bernoulli(probs[i]) ? 1 : 0;
    GameRecord r;
    r.game = games[i];
    r.n = n;
    r.p_first = static_cast<double>(first) / n;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace g2x2

#endif  // G2X2_DATA_HPP_
