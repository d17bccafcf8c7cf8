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

#ifndef G2X2_IO_HPP_
#define G2X2_IO_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "g2x2/data.hpp"
#include "g2x2/error.hpp"
#include "g2x2/game.hpp"

namespace g2x2 {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Games file: a JSON array of {"id", "row": [a,b,c,d], "col": [x,y,z,w]}.
// ---------------------------------------------------------------------------

inline nlohmann::json game_to_json(const GameMatrix& g) {
  return {{"id", g.id}, {"row", g.row}, {"col", g.col}};
}

inline GameMatrix game_from_json(const nlohmann::json& j) {
  GameMatrix g;
  try {
    g.id = j.at("id").get<std::string>();
    for (const char* key : {"row", "col"}) {
      const auto& arr = j.at(key);
      if (!arr.is_array() || arr.size() != 4) throw Error(ErrorKind::kParse, "game '" + g.id + "': '" + key + "' needs 4 payoffs");
      auto& dst = std::string_view(key) == "row" ? g.row : g.col;
      for (std::size_t i = 0; i < 4; ++i) {
        if (!arr[i].is_number_integer()) throw Error(ErrorKind::kParse, "game '" + g.id + "': payoffs must be integers");
        dst[i] = arr[i].get<int>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("games file: ") + e.what());
  }
  if (g.id.empty()) throw Error(ErrorKind::kParse, "games file: empty game id");
  return g;
}

// Parses JSON that may carry // comment lines, such as the provenance header.
inline nlohmann::json read_json(std::istream& in, std::string_view what) {
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string(what) + ": " + e.what());
  }
}

inline std::vector<GameMatrix> read_games(std::istream& in) {
  const nlohmann::json j = read_json(in, "games file");
  if (!j.is_array()) throw Error(ErrorKind::kParse, "games file: top level must be an array");
  std::vector<GameMatrix> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(game_from_json(item));
  std::vector<std::string_view> ids;
  for (const auto& g : out) ids.push_back(g.id);
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(ErrorKind::kParse, "games file: duplicate id '" + std::string(*dup) + "'");
  }
  return out;
}

// One game per line so diffs stay readable.
inline void write_games(std::ostream& out, std::span<const GameMatrix> games) {
  out << "[\n";
  for (std::size_t i = 0; i < games.size(); ++i) {
    out << "  " << game_to_json(games[i]).dump() << (i + 1 < games.size() ? ",\n" : "\n");
  }
  out << "]\n";
}

// ---------------------------------------------------------------------------
// Records CSV: aggregated behavior with the payoffs inlined.
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 14> kRecordColumns = {
    "id", "role", "n", "p_first", "rt_norm", "conf_norm", "a", "b", "c", "d", "x", "y", "z", "w"};

inline void write_records(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < kRecordColumns.size(); ++i) out << (i ? "," : "") << kRecordColumns[i];
  out << '\n';
  for (const GameRecord& r : data) {
    out << r.game.id << ',' << role_name(r.role) << ',' << r.n << ',' << format_double(r.p_first) << ','
        << format_double(r.rt_norm) << ',' << (r.conf_norm ? format_double(*r.conf_norm) : "");
    for (int v : r.game.row) out << ',' << v;
    for (int v : r.game.col) out << ',' << v;
    out << '\n';
  }
}

inline Dataset read_records(std::istream& in) {
  Dataset out;
  std::array<int, kRecordColumns.size()> pos;
  pos.fill(-1);
  bool have_header = false;
  std::size_t columns = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = detail::split_csv(line);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto it = std::find(kRecordColumns.begin(), kRecordColumns.end(), fields[i]);
        if (it != kRecordColumns.end()) pos[static_cast<std::size_t>(it - kRecordColumns.begin())] = static_cast<int>(i);
      }
      for (std::size_t c = 0; c < kRecordColumns.size(); ++c) {
        if (pos[c] < 0 && kRecordColumns[c] != "conf_norm") {
          throw Error(ErrorKind::kParse, detail::at_line(lineno) + "missing column '" + std::string(kRecordColumns[c]) + "'");
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
    auto field = [&](std::size_t c) { return fields[static_cast<std::size_t>(pos[c])]; };
    GameRecord r;
    r.game.id = std::string(field(0));
    if (r.game.id.empty()) throw Error(ErrorKind::kParse, detail::at_line(lineno) + "empty id");
    try {
      r.role = parse_role(field(1));
    } catch (const Error&) {
      throw Error(ErrorKind::kParse, detail::at_line(lineno) + "bad role '" + std::string(field(1)) + "'");
    }
    r.n = detail::parse_number<int>(field(2), lineno, "n");
    if (r.n < 1) throw Error(ErrorKind::kRange, detail::at_line(lineno) + "n must be positive");
    r.p_first = detail::parse_number<double>(field(3), lineno, "p_first");
    if (!(r.p_first >= 0.0 && r.p_first <= 1.0)) throw Error(ErrorKind::kRange, detail::at_line(lineno) + "p_first must lie in [0, 1]");
    r.rt_norm = detail::parse_number<double>(field(4), lineno, "rt_norm");
    if (pos[5] >= 0 && !field(5).empty()) r.conf_norm = detail::parse_number<double>(field(5), lineno, "conf_norm");
    for (std::size_t k = 0; k < 4; ++k) {
      r.game.row[k] = detail::parse_number<int>(field(6 + k), lineno, kRecordColumns[6 + k]);
      r.game.col[k] = detail::parse_number<int>(field(10 + k), lineno, kRecordColumns[10 + k]);
    }
    out.push_back(std::move(r));
  }
  if (!have_header) throw Error(ErrorKind::kParse, "records file has no header");
  return out;
}

}  // namespace g2x2

#endif  // G2X2_IO_HPP_
