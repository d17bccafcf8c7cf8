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

#ifndef G2X2_MODEL_SPEC_HPP_
#define G2X2_MODEL_SPEC_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "g2x2/behavioral.hpp"
#include "g2x2/error.hpp"

namespace g2x2 {

// Which behavioral parameters are produced per game by a network.
struct NeuralSlots {
  bool eta_self = false;
  bool eta_other = false;
  bool level_mixture = false;

  bool any() const { return eta_self || eta_other || level_mixture; }
  friend bool operator==(const NeuralSlots&, const NeuralSlots&) = default;
};

// A parsed model label such as "L2+QR+Belief+Risk" or "nL+nQR+nBelief+Risk".
// A leading "n" on a component marks it as network-produced.
struct ModelDescriptor {
  ModelSpec base;
  NeuralSlots slots;
  bool direct_mlp = false;

  bool is_neural() const { return direct_mlp || slots.any(); }
};

namespace detail {

inline std::vector<std::string_view> split_plus(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find('+', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline ModelDescriptor parse_model(std::string_view label) {
  auto fail = [label](const std::string& why) {
    throw Error(ErrorKind::kInvalidSpec, "model '" + std::string(label) + "': " + why);
  };
  const auto tokens = detail::split_plus(label);
  ModelDescriptor m;
  const std::string_view head = tokens.front();
  bool needs_qr = false;
  if (head == "MLP") {
    m.direct_mlp = true;
  } else if (head == "Nash") {
    m.base.structure = Structure::kNash;
  } else if (head == "QRE" || head == "nQRE") {
    m.base.structure = Structure::kQre;
    m.slots.eta_self = head == "nQRE";
  } else if (head == "L" || head == "nL") {
    m.base.structure = Structure::kLevelMixture;
    m.base.level_weights = std::array<double, kMaxLevel + 1>{0.25, 0.25, 0.25, 0.25};
    m.slots.level_mixture = head == "nL";
    needs_qr = true;
  } else if (head.size() == 2 && head[0] == 'L' && head[1] >= '0' && head[1] <= '3') {
    m.base.structure = Structure::kLevelK;
    m.base.k = head[1] - '0';
    needs_qr = true;
  } else {
    fail("unknown structure '" + std::string(head) + "'");
  }
  if ((m.direct_mlp || m.base.structure == Structure::kNash) && tokens.size() > 1) {
    fail("takes no components");
  }
  bool seen_qr = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string_view t = tokens[i];
    auto once = [&](bool& seen) {
      if (seen) fail("component '" + std::string(t) + "' repeated");
      seen = true;
    };
    if (t == "QR" || t == "nQR") {
      if (!needs_qr) fail("QR component only applies to level models");
      once(seen_qr);
      m.slots.eta_self = t == "nQR";
    } else if (t == "Belief" || t == "nBelief") {
      once(m.base.use_belief_noise);
      m.slots.eta_other = t == "nBelief";
    } else if (t == "Risk") {
      once(m.base.use_risk);
    } else {
      fail("unknown component '" + std::string(t) + "'");
    }
  }
  if (needs_qr && !seen_qr) fail("level models need a QR component");
  if (!m.direct_mlp) validate_spec(m.base);
  return m;
}

inline std::string format_model(const ModelDescriptor& m) {
  if (m.direct_mlp) return "MLP";
  std::string out;
  switch (m.base.structure) {
    case Structure::kNash: return "Nash";
    case Structure::kQre: out = m.slots.eta_self ? "nQRE" : "QRE"; break;
    case Structure::kLevelMixture: out = std::string(m.slots.level_mixture ? "nL" : "L") + (m.slots.eta_self ? "+nQR" : "+QR"); break;
    case Structure::kLevelK: out = "L" + std::to_string(m.base.k) + (m.slots.eta_self ? "+nQR" : "+QR"); break;
  }
  if (m.base.use_belief_noise) out += m.slots.eta_other ? "+nBelief" : "+Belief";
  if (m.base.use_risk) out += "+Risk";
  return out;
}

}  // namespace g2x2

#endif  // G2X2_MODEL_SPEC_HPP_
