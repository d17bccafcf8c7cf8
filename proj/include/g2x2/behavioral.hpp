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

#ifndef G2X2_BEHAVIORAL_HPP_
#define G2X2_BEHAVIORAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "g2x2/dual.hpp"
#include "g2x2/error.hpp"
#include "g2x2/game.hpp"
#include "g2x2/solvers.hpp"

namespace g2x2 {

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

// CARA utility U(x) = (1 - exp(-alpha x)) / alpha, exactly x at alpha = 0.
// At alpha = 0 the derivative in alpha is -x^2/2, the limit of the general
// form, so gradients stay continuous across the risk-neutral point.
template <typename T>
T cara_utility(double x, const T& alpha) {
  using std::expm1;
  if (value_of(alpha) == 0.0) return T(x) - alpha * (0.5 * x * x);
  return -expm1(-alpha * x) / alpha;
}

// Logistic function with logistic(-z) == 1 - logistic(z) bit for bit: the
// negative half is computed as 1 - s with s in [0.5, 1], which is exact.
inline double logistic(double z) {
  if (std::isnan(z)) return z;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  return 1.0 - 1.0 / (1.0 + std::exp(z));
}

template <int N>
Dual<N> logistic(const Dual<N>& z) {
  const double p = logistic(z.v);
  return chain(z, p, p * (1.0 - p));
}

// P(first action) for a utility gap delta at precision eta.
template <typename T>
T logit_choice(const T& delta, const T& eta) {
  return logistic(eta * delta);
}

// Own payoffs of `role` in its row perspective: u(own, opp) at cells
// (first,first), (first,second), (second,first), (second,second).
inline std::array<int, 4> own_payoffs(const GameMatrix& g, Role role) {
  if (role == Role::kRow) return g.row;
  return {g.col[0], g.col[2], g.col[1], g.col[3]};
}

// Utilities of both players' payoffs in their own perspectives.
template <typename T>
struct UtilityTable {
  std::array<std::array<T, 4>, 2> u;

  UtilityTable(const GameMatrix& g, const T& alpha) {
    for (Role r : {Role::kRow, Role::kCol}) {
      const auto p = own_payoffs(g, r);
      for (int i = 0; i < 4; ++i) u[static_cast<int>(r)][i] = cara_utility(static_cast<double>(p[i]), alpha);
    }
  }
  const std::array<T, 4>& of(Role r) const { return u[static_cast<int>(r)]; }
};

// EU(first) - EU(second) for a player whose belief puts `belief_first` on
// the opponent's first action.
template <typename T>
T utility_gap(const std::array<T, 4>& u, const T& belief_first) {
  return belief_first * (u[0] - u[2]) + (T(1.0) - belief_first) * (u[1] - u[3]);
}

template <typename T>
std::pair<T, T> expected_utilities(const GameMatrix& g, Role role, const T& belief_first, const T& alpha) {
  const UtilityTable<T> table(g, alpha);
  const auto& u = table.of(role);
  const T other = T(1.0) - belief_first;
  return {belief_first * u[0] + other * u[1], belief_first * u[2] + other * u[3]};
}

// ---------------------------------------------------------------------------
// Level-k quantal response
// ---------------------------------------------------------------------------

inline constexpr int kMaxLevel = 3;

template <typename T>
T level_k_belief(const UtilityTable<T>& table, Role role, int k, const T& eta_other) {
  if (k <= 1) return T(0.5);
  const Role opp = opponent(role);
  const T opp_belief = level_k_belief(table, opp, k - 1, eta_other);
  return logistic(eta_other * utility_gap(table.of(opp), opp_belief));
}

// Belief of a level-k `role` player about its opponent's first action: level-1
// expects uniform play; deeper levels expect a quantal response at
// eta_other to the opponent's own level-(k-1) belief.
template <typename T>
T level_k_belief(const GameMatrix& g, Role role, int k, const T& eta_other, const T& alpha) {
  return level_k_belief(UtilityTable<T>(g, alpha), role, k, eta_other);
}

template <typename T>
T level_k_prediction(const UtilityTable<T>& table, Role role, int k, const T& eta_self, const T& eta_other) {
  if (k <= 0) return T(0.5);
  const T belief = level_k_belief(table, role, k, eta_other);
  return logistic(eta_self * utility_gap(table.of(role), belief));
}

// Predictions at k = 0..3 (level 0 plays uniformly).
template <typename T>
std::array<T, kMaxLevel + 1> level_predictions(const UtilityTable<T>& table, Role role, const T& eta_self,
                                               const T& eta_other) {
  std::array<T, kMaxLevel + 1> out;
  for (int k = 0; k <= kMaxLevel; ++k) out[k] = level_k_prediction(table, role, k, eta_self, eta_other);
  return out;
}

// ---------------------------------------------------------------------------
// Quantal response equilibrium
// ---------------------------------------------------------------------------

struct QreOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

struct QreResult {
  double p_self = 0.5;   // focal player's P(first action)
  double p_other = 0.5;  // opponent's P(first action)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// Fixed-point map for the focal player's mixture p. The opponent's response
// is q = L(eta_o * gap_o(p)) and the focal response L(eta_s * gap_s(q)).
struct QreMap {
  std::array<double, 4> u_self;
  std::array<double, 4> u_other;
  double eta_self;
  double eta_other;

  double response_other(double p, double t) const { return logistic(t * eta_other * utility_gap(u_other, p)); }
  double response_self(double q, double t) const { return logistic(t * eta_self * utility_gap(u_self, q)); }
  double slope_self() const { return u_self[0] - u_self[2] - u_self[1] + u_self[3]; }
  double slope_other() const { return u_other[0] - u_other[2] - u_other[1] + u_other[3]; }

  double h(double p, double t) const { return p - response_self(response_other(p, t), t); }
  double dh(double p, double t) const {
    const double q = response_other(p, t);
    const double f = response_self(q, t);
    const double dq = t * eta_other * q * (1.0 - q) * slope_other();
    const double df = t * eta_self * f * (1.0 - f) * slope_self();
    return 1.0 - df * dq;
  }
  double dh_dt(double p, double t) const {
    const double g_other = utility_gap(u_other, p);
    const double q = logistic(t * eta_other * g_other);
    const double dq = q * (1.0 - q) * eta_other * g_other;
    const double f = response_self(q, t);
    return -f * (1.0 - f) * eta_self * (utility_gap(u_self, q) + t * slope_self() * dq);
  }
};

// Safeguarded Newton on a bracket with h(lo) <= 0 <= h(hi).
inline double bracketed_root(const QreMap& m, double t, double lo, double hi, int& iterations, int max_iter) {
  double p = 0.5 * (lo + hi);
  for (; iterations < max_iter; ++iterations) {
    const double hp = m.h(p, t);
    if (hp == 0.0) return p;
    if (hp < 0.0) lo = p; else hi = p;
    const double dp = m.dh(p, t);
    double next = dp > 0.0 ? p - hp / dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == p || hi - lo <= std::numeric_limits<double>::denorm_min()) return next;
    p = next;
  }
  return p;
}

// Pseudo-arclength continuation of h(p, t) = 0 from (0.5, 0) until the
// branch crosses t = 1, then Newton in p at t = 1. Tracking arclength rather
// than t follows the branch through folds. The homotopy runs in s = k t
// with k = sqrt(gain) / 4, the scale at which multiple roots can appear, so
// that folds are resolved in both coordinates.
//
// The tangent (-h_s, h_p) keeps its orientation along a regular branch, so a
// step whose endpoint has a reversed tangent landed on another sheet and is
// retried with a smaller step. The orientation genuinely reverses only when
// the step crosses a simple bifurcation point (a symmetric pitchfork); that
// is accepted once the step is tiny, continuing straight through.
inline std::optional<double> trace_branch(const QreMap& m, int& iterations, int max_iter) {
  const double k = std::max(1.0, 0.25 * std::sqrt(std::fabs(m.eta_self * m.eta_other * m.slope_self() * m.slope_other())));
  auto h = [&](double p, double s) { return m.h(p, s / k); };
  auto hp = [&](double p, double s) { return m.dh(p, s / k); };
  auto hs = [&](double p, double s) { return m.dh_dt(p, s / k) / k; };
  double p = 0.5, s = 0.0;
  double tp = 0.0, ts = 1.0;  // unit tangent (dp, ds)
  double orientation = 1.0;
  double step = 1.0 / 64.0;
  constexpr double kMaxStep = 0.5, kMinStep = 1e-13, kMaxMove = 0.005, kBifurcationStep = 1e-6;
  auto tangent = [&](double pp, double sq, double& np, double& ns) {
    const double a = -hs(pp, sq), b = hp(pp, sq);
    const double norm = std::hypot(a, b);
    if (!(norm > 0.0)) return false;
    np = orientation * a / norm;
    ns = orientation * b / norm;
    return true;
  };
  if (!tangent(p, s, tp, ts)) return std::nullopt;
  struct Candidate {
    double p, s, tp, ts, step;
  };
  std::optional<Candidate> beyond;
  while (iterations < max_iter) {
    if (step < kMinStep) return std::nullopt;
    double yp = p + step * tp, ys = s + step * ts;
    bool ok = false;
    for (int i = 0; i < 12 && iterations < max_iter; ++i, ++iterations) {
      const double hv = h(yp, ys);
      const double c = tp * (yp - p) + ts * (ys - s) - step;
      const double a11 = hp(yp, ys), a12 = hs(yp, ys);
      const double scale = std::max({1.0, std::fabs(a11), std::fabs(a12 * ys)});
      if (std::fabs(hv) <= 1e-14 * scale && std::fabs(c) <= 1e-13 * std::max(1.0, std::fabs(ys))) {
        ok = true;
        break;
      }
      const double det = a11 * ts - a12 * tp;
      if (!(std::fabs(det) > 1e-300)) break;
      yp -= (hv * ts - a12 * c) / det;
      ys -= (a11 * c - hv * tp) / det;
    }
    // A large turn or corrector displacement means the step may have
    // jumped to a neighbouring sheet.
    const double moved = std::hypot(yp - (p + step * tp), ys - (s + step * ts));
    double np = 0.0, ns = 0.0;
    if (!ok || moved > std::min(0.1 * step, kMaxMove) || !tangent(yp, ys, np, ns)) {
      step *= 0.5;
      continue;
    }
    const double turn = np * tp + ns * ts;
    // Remember the first reversed point: if the steps then collapse while
    // approaching it, it lies past a bifurcation on the straight branch.
    if (turn < -0.99 && !beyond) beyond = Candidate{yp, ys, np, ns, step};
    if (beyond && step <= kBifurcationStep) {
      yp = beyond->p;
      ys = beyond->s;
      np = -beyond->tp;
      ns = -beyond->ts;
      step = beyond->step;
      orientation = -orientation;
      beyond.reset();
    } else if (turn < 0.99) {
      step *= 0.5;
      continue;
    } else if (beyond && (beyond->p - yp) * np + (beyond->s - ys) * ns <= 0.0) {
      beyond.reset();
    }
    if (ys >= k) {
      // Newton at t = 1 from the point where the chord crosses it.
      double x = ys == s ? yp : p + (yp - p) * (k - s) / (ys - s);
      for (int i = 0; i < 50 && iterations < max_iter; ++i, ++iterations) {
        const double hv = m.h(x, 1.0);
        if (std::fabs(hv) <= 1e-15) return x;
        const double d = m.dh(x, 1.0);
        if (d == 0.0) break;
        const double next = x - hv / d;
        if (next == x) return x;
        x = next;
      }
      if (std::fabs(m.h(x, 1.0)) <= 1e-12) return x;
      step *= 0.5;
      continue;
    }
    p = yp;
    s = ys;
    tp = np;
    ts = ns;
    step = std::min(kMaxStep, step * 1.5);
  }
  return std::nullopt;
}

}  // namespace detail

// Logit QRE from the focal player's seat, following the principal branch
// that starts at uniform play (eta scaled from 0 to its full value). When the
// composed response map can have only one fixed point the root is found
// directly on [0, 1].
inline QreResult solve_qre(const std::array<double, 4>& u_self, const std::array<double, 4>& u_other, double eta_self,
                           double eta_other, const QreOptions& options = {}) {
  const detail::QreMap m{u_self, u_other, eta_self, eta_other};
  QreResult result;
  int iterations = 0;
  const double gain = eta_self * eta_other * m.slope_self() * m.slope_other();
  double p = 0.5;
  if (gain / 16.0 < 1.0) {
    // h' = 1 - F' >= 1 - gain/16 > 0: a single root.
    p = detail::bracketed_root(m, 1.0, 0.0, 1.0, iterations, options.max_iter);
  } else {
    const auto found = detail::trace_branch(m, iterations, options.max_iter);
    if (!found) {
      result.residual = std::fabs(m.h(p, 1.0));
      result.iterations = iterations;
      return result;
    }
    p = *found;
  }
  // Polish at full precision.
  for (int i = 0; i < 8 && iterations < options.max_iter; ++i, ++iterations) {
    const double hp = m.h(p, 1.0);
    const double dp = m.dh(p, 1.0);
    if (hp == 0.0 || dp == 0.0) break;
    const double next = std::clamp(p - hp / dp, 0.0, 1.0);
    if (std::fabs(m.h(next, 1.0)) >= std::fabs(hp)) break;
    p = next;
  }
  result.p_self = p;
  result.p_other = m.response_other(p, 1.0);
  result.residual = std::fabs(p - m.response_self(result.p_other, 1.0));
  result.iterations = iterations;
  result.converged = result.residual <= options.tol;
  return result;
}

// QRE for `role` in game g; the focal player responds at eta_self and the
// opponent at eta_other.
inline QreResult solve_qre(const GameMatrix& g, Role role, double eta_self, double eta_other, double alpha,
                           const QreOptions& options = {}) {
  const UtilityTable<double> table(g, alpha);
  return solve_qre(table.of(role), table.of(opponent(role)), eta_self, eta_other, options);
}

// Focal P(first action) at the QRE, differentiable in the parameters. The
// equilibrium is solved in double; one Newton step in T from the converged
// point carries the implicit-function derivative -dh/dtheta / dh/dp.
template <typename T>
T qre_prediction(const UtilityTable<T>& table, Role role, const T& eta_self, const T& eta_other,
                 const QreOptions& options = {}) {
  std::array<double, 4> us, uo;
  for (int i = 0; i < 4; ++i) {
    us[i] = value_of(table.of(role)[i]);
    uo[i] = value_of(table.of(opponent(role))[i]);
  }
  const QreResult r = solve_qre(us, uo, value_of(eta_self), value_of(eta_other), options);
  if (!r.converged) {
    throw Error(ErrorKind::kNoConvergence, "QRE did not converge: p=" + std::to_string(r.p_self) +
                                               " residual=" + std::to_string(r.residual));
  }
  if constexpr (std::is_same_v<T, double>) {
    return r.p_self;
  } else {
    const detail::QreMap m{us, uo, value_of(eta_self), value_of(eta_other)};
    const T p0(r.p_self);
    const T q = logistic(eta_other * utility_gap(table.of(opponent(role)), p0));
    const T h = p0 - logistic(eta_self * utility_gap(table.of(role), q));
    return p0 - h / T(m.dh(r.p_self, 1.0));
  }
}

// ---------------------------------------------------------------------------
// Model specification and prediction
// ---------------------------------------------------------------------------

enum class Structure : std::uint8_t { kNash, kLevelK, kQre, kLevelMixture };

struct ModelSpec {
  Structure structure = Structure::kLevelK;
  int k = 1;
  bool use_belief_noise = false;
  bool use_risk = false;
  // Probability of k = 0..3; only for kLevelMixture.
  std::optional<std::array<double, kMaxLevel + 1>> level_weights;
};

template <typename T>
struct BehaviorParamsT {
  T eta_self = T(1.0);
  T eta_other = T(1.0);
  T alpha = T(0.0);
};
using BehaviorParams = BehaviorParamsT<double>;

inline void validate_spec(const ModelSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::kInvalidSpec, why); };
  switch (spec.structure) {
    case Structure::kNash:
      if (spec.use_belief_noise || spec.use_risk) fail("Nash takes no belief-noise or risk component");
      if (spec.level_weights) fail("level weights given for Nash");
      break;
    case Structure::kLevelK:
      if (spec.k < 0 || spec.k > kMaxLevel) fail("level k must be in 0..3");
      if (spec.level_weights) fail("level weights given for a fixed-level model");
      break;
    case Structure::kQre:
      if (spec.level_weights) fail("level weights given for QRE");
      break;
    case Structure::kLevelMixture: {
      if (!spec.level_weights) fail("level mixture needs level weights");
      double sum = 0.0;
      for (double w : *spec.level_weights) {
        if (!(w >= 0.0)) fail("level weights must be nonnegative");
        sum += w;
      }
      if (std::fabs(sum - 1.0) > 1e-9) fail("level weights must sum to 1");
      break;
    }
  }
}

// Uniform over the role's actions in all PSNEs; the interior mixed
// equilibrium when there is no PSNE.
inline double predict_nash(const GameMatrix& g, Role role) {
  const auto eqs = pure_nash(g);
  if (!eqs.empty()) {
    int first = 0;
    for (const auto& e : eqs) {
      const Action a = role == Role::kRow ? e.row_action : e.col_action;
      if (a == Action::kFirst) ++first;
    }
    return static_cast<double>(first) / static_cast<double>(eqs.size());
  }
  const auto mixed = mixed_nash(g);
  if (!mixed.equilibrium) throw Error(ErrorKind::kNoEquilibrium, "game '" + g.id + "' has no equilibrium");
  return role == Role::kRow ? mixed.equilibrium->p_first_row : mixed.equilibrium->p_first_col;
}

// Row-perspective QRE (p_A, q_C) for a QRE spec. Throws NoConvergence with
// the last iterate and residual when the tolerance is not met.
inline QreResult predict_qre(const GameMatrix& g, const ModelSpec& spec, const BehaviorParams& params,
                             const QreOptions& options = {}) {
  const double alpha = spec.use_risk ? params.alpha : 0.0;
  const double eta_other = spec.use_belief_noise ? params.eta_other : params.eta_self;
  const QreResult r = solve_qre(g, Role::kRow, params.eta_self, eta_other, alpha, options);
  if (!r.converged) {
    throw Error(ErrorKind::kNoConvergence, "QRE stopped at (" + std::to_string(r.p_self) + ", " +
                                               std::to_string(r.p_other) + ") residual " +
                                               std::to_string(r.residual));
  }
  return r;
}

// P(role plays its first action) under `spec`. eta_other is used only with
// belief noise (otherwise the player assumes the opponent shares eta_self),
// alpha only with risk.
template <typename T>
T predict(const ModelSpec& spec, const BehaviorParamsT<T>& params, const GameMatrix& g, Role role,
          const QreOptions& qre = {}) {
  if (spec.structure == Structure::kNash) return T(predict_nash(g, role));
  const T alpha = spec.use_risk ? params.alpha : T(0.0);
  const T eta_other = spec.use_belief_noise ? params.eta_other : params.eta_self;
  const UtilityTable<T> table(g, alpha);
  switch (spec.structure) {
    case Structure::kLevelK:
      return level_k_prediction(table, role, spec.k, params.eta_self, eta_other);
    case Structure::kQre:
      return qre_prediction(table, role, params.eta_self, eta_other, qre);
    case Structure::kLevelMixture: {
      const auto preds = level_predictions(table, role, params.eta_self, eta_other);
      T out(0.0);
      for (int k = 0; k <= kMaxLevel; ++k) out += T((*spec.level_weights)[k]) * preds[k];
      return out;
    }
    default:
      break;
  }
  throw Error(ErrorKind::kInvalidSpec, "unknown structure");
}

}  // namespace g2x2

#endif  // G2X2_BEHAVIORAL_HPP_
