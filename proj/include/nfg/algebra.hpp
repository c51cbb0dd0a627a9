#pragma once

#include <vector>

#include "nfg/game.hpp"

namespace nfg {

/// Weighted sum of games on identical action sets. Weights must be
/// non-negative and sum to 1.
inline Game convex_combine(const std::vector<Game>& games, const std::vector<Rational>& weights) {
  if (games.empty()) throw std::invalid_argument("convex_combine: no games");
  if (games.size() != weights.size())
    throw std::invalid_argument("convex_combine: weight count mismatch");
  const Game& first = games.front();
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("convex_combine: negative weight");
    sum += w;
  }
  if (sum != 1)
    throw std::invalid_argument("convex_combine: weights sum to " + format_rational(sum));
  for (const Game& g : games)
    if (g.action_sets() != first.action_sets())
      throw std::invalid_argument("convex_combine: games have mismatched action sets");

  std::size_t n = first.players();
  std::vector<Rational> payoffs(first.profile_count() * n, Rational(0));
  for (std::size_t k = 0; k < games.size(); ++k) {
    if (weights[k] == 0) continue;
    const auto& raw = games[k].raw_payoffs();
    for (std::size_t e = 0; e < payoffs.size(); ++e) payoffs[e] += weights[k] * raw[e];
  }
  return Game(first.action_sets(), std::move(payoffs));
}

/// Per-player positive rescaling plus offset: payoff of player i becomes
/// alpha[i]*G_i + beta[i]. Leaves the equilibrium set unchanged.
inline Game affine_transform(const Game& g, const std::vector<Rational>& alpha,
                             const std::vector<Rational>& beta) {
  if (alpha.size() != g.players() || beta.size() != g.players())
    throw std::invalid_argument("affine_transform: coefficient arity mismatch");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] <= 0)
      throw std::invalid_argument("affine_transform: alpha of player " + std::to_string(i + 1) +
                                  " must be positive");
  std::size_t n = g.players();
  std::vector<Rational> payoffs(g.raw_payoffs());
  for (std::size_t f = 0; f < g.profile_count(); ++f)
    for (std::size_t i = 0; i < n; ++i) {
      Rational& v = payoffs[f * n + i];
      v = alpha[i] * v + beta[i];
    }
  return Game(g.action_sets(), std::move(payoffs));
}

/// Adds a constant game (per-player constant) to g.
inline Game add_constant(const Game& g, const std::vector<Rational>& beta) {
  std::vector<Rational> alpha(g.players(), Rational(1));
  return affine_transform(g, alpha, beta);
}

/// Multiplies every opponent's payoff at profile a by q(a_i), leaving player
/// i's own payoff untouched. Equilibria map to re-weighted images.
inline Game hadamard_contort(const Game& g, std::size_t player,
                             const std::map<Action, Rational>& q) {
  if (player >= g.players()) throw std::invalid_argument("hadamard_contort: bad player");
  std::vector<Rational> factor(g.action_count(player));
  for (const auto& a : g.actions(player)) {
    auto it = q.find(a);
    if (it == q.end() || it->second <= 0)
      throw std::invalid_argument("hadamard_contort: q must be positive on every action of player " +
                                  std::to_string(player + 1) + " (missing or nonpositive at '" +
                                  a.name() + "')");
    factor[g.action_index(player, a)] = it->second;
  }
  std::size_t n = g.players();
  std::vector<Rational> payoffs(g.raw_payoffs());
  std::vector<std::size_t> idx(n, 0);
  do {
    std::size_t base = g.shape().flat(idx) * n;
    for (std::size_t j = 0; j < n; ++j)
      if (j != player) payoffs[base + j] *= factor[idx[player]];
  } while (g.shape().next(idx));
  return Game(g.action_sets(), std::move(payoffs));
}

/// Re-weights player i's strategy as the contortion lemma prescribes:
/// new p_i(a) proportional to p_i(a)/q(a).
inline Profile contort_profile(const Game& g, const Profile& p, std::size_t player,
                               const std::map<Action, Rational>& q) {
  std::vector<Profile::Strategy> s;
  for (std::size_t i = 0; i < p.players(); ++i) s.push_back(p.strategy(i));
  Rational norm = 0;
  for (auto& [a, prob] : s[player]) {
    auto it = q.find(a);
    if (it == q.end() || it->second <= 0)
      throw std::invalid_argument("contort_profile: q not positive on '" + a.name() + "'");
    prob /= it->second;
    norm += prob;
  }
  for (auto& [a, prob] : s[player]) prob /= norm;
  (void)g;
  return Profile(std::move(s));
}

/// Per player: constant payoffs become constant 1, everything else is mapped
/// affinely onto [0, 1] with min 0 and max 1.
inline Game normalize(const Game& g) {
  std::size_t n = g.players();
  std::vector<Rational> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = hi[i] = g.payoff(std::size_t{0}, i);
    for (std::size_t f = 1; f < g.profile_count(); ++f) {
      const Rational& v = g.payoff(f, i);
      if (v < lo[i]) lo[i] = v;
      if (v > hi[i]) hi[i] = v;
    }
  }
  std::vector<Rational> payoffs(g.raw_payoffs());
  for (std::size_t f = 0; f < g.profile_count(); ++f)
    for (std::size_t i = 0; i < n; ++i) {
      Rational& v = payoffs[f * n + i];
      if (lo[i] == hi[i])
        v = 1;
      else
        v = (v - lo[i]) / (hi[i] - lo[i]);
    }
  return Game(g.action_sets(), std::move(payoffs));
}

inline bool is_normalized(const Game& g) { return normalize(g) == g; }

/// Player i keeps their payoff, everyone else gets identically 0.
inline Game player_payoff_projection(const Game& g, std::size_t player) {
  if (player >= g.players()) throw std::invalid_argument("player_payoff_projection: bad player");
  std::size_t n = g.players();
  std::vector<Rational> payoffs(g.raw_payoffs());
  for (std::size_t f = 0; f < g.profile_count(); ++f)
    for (std::size_t i = 0; i < n; ++i)
      if (i != player) payoffs[f * n + i] = 0;
  return Game(g.action_sets(), std::move(payoffs));
}

inline bool is_player_payoff_game(const Game& g, std::size_t player) {
  for (std::size_t f = 0; f < g.profile_count(); ++f)
    for (std::size_t i = 0; i < g.players(); ++i)
      if (i != player && g.payoff(f, i) != 0) return false;
  return true;
}

/// max over players of the l1 distance between the players' strategies.
inline Rational profile_distance(const Profile& p, const Profile& q) {
  if (p.players() != q.players())
    throw std::invalid_argument("profile_distance: player count mismatch");
  Rational worst = 0;
  for (std::size_t i = 0; i < p.players(); ++i) {
    Rational d = 0;
    std::set<Action> all;
    for (const auto& [a, v] : p.strategy(i)) all.insert(a);
    for (const auto& [a, v] : q.strategy(i)) all.insert(a);
    for (const auto& a : all) d += rational_abs(p.prob(i, a) - q.prob(i, a));
    if (d > worst) worst = d;
  }
  return worst;
}

/// Restricts the game to nonempty per-player action subsets.
inline Game restrict(const Game& g, const ActionSets& subsets) {
  if (subsets.size() != g.players()) throw std::invalid_argument("restrict: arity mismatch");
  ActionSets sets(subsets);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    sets[i] = sorted_actions(std::move(sets[i]));
    if (sets[i].empty())
      throw std::invalid_argument("restrict: empty subset for player " + std::to_string(i + 1));
    for (const auto& a : sets[i])
      if (!g.has_action(i, a))
        throw std::invalid_argument("restrict: '" + a.name() + "' is not an action of player " +
                                    std::to_string(i + 1));
  }
  std::size_t n = g.players();
  // Map restricted indices to original indices once.
  std::vector<std::vector<std::size_t>> back(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : sets[i]) back[i].push_back(g.action_index(i, a));
  return Game::build(sets, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> orig(n);
    for (std::size_t i = 0; i < n; ++i) orig[i] = back[i][idx[i]];
    std::vector<Rational> v(n);
    std::size_t f = g.shape().flat(orig);
    for (std::size_t i = 0; i < n; ++i) v[i] = g.payoff(f, i);
    return v;
  });
}

}  // namespace nfg
