#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "nfg/algebra.hpp"
#include "nfg/game.hpp"

namespace nfg {

/// Per-player surjections from a blown-up action set onto a base action set.
/// Keys are the blown-up actions, values the base actions they collapse to.
struct BlowUpMap {
  std::vector<std::map<Action, Action>> maps;

  std::size_t players() const { return maps.size(); }

  ActionSet domain(std::size_t i) const {
    ActionSet out;
    for (const auto& [from, to] : maps.at(i)) out.push_back(from);
    return out;
  }

  ActionSet image(std::size_t i) const {
    std::vector<Action> out;
    for (const auto& [from, to] : maps.at(i)) out.push_back(to);
    return sorted_actions(std::move(out));
  }

  const Action& apply(std::size_t i, const Action& a) const {
    auto it = maps.at(i).find(a);
    if (it == maps[i].end())
      throw std::invalid_argument("blow-up map: '" + a.name() + "' not in domain of player " +
                                  std::to_string(i + 1));
    return it->second;
  }

  ActionSet fiber(std::size_t i, const Action& base) const {
    ActionSet out;
    for (const auto& [from, to] : maps.at(i))
      if (to == base) out.push_back(from);
    return out;
  }

  static BlowUpMap identity(const Game& g) {
    BlowUpMap m;
    m.maps.resize(g.players());
    for (std::size_t i = 0; i < g.players(); ++i)
      for (const auto& a : g.actions(i)) m.maps[i][a] = a;
    return m;
  }
};

/// Checks that the map's images are exactly the base game's action sets.
inline void require_surjective_onto(const BlowUpMap& map, const Game& base) {
  if (map.players() != base.players())
    throw std::invalid_argument("blow-up map: player count mismatch");
  for (std::size_t i = 0; i < base.players(); ++i) {
    if (map.image(i) != base.actions(i))
      throw std::invalid_argument("blow-up map: not surjective onto the actions of player " +
                                  std::to_string(i + 1));
  }
}

/// G = G_base composed with the map: every fiber becomes a set of clones.
inline Game blow_up(const Game& base, const BlowUpMap& map) {
  require_surjective_onto(map, base);
  ActionSets sets(base.players());
  for (std::size_t i = 0; i < base.players(); ++i) sets[i] = map.domain(i);
  std::size_t n = base.players();
  // Precompute per-player index translation from blown-up to base actions.
  std::vector<std::vector<std::size_t>> to_base(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : sets[i]) to_base[i].push_back(base.action_index(i, map.apply(i, a)));
  return Game::build(sets, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = to_base[i][idx[i]];
    return base.payoff_vector(base.shape().flat(b));
  });
}

inline bool are_clones(const Game& g, std::size_t player, const Action& a, const Action& b) {
  std::size_t ia = g.action_index(player, a);
  std::size_t ib = g.action_index(player, b);
  if (ia == ib) return true;
  std::vector<std::size_t> idx(g.players(), 0);
  do {
    if (idx[player] != ia) continue;
    std::vector<std::size_t> other(idx);
    other[player] = ib;
    std::size_t fa = g.shape().flat(idx) * g.players();
    std::size_t fb = g.shape().flat(other) * g.players();
    for (std::size_t j = 0; j < g.players(); ++j)
      if (g.raw_payoffs()[fa + j] != g.raw_payoffs()[fb + j]) return false;
  } while (g.shape().next(idx));
  return true;
}

/// Collapses g along the map. Every fiber must consist of mutual clones;
/// otherwise the violating player, actions and profile are reported.
inline Game blow_down(const Game& g, const BlowUpMap& map) {
  if (map.players() != g.players())
    throw std::invalid_argument("blow-down: player count mismatch");
  ActionSets base_sets(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    if (map.domain(i) != g.actions(i))
      throw std::invalid_argument("blow-down: map domain differs from the actions of player " +
                                  std::to_string(i + 1));
    base_sets[i] = map.image(i);
  }
  std::size_t n = g.players();
  // Fibers must be clone classes.
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& base : base_sets[i]) {
      ActionSet fiber = map.fiber(i, base);
      for (std::size_t k = 1; k < fiber.size(); ++k) {
        if (are_clones(g, i, fiber[0], fiber[k])) continue;
        // Locate one differing profile for the report.
        std::vector<std::size_t> idx(n, 0);
        std::size_t ia = g.action_index(i, fiber[0]);
        std::size_t ib = g.action_index(i, fiber[k]);
        do {
          if (idx[i] != ia) continue;
          std::vector<std::size_t> other(idx);
          other[i] = ib;
          if (g.payoff_vector(g.shape().flat(idx)) != g.payoff_vector(g.shape().flat(other))) {
            std::string profile;
            for (std::size_t j = 0; j < n; ++j)
              profile += (j ? "," : "") + g.actions(j)[idx[j]].name();
            throw std::invalid_argument("blow-down: fiber of '" + base.name() + "' for player " +
                                        std::to_string(i + 1) + " contains non-clones '" +
                                        fiber[0].name() + "' and '" + fiber[k].name() +
                                        "' (differ at profile " + profile + ")");
          }
        } while (g.shape().next(idx));
      }
    }
  }
  // Collapse using the first fiber element as representative.
  std::vector<std::vector<std::size_t>> rep(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& base : base_sets[i])
      rep[i].push_back(g.action_index(i, map.fiber(i, base)[0]));
  return Game::build(base_sets, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = rep[i][idx[i]];
    return g.payoff_vector(g.shape().flat(up));
  });
}

/// Pushforward of a profile along the map: base actions collect the mass of
/// their fibers.
inline Profile pushforward(const BlowUpMap& map, const Profile& p) {
  if (map.players() != p.players())
    throw std::invalid_argument("pushforward: player count mismatch");
  std::vector<Profile::Strategy> s(p.players());
  for (std::size_t i = 0; i < p.players(); ++i)
    for (const auto& [a, prob] : p.strategy(i)) s[i][map.apply(i, a)] += prob;
  return Profile(std::move(s));
}

/// Per-player, per-base-action distribution over the fiber of that action.
using FiberSplit = std::vector<std::map<Action, std::map<Action, Rational>>>;

/// Lifts a base profile through the map, distributing each base action's mass
/// over its fiber according to the split. The pushforward of the result is
/// exactly p_base.
inline Profile preimage_profile(const BlowUpMap& map, const Profile& p_base,
                                const FiberSplit& split) {
  if (split.size() != map.players() || p_base.players() != map.players())
    throw std::invalid_argument("preimage_profile: arity mismatch");
  std::vector<Profile::Strategy> s(map.players());
  for (std::size_t i = 0; i < map.players(); ++i) {
    for (const auto& [base, mass] : p_base.strategy(i)) {
      auto row_it = split[i].find(base);
      if (row_it == split[i].end())
        throw std::invalid_argument("preimage_profile: split missing row for '" + base.name() +
                                    "' of player " + std::to_string(i + 1));
      const auto& row = row_it->second;
      ActionSet fiber = map.fiber(i, base);
      Rational row_sum = 0;
      for (const auto& [up, w] : row) {
        if (w < 0) throw std::invalid_argument("preimage_profile: negative split weight");
        if (std::find(fiber.begin(), fiber.end(), up) == fiber.end())
          throw std::invalid_argument("preimage_profile: split row for '" + base.name() +
                                      "' uses '" + up.name() + "' outside the fiber");
        row_sum += w;
      }
      if (row_sum != 1)
        throw std::invalid_argument("preimage_profile: split row for '" + base.name() +
                                    "' sums to " + format_rational(row_sum));
      for (const auto& [up, w] : row) s[i][up] += mass * w;
    }
  }
  return Profile(std::move(s));
}

inline FiberSplit uniform_split(const BlowUpMap& map) {
  FiberSplit split(map.players());
  for (std::size_t i = 0; i < map.players(); ++i)
    for (const auto& base : map.image(i)) {
      ActionSet fiber = map.fiber(i, base);
      Rational w(Integer(1), Integer(fiber.size()));
      for (const auto& up : fiber) split[i][base][up] = w;
    }
  return split;
}

inline FiberSplit point_split(const BlowUpMap& map) {
  FiberSplit split(map.players());
  for (std::size_t i = 0; i < map.players(); ++i)
    for (const auto& base : map.image(i)) split[i][base][map.fiber(i, base)[0]] = 1;
  return split;
}

/// Per-player bijection of that player's action set (identity elsewhere).
struct GamePermutation {
  std::vector<std::map<Action, Action>> maps;

  std::size_t players() const { return maps.size(); }

  const Action& apply(std::size_t i, const Action& a) const {
    auto it = maps.at(i).find(a);
    return it == maps[i].end() ? a : it->second;
  }

  GamePermutation inverse() const {
    GamePermutation inv;
    inv.maps.resize(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (const auto& [from, to] : maps[i]) inv.maps[i][to] = from;
    return inv;
  }
};

inline void require_bijection_on(const GamePermutation& pi, const Game& g) {
  if (pi.players() != g.players())
    throw std::invalid_argument("permutation: player count mismatch");
  for (std::size_t i = 0; i < g.players(); ++i) {
    std::vector<Action> image;
    for (const auto& [from, to] : pi.maps[i]) {
      if (!g.has_action(i, from) || !g.has_action(i, to))
        throw std::invalid_argument("permutation: player " + std::to_string(i + 1) +
                                    " maps outside the action set");
      image.push_back(to);
    }
    if (sorted_actions(image).size() != pi.maps[i].size())
      throw std::invalid_argument("permutation: player " + std::to_string(i + 1) +
                                  " map is not injective");
  }
}

/// (G composed with pi)(a) = G(pi_1(a_1), ..., pi_n(a_n)).
inline Game apply_permutation(const Game& g, const GamePermutation& pi) {
  require_bijection_on(pi, g);
  std::size_t n = g.players();
  std::vector<std::vector<std::size_t>> to(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : g.actions(i)) to[i].push_back(g.action_index(i, pi.apply(i, a)));
  return Game::build(g.action_sets(), [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = to[i][idx[i]];
    return g.payoff_vector(g.shape().flat(b));
  });
}

/// (p composed with pi)_i(a) = p_i(pi_i(a)), matching equivariance
/// f(G composed with pi) = f(G) composed with pi.
inline Profile apply_permutation(const Profile& p, const GamePermutation& pi) {
  GamePermutation inv = pi.inverse();
  std::vector<Profile::Strategy> s(p.players());
  for (std::size_t i = 0; i < p.players(); ++i)
    for (const auto& [a, prob] : p.strategy(i)) s[i][inv.apply(i, a)] = prob;
  return Profile(std::move(s));
}

/// Group average over per-player permutations that preserve each block of the
/// given partition, in closed form: each coordinate is replaced by an
/// independent uniform choice within its block. This equals enumerating the
/// product group, whose size is otherwise prohibitive.
inline Game symmetrize_blocks(const Game& g, const std::vector<std::vector<ActionSet>>& blocks) {
  std::size_t n = g.players();
  if (blocks.size() != n) throw std::invalid_argument("symmetrize: block arity mismatch");
  // block id and members per action index
  std::vector<std::vector<std::vector<std::size_t>>> members(n);  // player -> action idx -> block member indices
  for (std::size_t i = 0; i < n; ++i) {
    members[i].assign(g.action_count(i), {});
    std::vector<bool> seen(g.action_count(i), false);
    for (const auto& block : blocks[i]) {
      std::vector<std::size_t> idxs;
      for (const auto& a : block) {
        std::size_t k = g.action_index(i, a);
        if (seen[k])
          throw std::invalid_argument("symmetrize: blocks of player " + std::to_string(i + 1) +
                                      " overlap at '" + a.name() + "'");
        seen[k] = true;
        idxs.push_back(k);
      }
      for (std::size_t k : idxs) members[i][k] = idxs;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) members[i][k] = {k};  // unlisted actions stay fixed
  }
  return Game::build(g.action_sets(), [&](const std::vector<std::size_t>& idx) {
    std::vector<Rational> acc(n, Rational(0));
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= members[i][idx[i]].size();
    // iterate the sub-box of block members
    std::vector<std::size_t> cursor(n, 0);
    std::vector<std::size_t> b(n);
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < n; ++i) b[i] = members[i][idx[i]][cursor[i]];
      std::size_t f = g.shape().flat(b) * n;
      for (std::size_t i = 0; i < n; ++i) acc[i] += g.raw_payoffs()[f + i];
      done = true;
      for (std::size_t i = n; i-- > 0;) {
        if (++cursor[i] < members[i][idx[i]].size()) {
          done = false;
          break;
        }
        cursor[i] = 0;
      }
    }
    Rational denom(combos);
    for (auto& v : acc) v /= denom;
    return acc;
  });
}

/// Average of G over all per-player permutations fixing `fixed` pointwise.
/// All non-fixed actions of a player become mutual clones in the output.
inline Game symmetrize(const Game& g, const ActionSets& fixed) {
  if (fixed.size() != g.players()) throw std::invalid_argument("symmetrize: arity mismatch");
  std::vector<std::vector<ActionSet>> blocks(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    ActionSet fixed_sorted = sorted_actions(fixed[i]);
    ActionSet moving;
    for (const auto& a : g.actions(i)) {
      if (std::binary_search(fixed_sorted.begin(), fixed_sorted.end(), a))
        blocks[i].push_back({a});
      else
        moving.push_back(a);
    }
    if (!moving.empty()) blocks[i].push_back(moving);
  }
  return symmetrize_blocks(g, blocks);
}

/// One player's slice of a linear-combination transform: replace (or add)
/// action `target` so that playing it is payoff-equivalent to mixing the
/// player's actions with integer weights `combo`; `kappa` scales the
/// probability mass shifted onto the target.
struct LinCombPlayer {
  Action target;
  std::map<Action, Integer> combo;
  Rational kappa;
};

using LinCombSpec = std::vector<LinCombPlayer>;

namespace detail {

inline void check_lincomb(const Game& g, const Profile& p, const LinCombSpec& spec) {
  if (spec.size() != g.players())
    throw std::invalid_argument("linear_combination_transform: spec arity mismatch");
  p.require_valid_for(g);
  for (std::size_t i = 0; i < g.players(); ++i) {
    const auto& pl = spec[i];
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("linear_combination_transform: player " + std::to_string(i + 1) +
                                  ": " + why);
    };
    Integer norm = 0;
    for (const auto& [a, k] : pl.combo) {
      if (k < 0) fail("combo weight of '" + a.name() + "' is negative");
      if (!g.has_action(i, a)) fail("combo uses unknown action '" + a.name() + "'");
      norm += k;
    }
    if (norm == 0) fail("combo must be nonzero");
    bool target_existing = g.has_action(i, pl.target);
    if (target_existing) {
      auto it = pl.combo.find(pl.target);
      if (it == pl.combo.end() || it->second == 0)
        fail("target '" + pl.target.name() + "' is an existing action but has zero combo weight");
    }
    if (pl.kappa < 0) fail("kappa is negative");
    // x_i = kappa * combo must satisfy x_i <= p_i and x_i(target) = p_i(target)
    for (const auto& [a, k] : pl.combo) {
      Rational x = pl.kappa * Rational(k);
      if (x > p.prob(i, a))
        fail("kappa*combo exceeds the profile probability at '" + a.name() + "' (" +
             format_rational(x) + " > " + format_rational(p.prob(i, a)) + ")");
    }
    Rational x_target = target_existing ? pl.kappa * Rational(pl.combo.at(pl.target)) : Rational(0);
    if (x_target != p.prob(i, pl.target))
      fail("kappa*combo at the target must equal the profile probability there (" +
           format_rational(x_target) + " != " + format_rational(p.prob(i, pl.target)) + ")");
  }
}

}  // namespace detail

/// Direct construction of the transformed game: the output payoff at a
/// profile is the exact multilinear expectation of G when every player whose
/// coordinate equals their target plays combo/|combo| instead.
inline std::pair<Game, Profile> linear_combination_transform(const Game& g, const Profile& p,
                                                             const LinCombSpec& spec) {
  detail::check_lincomb(g, p, spec);
  std::size_t n = g.players();
  ActionSets sets(g.action_sets());
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.has_action(i, spec[i].target)) {
      sets[i].push_back(spec[i].target);
      sets[i] = sorted_actions(std::move(sets[i]));
    }
  }
  std::vector<Integer> norm(n, Integer(0));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [a, k] : spec[i].combo) norm[i] += k;

  Game out = Game::build(sets, [&](const std::vector<std::size_t>& idx) {
    // Which players stand on their target?
    std::vector<std::size_t> mixing;
    std::vector<std::size_t> base_idx(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Action& a = sets[i][idx[i]];
      if (a == spec[i].target)
        mixing.push_back(i);
      else
        base_idx[i] = g.action_index(i, a);
    }
    std::vector<Rational> acc(n, Rational(0));
    // Iterate the support product of the mixing players' combos.
    std::vector<std::vector<std::pair<std::size_t, Integer>>> supports(mixing.size());
    for (std::size_t m = 0; m < mixing.size(); ++m)
      for (const auto& [a, k] : spec[mixing[m]].combo)
        if (k > 0) supports[m].push_back({g.action_index(mixing[m], a), k});
    std::vector<std::size_t> cursor(mixing.size(), 0);
    for (;;) {
      Rational w(1);
      for (std::size_t m = 0; m < mixing.size(); ++m) {
        auto [ai, k] = supports[m][cursor[m]];
        base_idx[mixing[m]] = ai;
        w *= Rational(k, norm[mixing[m]]);
      }
      std::size_t f = g.shape().flat(base_idx) * n;
      for (std::size_t i = 0; i < n; ++i) acc[i] += w * g.raw_payoffs()[f + i];
      std::size_t m = mixing.size();
      bool done = true;
      for (; m-- > 0;) {
        if (++cursor[m] < supports[m].size()) {
          done = false;
          break;
        }
        cursor[m] = 0;
      }
      if (done) break;
    }
    return acc;
  });

  std::vector<Profile::Strategy> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = p.strategy(i);
    Rational shifted = 0;
    for (const auto& [a, k] : spec[i].combo) {
      Rational x = spec[i].kappa * Rational(k);
      shifted += x;
      s[i][a] -= x;
    }
    s[i][spec[i].target] += shifted;
  }
  return {std::move(out), Profile(std::move(s))};
}

/// The same transform executed literally as clone, symmetrize, blow-down.
/// Exponentially slower; used to cross-check the direct construction.
inline std::pair<Game, Profile> linear_combination_transform_pipeline(const Game& g,
                                                                      const Profile& p,
                                                                      const LinCombSpec& spec) {
  detail::check_lincomb(g, p, spec);
  std::size_t n = g.players();
  FreshNames names(g);
  for (std::size_t i = 0; i < n; ++i) names.reserve(spec[i].target);

  // Step 1: add combo(a) clones of each action (one less for an existing target).
  BlowUpMap up;
  up.maps.resize(n);
  std::vector<ActionSet> moving(n);  // the clones plus the target if it exists
  for (std::size_t i = 0; i < n; ++i) {
    bool target_existing = g.has_action(i, spec[i].target);
    for (const auto& a : g.actions(i)) {
      up.maps[i][a] = a;
      Integer extra(0);
      auto it = spec[i].combo.find(a);
      if (it != spec[i].combo.end()) extra = it->second;
      if (target_existing && a == spec[i].target) {
        extra -= 1;
        moving[i].push_back(a);
      }
      for (Integer c = 0; c < extra; ++c) {
        Action clone = names.fresh(a.name() + "+" + spec[i].target.name());
        up.maps[i][clone] = a;
        moving[i].push_back(clone);
      }
    }
  }
  Game blown = blow_up(g, up);

  // Step 2: average over all permutations of the moving block of each player.
  ActionSets fixed(n);
  for (std::size_t i = 0; i < n; ++i) {
    ActionSet mv = sorted_actions(moving[i]);
    for (const auto& a : blown.actions(i))
      if (!std::binary_search(mv.begin(), mv.end(), a)) fixed[i].push_back(a);
  }
  Game averaged = symmetrize(blown, fixed);

  // Step 3: collapse the moving block (now clones) onto the target.
  BlowUpMap down;
  down.maps.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ActionSet mv = sorted_actions(moving[i]);
    for (const auto& a : averaged.actions(i))
      down.maps[i][a] = std::binary_search(mv.begin(), mv.end(), a) ? spec[i].target : a;
  }
  Game collapsed = blow_down(averaged, down);

  // Lift p, spreading the shifted mass uniformly over the moving block, then
  // push it down onto the target.
  std::vector<Profile::Strategy> lifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    lifted[i] = p.strategy(i);
    Rational shifted = 0;
    for (const auto& [a, k] : spec[i].combo) {
      Rational x = spec[i].kappa * Rational(k);
      shifted += x;
      lifted[i][a] -= x;
    }
    ActionSet mv = sorted_actions(moving[i]);
    Rational each = shifted / Rational(Integer(mv.size()));
    for (const auto& a : mv) lifted[i][a] += each;
  }
  Profile down_p = pushforward(down, Profile(std::move(lifted)));
  return {std::move(collapsed), std::move(down_p)};
}

/// Maximal clone-collapsing blow-down: groups each player's actions into
/// clone classes and maps every class to its first member.
inline BlowUpMap canonical_clone_collapse(const Game& g) {
  BlowUpMap map;
  map.maps.resize(g.players());
  std::size_t n = g.players();
  for (std::size_t i = 0; i < n; ++i) {
    // Clone classes keyed by the action's full payoff slice.
    std::map<std::vector<Rational>, Action> rep;
    for (const auto& a : g.actions(i)) {
      std::size_t ai = g.action_index(i, a);
      std::vector<Rational> slice;
      std::vector<std::size_t> idx(n, 0);
      do {
        if (idx[i] != ai) continue;
        std::size_t f = g.shape().flat(idx) * n;
        for (std::size_t j = 0; j < n; ++j) slice.push_back(g.raw_payoffs()[f + j]);
      } while (g.shape().next(idx));
      auto [it, inserted] = rep.try_emplace(std::move(slice), a);
      map.maps[i][a] = it->second;
    }
  }
  return map;
}

}  // namespace nfg
