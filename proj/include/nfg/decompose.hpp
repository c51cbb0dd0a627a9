#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nfg/algebra.hpp"
#include "nfg/equilibrium.hpp"
#include "nfg/game.hpp"
#include "nfg/morphism.hpp"

namespace nfg {

// ---------------------------------------------------------------------------
// Slice-stochastic tensors and their Birkhoff-von Neumann decomposition
// ---------------------------------------------------------------------------

struct SliceStochasticReport {
  bool ok = true;
  bool deterministic = false;
  std::string violation;  // first violated condition, if any
};

namespace detail {

/// Shape over all players except `skip`.
inline Shape others_shape(const Shape& full, std::size_t skip) {
  Shape s;
  for (std::size_t j = 0; j < full.dims.size(); ++j)
    if (j != skip) s.dims.push_back(full.dims[j]);
  s.strides.assign(s.dims.size(), 1);
  for (std::size_t i = s.dims.size(); i-- > 1;) s.strides[i - 1] = s.strides[i] * s.dims[i];
  s.total = s.dims.empty() ? 1 : s.strides[0] * s.dims[0];
  return s;
}

inline std::vector<std::size_t> insert_coord(const std::vector<std::size_t>& others,
                                             std::size_t player, std::size_t value) {
  std::vector<std::size_t> idx;
  idx.reserve(others.size() + 1);
  for (std::size_t j = 0; j <= others.size(); ++j) {
    if (j == player) idx.push_back(value);
    if (j < others.size()) idx.push_back(others[j]);
  }
  return idx;
}

inline Integer ipow(std::size_t base, std::size_t exp) {
  Integer r(1);
  for (std::size_t k = 0; k < exp; ++k) r *= Integer(base);
  return r;
}

}  // namespace detail

/// Checks the three slice-stochastic conditions for `player` exactly:
/// unit sums over each opposing slice, m^(n-2) sums over each own-action
/// hyperplane, and entries within [0, 1].
inline SliceStochasticReport is_slice_stochastic(const PayoffTensor& t, std::size_t player) {
  SliceStochasticReport rep;
  std::size_t n = t.action_sets.size();
  if (n < 2) throw std::invalid_argument("is_slice_stochastic: needs at least two players");
  if (player >= n) throw std::invalid_argument("is_slice_stochastic: bad player");
  std::size_t m = t.action_sets[0].size();
  for (const auto& s : t.action_sets)
    if (s.size() != m) throw std::invalid_argument("is_slice_stochastic: tensor is not cubical");

  rep.deterministic = true;
  for (const auto& v : t.values) {
    if (v != 0 && v != 1) rep.deterministic = false;
    if (v < 0 || v > 1) {
      rep.ok = false;
      rep.violation = "entry " + format_rational(v) + " outside [0,1]";
      return rep;
    }
  }
  detail::Shape others = detail::others_shape(t.shape(), player);
  std::vector<std::size_t> oidx(others.dims.size(), 0);
  bool more = true;
  std::vector<Rational> hyperplane(m, Rational(0));
  while (more) {
    Rational slice_sum = 0;
    for (std::size_t a = 0; a < m; ++a) {
      const Rational& v = t.at(detail::insert_coord(oidx, player, a));
      slice_sum += v;
      hyperplane[a] += v;
    }
    if (slice_sum != 1) {
      rep.ok = false;
      rep.violation = "a slice sums to " + format_rational(slice_sum) + ", expected 1";
      return rep;
    }
    more = others.dims.empty() ? false : others.next(oidx);
  }
  Rational expected(detail::ipow(m, n - 2));
  for (std::size_t a = 0; a < m; ++a) {
    if (hyperplane[a] != expected) {
      rep.ok = false;
      rep.violation = "hyperplane of action " + t.action_sets[player][a].name() + " sums to " +
                      format_rational(hyperplane[a]) + ", expected " + format_rational(expected);
      return rep;
    }
  }
  return rep;
}

/// A payoff tensor validated to be slice-stochastic for its player.
struct SliceStochasticTensor {
  PayoffTensor tensor;
  std::size_t player;
  bool deterministic;

  SliceStochasticTensor(PayoffTensor t, std::size_t player_index)
      : tensor(std::move(t)), player(player_index), deterministic(false) {
    SliceStochasticReport rep = is_slice_stochastic(tensor, player);
    if (!rep.ok)
      throw std::invalid_argument("tensor is not slice-stochastic for player " +
                                  std::to_string(player + 1) + ": " + rep.violation);
    deterministic = rep.deterministic;
  }
};

namespace detail {

/// Unit-capacity Kuhn matching over expanded capacity slots: can every left
/// item be placed on an allowed action without exceeding the capacities?
struct SlotMatcher {
  std::size_t actions;
  std::vector<std::size_t> slot_of_action;  // prefix offsets
  std::vector<long long> match;             // slot -> left item (or -1)

  SlotMatcher(const std::vector<std::size_t>& caps) : actions(caps.size()) {
    slot_of_action.assign(actions + 1, 0);
    for (std::size_t a = 0; a < actions; ++a)
      slot_of_action[a + 1] = slot_of_action[a] + caps[a];
    match.assign(slot_of_action[actions], -1);
  }

  bool try_place(std::size_t item, const std::vector<std::vector<std::size_t>>& allowed,
                 std::vector<bool>& visited) {
    for (std::size_t a : allowed[item]) {
      for (std::size_t s = slot_of_action[a]; s < slot_of_action[a + 1]; ++s) {
        if (visited[s]) continue;
        visited[s] = true;
        if (match[s] < 0 ||
            try_place(static_cast<std::size_t>(match[s]), allowed, visited)) {
          match[s] = static_cast<long long>(item);
          return true;
        }
      }
    }
    return false;
  }

  bool place_all(const std::vector<std::vector<std::size_t>>& allowed) {
    for (std::size_t item = 0; item < allowed.size(); ++item) {
      std::vector<bool> visited(match.size(), false);
      if (!try_place(item, allowed, visited)) return false;
    }
    return true;
  }
};

inline bool assignment_feasible(const std::vector<std::vector<std::size_t>>& allowed,
                                const std::vector<std::size_t>& caps) {
  SlotMatcher matcher(caps);
  return matcher.place_all(allowed);
}

}  // namespace detail

/// Decomposes a slice-stochastic tensor into a convex combination of
/// deterministic slice-stochastic tensors. Each extraction picks the
/// lexicographically smallest feasible assignment of one own-action per
/// opposing slice (a degree-constrained bipartite subgraph found by exact
/// matching) and subtracts it with the minimal residual weight.
inline std::vector<std::pair<Rational, PayoffTensor>> bvn_decompose(
    const SliceStochasticTensor& t) {
  std::size_t n = t.tensor.action_sets.size();
  std::size_t m = t.tensor.action_sets[0].size();
  std::size_t player = t.player;
  detail::Shape others = detail::others_shape(t.tensor.shape(), player);
  std::size_t slices = others.total;
  Integer capacity = detail::ipow(m, n - 2);

  std::vector<Rational> residual(t.tensor.values);
  auto entry = [&](std::size_t slice, std::size_t a) -> Rational& {
    std::vector<std::size_t> oidx = others.unflat(slice);
    return residual[t.tensor.shape().flat(detail::insert_coord(oidx, player, a))];
  };

  std::vector<std::pair<Rational, PayoffTensor>> terms;
  auto residual_zero = [&]() {
    for (const auto& v : residual)
      if (v != 0) return false;
    return true;
  };

  while (!residual_zero()) {
    // allowed actions per slice: support of the residual
    std::vector<std::vector<std::size_t>> allowed(slices);
    for (std::size_t s = 0; s < slices; ++s)
      for (std::size_t a = 0; a < m; ++a)
        if (entry(s, a) > 0) allowed[s].push_back(a);

    std::vector<std::size_t> caps(m, capacity.convert_to<std::size_t>());

    // lexicographically smallest assignment: fix slices in order, trying the
    // smallest action whose removal keeps the rest completable
    std::vector<std::size_t> chosen(slices);
    for (std::size_t s = 0; s < slices; ++s) {
      bool placed = false;
      for (std::size_t a : allowed[s]) {
        if (caps[a] == 0) continue;
        --caps[a];
        std::vector<std::vector<std::size_t>> rest(allowed.begin() + s + 1, allowed.end());
        if (detail::assignment_feasible(rest, caps)) {
          chosen[s] = a;
          placed = true;
          break;
        }
        ++caps[a];
      }
      if (!placed)
        throw std::logic_error("bvn_decompose: extraction infeasible on a valid residual");
    }

    Rational weight;
    bool first = true;
    for (std::size_t s = 0; s < slices; ++s) {
      const Rational& v = entry(s, chosen[s]);
      if (first || v < weight) weight = v;
      first = false;
    }
    std::vector<Rational> det(t.tensor.values.size(), Rational(0));
    for (std::size_t s = 0; s < slices; ++s) {
      std::vector<std::size_t> oidx = others.unflat(s);
      det[t.tensor.shape().flat(detail::insert_coord(oidx, player, chosen[s]))] = 1;
      entry(s, chosen[s]) -= weight;
    }
    terms.push_back({weight, PayoffTensor(t.tensor.action_sets, std::move(det), player)});
  }
  return terms;
}

// ---------------------------------------------------------------------------
// The slice-stochastic transform of an arbitrary game
// ---------------------------------------------------------------------------

struct SliceStochasticTransform {
  std::vector<PayoffTensor> t;  // T_i(a) = epsilon * p_i(a_i)
  std::vector<PayoffTensor> s;  // per-player correction, constant for i
  Game bar;                     // the slice-stochastic game
  Rational epsilon;
};

/// Rewrites a game with a full-support equilibrium p into one whose payoff
/// tensors are slice-stochastic and where uniform play is an equilibrium:
/// bar G_i = G_i Hadamard-multiplied with the opponents' T_j, plus a
/// correction constant for i. epsilon starts small and halves until every
/// entry lands in [0, 1]; the sum conditions hold exactly by construction.
inline SliceStochasticTransform slice_stochastic_transform(const Game& g, const Profile& p) {
  std::size_t n = g.players();
  std::size_t m = g.action_count(0);
  for (std::size_t i = 0; i < n; ++i)
    if (g.action_count(i) != m)
      throw std::invalid_argument("slice_stochastic_transform: action sets must have equal size");
  p.require_valid_for(g);
  for (std::size_t i = 0; i < n; ++i)
    if (p.support(i).size() != m)
      throw std::invalid_argument("slice_stochastic_transform: profile of player " +
                                  std::to_string(i + 1) + " does not have full support");
  if (!regret(g, p).is_nash())
    throw std::invalid_argument("slice_stochastic_transform: profile is not an equilibrium");

  Rational max_abs(0);
  for (const auto& v : g.raw_payoffs())
    if (rational_abs(v) > max_abs) max_abs = rational_abs(v);
  Rational eps = Rational(1) / (2 * Rational(detail::ipow(m, n)) * (1 + max_abs));

  // probabilities by action index, per player
  std::vector<std::vector<Rational>> prob(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob[i].resize(m);
    for (std::size_t a = 0; a < m; ++a) prob[i][a] = p.prob(i, g.actions(i)[a]);
  }

  for (;; eps /= 2) {
    std::vector<std::vector<Rational>> hat(n);  // hat G_i, flat
    for (std::size_t i = 0; i < n; ++i) {
      hat[i].assign(g.profile_count(), Rational(0));
      std::vector<std::size_t> idx(n, 0);
      do {
        Rational factor(1);
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) factor *= eps * prob[j][idx[j]];
        std::size_t f = g.shape().flat(idx);
        hat[i][f] = g.payoff(f, i) * factor;
      } while (g.shape().next(idx));
    }
    // corrections: S_i depends only on the opponents' actions
    std::vector<std::vector<Rational>> corr(n);
    bool in_range = true;
    std::vector<Rational> bar_payoffs(g.profile_count() * n);
    for (std::size_t i = 0; i < n && in_range; ++i) {
      corr[i].assign(g.profile_count(), Rational(0));
      detail::Shape others = detail::others_shape(g.shape(), i);
      std::vector<std::size_t> oidx(others.dims.size(), 0);
      bool more = true;
      while (more) {
        Rational column_sum = 0;
        for (std::size_t a = 0; a < m; ++a)
          column_sum += hat[i][g.shape().flat(detail::insert_coord(oidx, i, a))];
        Rational s_val = (Rational(1) - column_sum) / Rational(Integer(m));
        for (std::size_t a = 0; a < m; ++a) {
          std::size_t f = g.shape().flat(detail::insert_coord(oidx, i, a));
          corr[i][f] = s_val;
          Rational bar = hat[i][f] + s_val;
          if (bar < 0 || bar > 1) {
            in_range = false;
            break;
          }
          bar_payoffs[f * n + i] = bar;
        }
        if (!in_range) break;
        more = others.dims.empty() ? false : others.next(oidx);
      }
    }
    if (!in_range) continue;

    SliceStochasticTransform out{{}, {}, Game(g.action_sets(), std::move(bar_payoffs)), eps};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> tv(g.profile_count());
      std::vector<std::size_t> idx(n, 0);
      do {
        tv[g.shape().flat(idx)] = eps * prob[i][idx[i]];
      } while (g.shape().next(idx));
      out.t.push_back(PayoffTensor(g.action_sets(), std::move(tv), i));
      out.s.push_back(PayoffTensor(g.action_sets(), std::move(corr[i]), i));
    }
    // verify the advertised postconditions exactly
    for (std::size_t i = 0; i < n; ++i) {
      SliceStochasticReport rep = is_slice_stochastic(PayoffTensor::of_player(out.bar, i), i);
      if (!rep.ok)
        throw std::logic_error("slice_stochastic_transform: output not slice-stochastic: " +
                               rep.violation);
    }
    if (!regret(out.bar, Profile::uniform(out.bar)).is_nash())
      throw std::logic_error("slice_stochastic_transform: uniform play not an equilibrium");
    return out;
  }
}

// ---------------------------------------------------------------------------
// Cyclic and almost cyclic games
// ---------------------------------------------------------------------------

using Permutation = std::vector<std::size_t>;  // pi[k] = image of k, over 0..m-1

inline void require_permutation(const Permutation& pi) {
  std::vector<bool> seen(pi.size(), false);
  for (std::size_t v : pi) {
    if (v >= pi.size() || seen[v])
      throw std::invalid_argument("permutation: not a bijection on [m]");
    seen[v] = true;
  }
}

/// True iff the permutation is a single m-cycle; fixed subsets are exactly
/// unions of cycles, so this is equivalent to having no non-trivial fixed
/// subset.
inline bool has_single_cycle(const Permutation& pi) {
  require_permutation(pi);
  if (pi.empty()) return false;
  std::size_t steps = 0, at = 0;
  do {
    at = pi[at];
    ++steps;
  } while (at != 0);
  return steps == pi.size();
}

inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation r(inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) r[k] = outer[inner[k]];
  return r;
}

inline Permutation invert(const Permutation& pi) {
  Permutation r(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) r[pi[k]] = k;
  return r;
}

inline Permutation identity_permutation(std::size_t m) {
  Permutation r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = k;
  return r;
}

inline Permutation canonical_cycle(std::size_t m) {
  Permutation r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = (k + 1) % m;
  return r;
}

/// A cyclic game: player j is rewarded alpha_j when their action matches the
/// transition applied to the preceding player's action, and the composed
/// transition around the cycle is a single m-cycle.
struct CyclicSpec {
  std::size_t m = 0;
  std::size_t players = 0;
  std::vector<Permutation> transitions;  // transitions[j]: player j's action -> matched action of player j+1
  std::vector<Rational> alpha;

  void validate() const {
    if (players < 1 || m < 1) throw std::invalid_argument("cyclic spec: empty");
    if (transitions.size() != players || alpha.size() != players)
      throw std::invalid_argument("cyclic spec: arity mismatch");
    for (const auto& t : transitions) {
      if (t.size() != m) throw std::invalid_argument("cyclic spec: transition size mismatch");
      require_permutation(t);
    }
    for (const auto& a : alpha)
      if (a <= 0) throw std::invalid_argument("cyclic spec: alpha must be positive");
    Permutation comp = identity_permutation(m);
    for (std::size_t j = 0; j < players; ++j) comp = compose(transitions[j], comp);
    if (!has_single_cycle(comp))
      throw std::invalid_argument("cyclic spec: composed transition has a non-trivial fixed subset");
  }
};

/// Index profiles forming a permutation set: every action of every player is
/// hit exactly once.
using IndexProfile = std::vector<std::size_t>;

inline void require_permutation_set(const std::vector<IndexProfile>& astar, std::size_t players,
                                    std::size_t m) {
  if (astar.size() != m) throw std::invalid_argument("permutation set: size must equal m");
  for (std::size_t j = 0; j < players; ++j) {
    std::vector<bool> seen(m, false);
    for (const auto& a : astar) {
      if (a.size() != players) throw std::invalid_argument("permutation set: profile arity");
      if (a[j] >= m || seen[a[j]])
        throw std::invalid_argument("permutation set: player " + std::to_string(j + 1) +
                                    " does not hit every action exactly once");
      seen[a[j]] = true;
    }
  }
}

/// Cyclic except for one player, whose reward is removed on a permutation set
/// of profiles that match the player's own transition but break some other
/// player's.
struct AlmostCyclicSpec {
  CyclicSpec base;
  std::size_t exceptional = 0;
  std::vector<IndexProfile> astar;

  void validate() const {
    base.validate();
    std::size_t n = base.players;
    std::size_t m = base.m;
    if (n < 3) throw std::invalid_argument("almost cyclic spec: needs at least three players");
    if (exceptional >= n) throw std::invalid_argument("almost cyclic spec: bad player");
    require_permutation_set(astar, n, m);
    std::size_t i = exceptional;
    for (const auto& a : astar) {
      std::size_t prev = (i + n - 1) % n;
      if (a[i] != base.transitions[prev][a[prev]])
        throw std::invalid_argument("almost cyclic spec: a starred profile breaks the exceptional "
                                    "player's own match");
      bool mismatch = false;
      for (std::size_t j = 0; j < n && !mismatch; ++j) {
        if (j == i || j == (i + 1) % n) continue;
        std::size_t pj = (j + n - 1) % n;
        if (a[j] != base.transitions[pj][a[pj]]) mismatch = true;
      }
      if (!mismatch)
        throw std::invalid_argument("almost cyclic spec: a starred profile has no mismatch away "
                                    "from the exceptional player");
    }
  }
};

inline Game make_cyclic_game(const CyclicSpec& spec, const ActionSets& sets) {
  spec.validate();
  if (sets.size() != spec.players)
    throw std::invalid_argument("make_cyclic_game: action set arity mismatch");
  for (const auto& s : sets)
    if (s.size() != spec.m) throw std::invalid_argument("make_cyclic_game: action set size");
  std::size_t n = spec.players;
  return Game::build(sets, [&](const std::vector<std::size_t>& idx) {
    std::vector<Rational> v(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t prev = (j + n - 1) % n;
      if (idx[j] == spec.transitions[prev][idx[prev]]) v[j] = spec.alpha[j];
    }
    return v;
  });
}

inline Game make_cyclic_game(const CyclicSpec& spec) {
  return make_cyclic_game(spec, numbered_action_sets(spec.players, spec.m));
}

inline Game make_almost_cyclic_game(const AlmostCyclicSpec& spec, const ActionSets& sets) {
  spec.validate();
  Game base = make_cyclic_game(spec.base, sets);
  std::size_t n = spec.base.players;
  std::vector<Rational> payoffs(base.raw_payoffs());
  for (const auto& a : spec.astar)
    payoffs[base.shape().flat(a) * n + spec.exceptional] = 0;
  return Game(base.action_sets(), std::move(payoffs));
}

inline Game make_almost_cyclic_game(const AlmostCyclicSpec& spec) {
  return make_almost_cyclic_game(spec, numbered_action_sets(spec.base.players, spec.base.m));
}

// ---------------------------------------------------------------------------
// Permutation games and their decomposition
// ---------------------------------------------------------------------------

/// A full profile set hitting every action of every player exactly once.
struct PermutationSet {
  ActionSets action_sets;
  std::vector<IndexProfile> profiles;

  PermutationSet(ActionSets sets, std::vector<IndexProfile> index_profiles)
      : action_sets(std::move(sets)), profiles(std::move(index_profiles)) {
    detail::check_action_sets(action_sets);
    std::size_t m = action_sets[0].size();
    for (const auto& s : action_sets)
      if (s.size() != m)
        throw std::invalid_argument("permutation set: action sets must have equal size");
    require_permutation_set(profiles, action_sets.size(), m);
  }

  std::size_t players() const { return action_sets.size(); }
  std::size_t m() const { return action_sets[0].size(); }

  /// The profile containing a given action of a given player.
  const IndexProfile& profile_through(std::size_t player, std::size_t action) const {
    for (const auto& a : profiles)
      if (a[player] == action) return a;
    throw std::logic_error("permutation set: missing profile");
  }

  bool contains(const std::vector<std::size_t>& idx) const {
    for (const auto& a : profiles)
      if (a == idx) return true;
    return false;
  }
};

/// Player i receives 1 on the permutation set and 0 elsewhere; all other
/// players receive identically 0.
inline Game make_permutation_game(std::size_t player, const PermutationSet& astar) {
  if (player >= astar.players()) throw std::invalid_argument("make_permutation_game: bad player");
  std::size_t n = astar.players();
  return Game::build(astar.action_sets, [&](const std::vector<std::size_t>& idx) {
    std::vector<Rational> v(n, Rational(0));
    if (astar.contains(idx)) v[player] = 1;
    return v;
  });
}

/// Weighted components plus a per-player affine correction reconstructing a
/// source game exactly: alpha * (sum of weight_k * component_k) + beta.
struct Decomposition {
  std::vector<Rational> weights;
  std::vector<Game> components;
  std::vector<std::variant<CyclicSpec, AlmostCyclicSpec>> certificates;
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
  std::optional<BlowUpMap> witness;

  Game reconstruct() const {
    Game sum = convex_combine(components, weights);
    return affine_transform(sum, alpha, beta);
  }
};

namespace detail {

inline std::vector<Permutation> all_permutations(std::size_t m) {
  std::vector<std::size_t> base(m);
  for (std::size_t k = 0; k < m; ++k) base[k] = k;
  std::vector<Permutation> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

inline std::vector<Permutation> single_cycles(std::size_t m) {
  std::vector<Permutation> out;
  for (const auto& pi : all_permutations(m))
    if (has_single_cycle(pi)) out.push_back(pi);
  return out;
}

/// All transition tuples whose composition around the cycle is a single
/// m-cycle, in lexicographic order.
inline std::vector<std::vector<Permutation>> single_cycle_tuples(std::size_t m, std::size_t n) {
  std::vector<Permutation> perms = all_permutations(m);
  std::vector<Permutation> cycles = single_cycles(m);
  std::vector<std::vector<Permutation>> tuples;
  // choose the first n-1 transitions freely; the last is determined by the
  // target composed cycle
  std::vector<std::size_t> pick(n - 1, 0);
  bool done = false;
  while (!done) {
    Permutation prefix = identity_permutation(m);
    std::vector<Permutation> tuple;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      tuple.push_back(perms[pick[j]]);
      prefix = compose(perms[pick[j]], prefix);
    }
    for (const auto& target : cycles) {
      std::vector<Permutation> full(tuple);
      full.push_back(compose(target, invert(prefix)));
      tuples.push_back(std::move(full));
    }
    done = true;
    for (std::size_t j = n - 1; j-- > 0;) {
      if (++pick[j] < perms.size()) {
        done = false;
        break;
      }
      pick[j] = 0;
    }
  }
  std::sort(tuples.begin(), tuples.end());
  return tuples;
}

}  // namespace detail

/// Writes the permutation game for (player, astar) as a convex combination of
/// cyclic games, almost cyclic games and a constant, following the recipe:
/// transitions realizing the permutation set with a single-cycle completion,
/// a shift family of almost cyclic games covering the exceptional player's
/// matched profiles, every single-cycle transition tuple as a cyclic
/// component, and boosted alphas on the tuples that flatten the mismatch
/// rows. The reconstruction identity is verified exactly before returning.
inline Decomposition decompose_permutation_game(std::size_t player, const PermutationSet& astar) {
  std::size_t n = astar.players();
  std::size_t m = astar.m();
  if (n < 2) throw std::invalid_argument("decompose_permutation_game: needs at least two players");
  {
    // enumeration guard: (m!)^n tuples considered
    double bound = 1;
    for (std::size_t f = 2; f <= m; ++f) bound *= static_cast<double>(f);
    double total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= bound;
    if (total > 1e6)
      throw std::invalid_argument(
          "decompose_permutation_game: (m!)^n = " + std::to_string(total) +
          " exceeds the 1e6 enumeration bound (m=" + std::to_string(m) +
          ", n=" + std::to_string(n) + ")");
  }
  std::size_t i = player;
  Game source = make_permutation_game(player, astar);

  // transitions realizing astar; the one out of the exceptional player is
  // replaced so that the composition is the canonical m-cycle
  std::vector<Permutation> t(n, Permutation(m));
  for (const auto& a : astar.profiles)
    for (std::size_t j = 0; j < n; ++j) t[j][a[j]] = a[(j + 1) % n];
  {
    Permutation before = identity_permutation(m);  // composition of t[0..i-1]
    for (std::size_t j = 0; j < i; ++j) before = compose(t[j], before);
    Permutation after = identity_permutation(m);  // composition of t[i+1..n-1]
    for (std::size_t j = i + 1; j < n; ++j) after = compose(t[j], after);
    t[i] = compose(invert(after), compose(canonical_cycle(m), invert(before)));
  }

  Decomposition dec;
  dec.alpha.assign(n, Rational(1));
  dec.beta.assign(n, Rational(0));

  // Shift family of almost cyclic games partitioning the exceptional
  // player's matched profiles outside astar (n >= 3 only; empty for n = 2).
  std::size_t M = 0;
  if (n >= 3) {
    std::vector<std::size_t> shift_players;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && j != (i + 1) % n) shift_players.push_back(j);
    std::vector<std::size_t> s(shift_players.size(), 0);
    for (;;) {
      // advance odometer, skipping the all-zero shift
      bool carry = true;
      for (std::size_t k = s.size(); k-- > 0;) {
        if (++s[k] < m) {
          carry = false;
          break;
        }
        s[k] = 0;
      }
      if (carry) break;
      std::vector<IndexProfile> bset;
      for (const auto& a : astar.profiles) {
        IndexProfile b(a);
        for (std::size_t k = 0; k < shift_players.size(); ++k)
          b[shift_players[k]] = (a[shift_players[k]] + s[k]) % m;
        std::size_t prev = (i + n - 1) % n;
        b[i] = t[prev][b[prev]];
        bset.push_back(std::move(b));
      }
      AlmostCyclicSpec spec{CyclicSpec{m, n, t, std::vector<Rational>(n, Rational(1))}, i, bset};
      spec.validate();
      dec.components.push_back(make_almost_cyclic_game(spec, astar.action_sets));
      dec.certificates.push_back(spec);
      ++M;
    }
    if (M + 1 != static_cast<std::size_t>(detail::ipow(m, n - 2)))
      throw std::logic_error("decompose_permutation_game: shift family has the wrong size");
  }

  // Every single-cycle transition tuple becomes a cyclic component. A few
  // tuples carry boosted alphas: for each player j, the m-1 permutations
  // t[j-1] o c^k decompose j's mismatch pairs, and the first tuple carrying
  // each of them gets the flattening boost. For n = 2 the exceptional
  // player's own matched transition is boosted once instead.
  std::vector<std::vector<Permutation>> tuples = detail::single_cycle_tuples(m, n);
  std::vector<std::vector<Rational>> tuple_alpha(tuples.size(),
                                                 std::vector<Rational>(n, Rational(1)));
  auto first_tuple_with = [&](std::size_t coord, const Permutation& target) {
    for (std::size_t k = 0; k < tuples.size(); ++k)
      if (tuples[k][coord] == target) return k;
    throw std::logic_error("decompose_permutation_game: no tuple with required transition");
  };
  if (n >= 3) {
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t prev = (j + n - 1) % n;
      Rational extra{Integer(M)};
      if (j == i) extra -= 1;  // the shift family already raises the starred rows by one
      if (extra == 0) continue;
      Permutation power = identity_permutation(m);
      const Permutation cycle = canonical_cycle(m);
      for (std::size_t k = 1; k < m; ++k) {
        power = compose(power, cycle);
        tuple_alpha[first_tuple_with(prev, compose(t[prev], power))][j] += extra;
      }
    }
  } else {
    std::size_t prev = (i + n - 1) % n;  // the transition into the exceptional player
    tuple_alpha[first_tuple_with(prev, t[prev])][i] += 1;
  }
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    CyclicSpec spec{m, n, tuples[k], tuple_alpha[k]};
    spec.validate();
    dec.components.push_back(make_cyclic_game(spec, astar.action_sets));
    dec.certificates.push_back(spec);
  }

  // Derive the constant offset and verify the exact identity.
  std::size_t count = dec.components.size();
  Game total = convex_combine(dec.components,
                              std::vector<Rational>(count, Rational(Integer(1), Integer(count))));
  // rescale: components keep their shape but absorb the factor `count`
  for (auto& c : dec.components) {
    std::vector<Rational> pay(c.raw_payoffs());
    for (auto& v : pay) v *= Rational(Integer(count));
    c = Game(c.action_sets(), std::move(pay));
  }
  for (auto& cert : dec.certificates) {
    if (std::holds_alternative<CyclicSpec>(cert)) {
      for (auto& a : std::get<CyclicSpec>(cert).alpha) a *= Rational(Integer(count));
    } else {
      for (auto& a : std::get<AlmostCyclicSpec>(cert).base.alpha) a *= Rational(Integer(count));
    }
  }
  dec.weights.assign(count, Rational(Integer(1), Integer(count)));

  // beta: the summed payoffs are flat for every player except the extra unit
  // on the permutation set itself; read the offset off a reference profile.
  std::vector<std::size_t> ref_idx(n, 0);
  bool ref_is_starred = astar.contains(ref_idx);
  if (ref_is_starred) {
    std::vector<std::size_t> idx(n, 0);
    do {
      if (!astar.contains(idx)) {
        ref_idx = idx;
        ref_is_starred = false;
        break;
      }
    } while (total.shape().next(idx));
  }
  std::size_t ref = total.shape().flat(ref_idx);
  for (std::size_t j = 0; j < n; ++j) {
    Rational target = ref_is_starred && j == i ? Rational(1) : Rational(0);
    dec.beta[j] = target - Rational(Integer(count)) * total.payoff(ref, j);
  }

  if (!(dec.reconstruct() == source))
    throw std::logic_error(
        "decompose_permutation_game: reconstruction mismatch (flatness verification failed)");
  return dec;
}

// ---------------------------------------------------------------------------
// Decomposition of deterministic slice-stochastic games
// ---------------------------------------------------------------------------

struct SliceStochasticDecomposition {
  BlowUpMap map;                 // blown-up actions onto the source actions
  std::vector<Rational> alpha;   // per-player scale applied to bar_game
  std::vector<Rational> beta;    // per-player offset
  Decomposition hat_decomposition;  // of the permutation game on the blow-up
  Game hat_game;                 // the lifted permutation game
  Game bar_game;                 // fiber-symmetrized average of hat_game
};

/// Lifts a player-i payoff game with a deterministic slice-stochastic tensor
/// to a permutation game on composite actions (action, witnessing opposing
/// profile), decomposes that, and symmetrizes over the fibers in closed form.
/// The exact identity source = blow_down(alpha * bar_game + beta) is verified
/// before returning.
inline SliceStochasticDecomposition decompose_slice_stochastic_game(const Game& g,
                                                                    std::size_t player) {
  std::size_t n = g.players();
  std::size_t m = g.action_count(0);
  if (!is_player_payoff_game(g, player))
    throw std::invalid_argument(
        "decompose_slice_stochastic_game: not a player-" + std::to_string(player + 1) +
        " payoff game");
  SliceStochasticTensor tensor(PayoffTensor::of_player(g, player), player);
  if (!tensor.deterministic)
    throw std::invalid_argument("decompose_slice_stochastic_game: tensor is not deterministic");

  // supp(G_player) as index profiles
  std::vector<IndexProfile> astar;
  {
    std::vector<std::size_t> idx(n, 0);
    do {
      if (g.payoff(g.shape().flat(idx), player) == 1) astar.push_back(idx);
    } while (g.shape().next(idx));
  }

  // composite actions: (own action, witnessing opposing profile)
  ActionSets hat_sets(n);
  // per player: list of (own action index, full profile index of the witness)
  std::vector<std::vector<std::pair<std::size_t, IndexProfile>>> composites(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& a : astar) {
      std::string label = g.actions(j)[a[j]].name() + "|";
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        label += g.actions(k)[a[k]].name();
        label += ".";
      }
      hat_sets[j].push_back(Action(label));
      composites[j].push_back({a[j], a});
    }
    // sort composite actions and the bookkeeping in parallel
    std::vector<std::size_t> order(hat_sets[j].size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return hat_sets[j][x] < hat_sets[j][y];
    });
    ActionSet sorted_set;
    std::vector<std::pair<std::size_t, IndexProfile>> sorted_comp;
    for (std::size_t k : order) {
      sorted_set.push_back(hat_sets[j][k]);
      sorted_comp.push_back(composites[j][k]);
    }
    hat_sets[j] = std::move(sorted_set);
    composites[j] = std::move(sorted_comp);
  }

  // lifted permutation set: one composite profile per starred profile
  std::vector<IndexProfile> hat_star;
  for (const auto& a : astar) {
    IndexProfile h(n);
    for (std::size_t j = 0; j < n; ++j) {
      bool found = false;
      for (std::size_t c = 0; c < composites[j].size(); ++c)
        if (composites[j][c].second == a) {
          h[j] = c;
          found = true;
          break;
        }
      if (!found) throw std::logic_error("decompose_slice_stochastic_game: missing composite");
    }
    hat_star.push_back(std::move(h));
  }
  PermutationSet hat_astar(hat_sets, hat_star);
  Game hat_game = make_permutation_game(player, hat_astar);
  Decomposition hat_dec = decompose_permutation_game(player, hat_astar);

  // the blow-down map: first coordinate projection
  BlowUpMap map;
  map.maps.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < composites[j].size(); ++c)
      map.maps[j][hat_sets[j][c]] = g.actions(j)[composites[j][c].first];

  // fiber blocks for the closed-form symmetrization
  std::vector<std::vector<ActionSet>> blocks(n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& base : map.image(j)) blocks[j].push_back(map.fiber(j, base));
  Game bar_game = symmetrize_blocks(hat_game, blocks);

  SliceStochasticDecomposition out{std::move(map),
                                   std::vector<Rational>(n, Rational(detail::ipow(m, n * (n - 2)))),
                                   std::vector<Rational>(n, Rational(0)),
                                   std::move(hat_dec),
                                   std::move(hat_game),
                                   std::move(bar_game)};

  Game scaled = affine_transform(out.bar_game, out.alpha, out.beta);
  if (!(blow_down(scaled, out.map) == g))
    throw std::logic_error("decompose_slice_stochastic_game: reconstruction mismatch");
  return out;
}

// ---------------------------------------------------------------------------
// Shape preparation for the full-support reduction splits
// ---------------------------------------------------------------------------

/// Contorts the game so that the given players' equilibrium strategies become
/// uniform on their supports; the equilibrium property is preserved.
inline std::pair<Game, Profile> uniformize_equilibrium(const Game& g, const Profile& p,
                                                       const std::vector<std::size_t>& players) {
  Game cur = g;
  Profile q = p;
  for (std::size_t i : players) {
    ActionSet sup = q.support(i);
    std::map<Action, Rational> weights;
    for (const auto& a : cur.actions(i)) {
      Rational pr = q.prob(i, a);
      weights[a] = pr > 0 ? pr * Rational(Integer(sup.size())) : Rational(1);
    }
    Profile next = contort_profile(cur, q, i, weights);
    cur = hadamard_contort(cur, i, weights);
    q = next;
  }
  return {std::move(cur), std::move(q)};
}

inline std::pair<Game, Profile> uniformize_equilibrium(const Game& g, const Profile& p) {
  std::vector<std::size_t> all(g.players());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return uniformize_equilibrium(g, p, all);
}

struct PaddedInstance {
  Game game;
  Profile profile;
  BlowUpMap map;  // padded actions onto the original ones
};

/// Blow-up that replaces each listed action by the given number of clones
/// (multiplicity >= 1), splitting the action's probability mass uniformly
/// over its clones. Unlisted actions keep multiplicity 1.
inline PaddedInstance clone_actions(const Game& g, const Profile& p,
                                    const std::vector<std::map<Action, std::size_t>>& multiplicity) {
  if (multiplicity.size() != g.players())
    throw std::invalid_argument("clone_actions: arity mismatch");
  FreshNames names(g);
  BlowUpMap map;
  map.maps.resize(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    for (const auto& a : g.actions(i)) {
      auto it = multiplicity[i].find(a);
      std::size_t count = it == multiplicity[i].end() ? 1 : it->second;
      if (count == 0) throw std::invalid_argument("clone_actions: multiplicity must be >= 1");
      map.maps[i][a] = a;
      for (std::size_t c = 1; c < count; ++c) map.maps[i][names.fresh(a.name() + "~")] = a;
    }
  }
  Game blown = blow_up(g, map);
  Profile lifted = preimage_profile(map, p, uniform_split(map));
  return {std::move(blown), std::move(lifted), std::move(map)};
}

/// One clone pair of in-support actions together with the out-of-support
/// action they will dominate (or be cloned with) in the split halves.
struct SplitTriple {
  Action a;
  Action b;
  Action c;
};

namespace detail {

/// Pairs a player's support actions within clone classes; throws if any class
/// has odd size.
inline std::vector<std::pair<Action, Action>> pair_support_clones(const Game& g, std::size_t i,
                                                                  const ActionSet& support) {
  std::vector<std::pair<Action, Action>> pairs;
  ActionSet remaining(support);
  while (!remaining.empty()) {
    Action head = remaining.front();
    ActionSet cls, rest;
    for (const auto& x : remaining)
      (are_clones(g, i, head, x) ? cls : rest).push_back(x);
    if (cls.size() % 2 != 0)
      throw std::invalid_argument("support of player " + std::to_string(i + 1) +
                                  " has a clone class of odd size at '" + head.name() + "'");
    for (std::size_t k = 0; k + 1 < cls.size(); k += 2) pairs.push_back({cls[k], cls[k + 1]});
    remaining = rest;
  }
  return pairs;
}

inline void require_uniform_on_support(const Profile& p, std::size_t i) {
  ActionSet sup = p.support(i);
  Rational expect(Integer(1), Integer(sup.size()));
  for (const auto& a : sup)
    if (p.prob(i, a) != expect)
      throw std::invalid_argument("profile of player " + std::to_string(i + 1) +
                                  " is not uniform on its support");
}

}  // namespace detail

struct QuasiStrictSplit {
  Game g1;
  Game g2;
  std::vector<std::vector<SplitTriple>> triples;  // per player
  // v[i][k]: correction over opposing profiles, flat over the shape of the
  // other players' action sets; sums to zero over the support box.
  std::vector<std::vector<std::vector<Rational>>> v;
};

/// Splits a game with a quasi-strict equilibrium of the canonical padded
/// shape into two halves averaging to it exactly. In the first half every
/// paired support action dominates its assigned out-of-support action after
/// the correction; in the second half the pair roles are swapped.
inline QuasiStrictSplit quasi_strict_split(const Game& g, const Profile& p) {
  std::size_t n = g.players();
  if (!is_quasi_strict(g, p))
    throw std::invalid_argument("quasi_strict_split: profile is not a quasi-strict equilibrium");
  std::vector<std::vector<SplitTriple>> triples(n);
  for (std::size_t i = 0; i < n; ++i) {
    ActionSet sup = p.support(i);
    ActionSet out;
    for (const auto& a : g.actions(i))
      if (!std::binary_search(sup.begin(), sup.end(), a)) out.push_back(a);
    if (out.empty())
      throw std::invalid_argument("quasi_strict_split: player " + std::to_string(i + 1) +
                                  " has no out-of-support action; pad the game first");
    if (sup.size() != 2 * out.size())
      throw std::invalid_argument("quasi_strict_split: player " + std::to_string(i + 1) +
                                  " needs |support| = 2*|off-support| (" +
                                  std::to_string(sup.size()) + " vs " + std::to_string(out.size()) +
                                  ")");
    detail::require_uniform_on_support(p, i);
    auto pairs = detail::pair_support_clones(g, i, sup);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      triples[i].push_back({pairs[k].first, pairs[k].second, out[k]});
  }

  QuasiStrictSplit result{g, g, triples, {}};
  result.v.resize(n);
  std::vector<Rational> pay1(g.raw_payoffs());
  std::vector<Rational> pay2(g.raw_payoffs());
  for (std::size_t i = 0; i < n; ++i) {
    detail::Shape others = detail::others_shape(g.shape(), i);
    // membership of each opposing profile in the support box
    std::vector<bool> in_support_box(others.total, false);
    {
      std::vector<ActionSet> sup(n);
      for (std::size_t j = 0; j < n; ++j) sup[j] = p.support(j);
      std::vector<std::size_t> oidx(others.dims.size(), 0);
      bool more = true;
      while (more) {
        bool inside = true;
        for (std::size_t j = 0, k = 0; j < n; ++j) {
          if (j == i) continue;
          const Action& aj = g.actions(j)[oidx[k]];
          if (!std::binary_search(sup[j].begin(), sup[j].end(), aj)) inside = false;
          ++k;
        }
        in_support_box[others.flat(oidx)] = inside;
        more = others.next(oidx);
      }
    }
    for (const auto& triple : triples[i]) {
      std::size_t ia = g.action_index(i, triple.a);
      std::size_t ib = g.action_index(i, triple.b);
      std::size_t ic = g.action_index(i, triple.c);
      // gap(a_{-i}) = G_i(c, a_{-i}) - G_i(a, a_{-i}); the quasi-strict sum
      // inequality makes its support-box total strictly negative.
      std::vector<Rational> gap(others.total);
      Rational support_total(0);
      std::size_t support_cells = 0;
      std::vector<std::size_t> oidx(others.dims.size(), 0);
      bool more = true;
      while (more) {
        std::size_t of = others.flat(oidx);
        std::size_t fa = g.shape().flat(detail::insert_coord(oidx, i, ia));
        std::size_t fc = g.shape().flat(detail::insert_coord(oidx, i, ic));
        gap[of] = g.payoff(fc, i) - g.payoff(fa, i);
        if (in_support_box[of]) {
          support_total += gap[of];
          ++support_cells;
        }
        more = others.next(oidx);
      }
      if (support_total >= 0)
        throw std::logic_error("quasi_strict_split: support-box inequality failed");
      bool already_dominated = true;
      for (const auto& gv : gap)
        if (gv >= 0) already_dominated = false;
      std::vector<Rational> correction(others.total, Rational(0));
      if (!already_dominated) {
        Rational slack = -support_total / Rational(Integer(support_cells));
        for (std::size_t of = 0; of < others.total; ++of)
          correction[of] = in_support_box[of] ? Rational(gap[of] + slack) : Rational(gap[of] + 1);
      }
      // apply: row a gains the correction, row b loses it; per opposing cell
      oidx.assign(others.dims.size(), 0);
      more = true;
      while (more) {
        std::size_t of = others.flat(oidx);
        std::size_t fa = g.shape().flat(detail::insert_coord(oidx, i, ia)) * n + i;
        std::size_t fb = g.shape().flat(detail::insert_coord(oidx, i, ib)) * n + i;
        pay1[fa] += correction[of];
        pay1[fb] -= correction[of];
        pay2[fa] -= correction[of];
        pay2[fb] += correction[of];
        more = others.next(oidx);
      }
      result.v[i].push_back(std::move(correction));
    }
  }
  result.g1 = Game(g.action_sets(), std::move(pay1));
  result.g2 = Game(g.action_sets(), std::move(pay2));
  return result;
}

/// Prepares an arbitrary quasi-strict equilibrium for quasi_strict_split:
/// strategies are contorted to uniform and every player's support and
/// off-support actions are cloned to the 2K/K shape.
inline PaddedInstance prepare_quasi_strict_shape(const Game& g, const Profile& p) {
  auto [ug, up] = uniformize_equilibrium(g, p);
  std::vector<std::map<Action, std::size_t>> mult(ug.players());
  for (std::size_t i = 0; i < ug.players(); ++i) {
    ActionSet sup = up.support(i);
    std::size_t off = ug.action_count(i) - sup.size();
    if (off == 0)
      throw std::invalid_argument("prepare_quasi_strict_shape: player " + std::to_string(i + 1) +
                                  " has full support; the split does not apply");
    for (const auto& a : ug.actions(i))
      mult[i][a] = std::binary_search(sup.begin(), sup.end(), a) ? 2 * off : sup.size();
  }
  return clone_actions(ug, up, mult);
}

struct CloneSplit {
  Game g1;
  Game g2;
  std::vector<SplitTriple> triples;  // for the designated player
};

/// Splits away one player's out-of-support best responses: in each half the
/// out-of-support action is a clone of one member of its support pair, and
/// the halves average back to the game exactly.
inline CloneSplit equilibrium_clone_split(const Game& g, const Profile& p, std::size_t i) {
  std::size_t n = g.players();
  if (i >= n) throw std::invalid_argument("equilibrium_clone_split: bad player");
  RegretReport rep = regret(g, p);
  if (!rep.is_nash())
    throw std::invalid_argument("equilibrium_clone_split: profile is not an equilibrium");
  ActionSet sup = p.support(i);

  // out-of-support best responses that are not clones of support actions
  ActionSet candidates;
  for (const auto& b : g.actions(i)) {
    if (std::binary_search(sup.begin(), sup.end(), b)) continue;
    if (deviation_payoff(g, p, i, g.action_index(i, b)) != rep.realized[i]) continue;
    bool clone_of_support = false;
    for (const auto& a : sup)
      if (are_clones(g, i, a, b)) {
        clone_of_support = true;
        break;
      }
    if (!clone_of_support) candidates.push_back(b);
  }
  if (candidates.empty()) return {g, g, {}};  // nothing to split away

  detail::require_uniform_on_support(p, i);
  auto pairs = detail::pair_support_clones(g, i, sup);
  if (candidates.size() != pairs.size())
    throw std::invalid_argument("equilibrium_clone_split: player " + std::to_string(i + 1) +
                                " has " + std::to_string(candidates.size()) +
                                " off-support best responses but " + std::to_string(pairs.size()) +
                                " support pairs; pad the game first");

  CloneSplit result{g, g, {}};
  for (std::size_t k = 0; k < pairs.size(); ++k)
    result.triples.push_back({pairs[k].first, pairs[k].second, candidates[k]});

  std::vector<Rational> pay1(g.raw_payoffs());
  std::vector<Rational> pay2(g.raw_payoffs());
  detail::Shape others = detail::others_shape(g.shape(), i);
  for (const auto& triple : result.triples) {
    std::size_t ia = g.action_index(i, triple.a);
    std::size_t ib = g.action_index(i, triple.b);
    std::size_t ic = g.action_index(i, triple.c);
    std::vector<std::size_t> oidx(others.dims.size(), 0);
    bool more = true;
    while (more) {
      std::size_t fa = g.shape().flat(detail::insert_coord(oidx, i, ia));
      std::size_t fb = g.shape().flat(detail::insert_coord(oidx, i, ib));
      std::size_t fc = g.shape().flat(detail::insert_coord(oidx, i, ic));
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& va = g.payoff(fa, j);
        const Rational& vb = g.payoff(fb, j);
        const Rational& vc = g.payoff(fc, j);
        // first half: the a-row copies c, the b-row absorbs the difference
        pay1[fa * n + j] = vc;
        pay1[fb * n + j] = va + vb - vc;
        // second half: roles of a and b exchanged
        pay2[fb * n + j] = vc;
        pay2[fa * n + j] = va + vb - vc;
      }
      more = others.next(oidx);
    }
  }
  result.g1 = Game(g.action_sets(), std::move(pay1));
  result.g2 = Game(g.action_sets(), std::move(pay2));

  if (!regret(result.g1, p).is_nash() || !regret(result.g2, p).is_nash())
    throw std::logic_error("equilibrium_clone_split: equilibrium not preserved");
  return result;
}

/// Prepares one player for equilibrium_clone_split: uniformizes that player's
/// strategy and clones their support and off-support best responses to the
/// matching 2K/K shape.
inline PaddedInstance prepare_clone_split_shape(const Game& g, const Profile& p, std::size_t i) {
  auto [ug, up] = uniformize_equilibrium(g, p, {i});
  RegretReport rep = regret(ug, up);
  if (!rep.is_nash())
    throw std::invalid_argument("prepare_clone_split_shape: profile is not an equilibrium");
  ActionSet sup = up.support(i);
  ActionSet responses;
  for (const auto& b : ug.actions(i)) {
    if (std::binary_search(sup.begin(), sup.end(), b)) continue;
    if (deviation_payoff(ug, up, i, ug.action_index(i, b)) != rep.realized[i]) continue;
    bool clone_of_support = false;
    for (const auto& a : sup)
      if (are_clones(ug, i, a, b)) {
        clone_of_support = true;
        break;
      }
    if (!clone_of_support) responses.push_back(b);
  }
  if (responses.empty())
    throw std::invalid_argument("prepare_clone_split_shape: player " + std::to_string(i + 1) +
                                " has no off-support best response; the split does not apply");
  std::vector<std::map<Action, std::size_t>> mult(ug.players());
  for (const auto& a : sup) mult[i][a] = 2 * responses.size();
  for (const auto& b : responses) mult[i][b] = sup.size();
  return clone_actions(ug, up, mult);
}

// ---------------------------------------------------------------------------
// Extending a decomposition beyond the rationalizable restriction
// ---------------------------------------------------------------------------

/// Given component games averaging exactly to the rationalizable restriction
/// of G, produces games on the full action sets averaging exactly to G whose
/// rationalizable restrictions are the given components. Eliminated actions
/// are corrected through the elimination witness: each one is traced to the
/// surviving action that eliminated it.
inline std::vector<Game> extend_beyond_rationalizable(const Game& g, const Profile& p,
                                                      const std::vector<Game>& components) {
  std::size_t n = g.players();
  RationalizableResult rz = rationalizable_actions_trace(g);
  for (std::size_t i = 0; i < n; ++i)
    if (p.support(i) != rz.surviving[i])
      throw std::invalid_argument(
          "extend_beyond_rationalizable: support of player " + std::to_string(i + 1) +
          " does not equal the rationalizable action set");
  Game restricted = restrict(g, rz.surviving);
  if (components.empty())
    throw std::invalid_argument("extend_beyond_rationalizable: no components");
  std::vector<Rational> w(components.size(),
                          Rational(Integer(1), Integer(components.size())));
  if (!(convex_combine(components, w) == restricted))
    throw std::invalid_argument(
        "extend_beyond_rationalizable: components do not average to the restriction");

  // elimination witness: eliminated action -> first surviving dominator
  std::vector<std::map<Action, Action>> witness(n);
  for (const auto& step : rz.trace) witness[step.player][step.removed] = step.dominator;
  auto surviving_witness = [&](std::size_t i, Action a) {
    while (!std::binary_search(rz.surviving[i].begin(), rz.surviving[i].end(), a))
      a = witness[i].at(a);
    return a;
  };

  std::vector<Game> out;
  for (const auto& comp : components) {
    out.push_back(Game::build(g.action_sets(), [&](const std::vector<std::size_t>& idx) {
      // classify the profile: all-rationalizable, only player i eliminated,
      // or some opponent eliminated
      std::vector<Rational> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        bool self_rational = std::binary_search(rz.surviving[i].begin(), rz.surviving[i].end(),
                                                g.actions(i)[idx[i]]);
        bool others_rational = true;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          if (!std::binary_search(rz.surviving[j].begin(), rz.surviving[j].end(),
                                  g.actions(j)[idx[j]]))
            others_rational = false;
        }
        ActionProfile profile(n);
        for (std::size_t j = 0; j < n; ++j) profile[j] = g.actions(j)[idx[j]];
        if (self_rational && others_rational) {
          v[i] = comp.payoff(profile, i);
        } else if (!self_rational && others_rational) {
          ActionProfile surrogate(profile);
          surrogate[i] = surviving_witness(i, profile[i]);
          v[i] = g.payoff(profile, i) + comp.payoff(surrogate, i) - g.payoff(surrogate, i);
        } else {
          v[i] = g.payoff(profile, i);
        }
      }
      return v;
    }));
  }
  return out;
}

}  // namespace nfg

