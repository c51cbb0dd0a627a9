#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nfg/equilibrium.hpp"
#include "nfg/game.hpp"
#include "nfg/morphism.hpp"

namespace nfg {

enum class Membership { yes, no, undecidable };

/// A solution concept: an exact membership test plus a finite witness
/// generator whose outputs all test as members. `emptiness` reports whether
/// the returned set is provably empty (most concepts cannot decide this).
struct SolutionConcept {
  std::string name;
  std::function<Membership(const Game&, const Profile&)> contains;
  std::function<std::vector<Profile>(const Game&)> witnesses;
  std::function<Membership(const Game&)> emptiness = [](const Game&) {
    return Membership::undecidable;
  };
};

namespace detail {

inline std::vector<Profile> pure_combinations(const Game& g, const ActionSets& choices,
                                              std::size_t cap = 128) {
  std::vector<Profile> out;
  std::vector<std::size_t> cursor(g.players(), 0);
  bool done = false;
  while (!done && out.size() < cap) {
    ActionProfile prof(g.players());
    for (std::size_t i = 0; i < g.players(); ++i) prof[i] = choices[i][cursor[i]];
    out.push_back(Profile::pure(g, prof));
    done = true;
    for (std::size_t i = g.players(); i-- > 0;) {
      if (++cursor[i] < choices[i].size()) {
        done = false;
        break;
      }
      cursor[i] = 0;
    }
  }
  return out;
}

inline Profile uniform_over(const Game& g, const ActionSets& sets) {
  std::vector<Profile::Strategy> s(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    Rational w(Integer(1), Integer(sets[i].size()));
    for (const auto& a : sets[i]) s[i][a] = w;
  }
  return Profile(std::move(s));
}

inline std::vector<Profile> pure_nash_profiles(const Game& g) {
  std::vector<Profile> out;
  std::vector<std::size_t> idx(g.players(), 0);
  do {
    Profile p = Profile::pure(g, idx);
    if (regret(g, p).is_nash()) out.push_back(std::move(p));
  } while (g.shape().next(idx));
  return out;
}

/// Equilibrium witnesses: oracle components for two players, otherwise pure
/// equilibria plus the uniform profile when it happens to be one.
inline std::vector<Profile> nash_witnesses(const Game& g) {
  if (g.players() == 2) return solve_nash_2p(g).profiles();
  std::vector<Profile> out = pure_nash_profiles(g);
  Profile u = Profile::uniform(g);
  if (regret(g, u).is_nash()) out.push_back(std::move(u));
  return out;
}

/// Best-response action sets against uniformly randomizing opponents.
inline ActionSets uniform_best_response_sets(const Game& g) {
  Profile u = Profile::uniform(g);
  ActionSets sets(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    Rational best = deviation_payoff(g, u, i, 0);
    for (std::size_t a = 1; a < g.action_count(i); ++a) {
      Rational v = deviation_payoff(g, u, i, a);
      if (v > best) best = v;
    }
    for (std::size_t a = 0; a < g.action_count(i); ++a)
      if (deviation_payoff(g, u, i, a) == best) sets[i].push_back(g.actions(i)[a]);
  }
  return sets;
}

/// Actions achieving the player's highest possible payoff.
inline ActionSets maxmax_sets(const Game& g) {
  ActionSets sets(g.players());
  for (std::size_t i = 0; i < g.players(); ++i) {
    std::vector<Rational> peak(g.action_count(i));
    std::vector<bool> init(g.action_count(i), false);
    std::vector<std::size_t> idx(g.players(), 0);
    do {
      const Rational& v = g.payoff(g.shape().flat(idx), i);
      if (!init[idx[i]] || v > peak[idx[i]]) {
        peak[idx[i]] = v;
        init[idx[i]] = true;
      }
    } while (g.shape().next(idx));
    Rational best = peak[0];
    for (const auto& v : peak)
      if (v > best) best = v;
    for (std::size_t a = 0; a < g.action_count(i); ++a)
      if (peak[a] == best) sets[i].push_back(g.actions(i)[a]);
  }
  return sets;
}

inline bool support_inside(const Profile& p, const ActionSets& sets) {
  for (std::size_t i = 0; i < p.players(); ++i)
    for (const auto& a : p.support(i))
      if (!std::binary_search(sets[i].begin(), sets[i].end(), a)) return false;
  return true;
}

inline bool weakly_dominated(const Game& g, std::size_t player, const Action& b) {
  std::size_t ib = g.action_index(player, b);
  for (const auto& a : g.actions(player)) {
    std::size_t ia = g.action_index(player, a);
    if (ia == ib) continue;
    bool ge_everywhere = true, gt_somewhere = false;
    std::vector<std::size_t> idx(g.players(), 0);
    do {
      if (idx[player] != ia) continue;
      std::vector<std::size_t> other(idx);
      other[player] = ib;
      const Rational& va = g.payoff(g.shape().flat(idx), player);
      const Rational& vb = g.payoff(g.shape().flat(other), player);
      if (va < vb) {
        ge_everywhere = false;
        break;
      }
      if (va > vb) gt_somewhere = true;
    } while (g.shape().next(idx));
    if (ge_everywhere && gt_somewhere) return true;
  }
  return false;
}

inline ActionSets admissible_sets(const Game& g) {
  ActionSets sets(g.players());
  for (std::size_t i = 0; i < g.players(); ++i)
    for (const auto& a : g.actions(i))
      if (!weakly_dominated(g, i, a)) sets[i].push_back(a);
  return sets;
}

}  // namespace detail

inline SolutionConcept make_nash_concept() {
  return {"nash",
          [](const Game& g, const Profile& p) {
            return regret(g, p).is_nash() ? Membership::yes : Membership::no;
          },
          [](const Game& g) { return detail::nash_witnesses(g); }};
}

inline SolutionConcept make_nash_eps_concept(const Rational& eps) {
  return {"nash-eps(" + format_rational(eps) + ")",
          [eps](const Game& g, const Profile& p) {
            return regret(g, p).is_eps_nash(eps) ? Membership::yes : Membership::no;
          },
          [](const Game& g) { return detail::nash_witnesses(g); }};
}

/// Randomize only over best responses against uniformly randomizing
/// opponents. Violates consequentialism: cloning shifts the benchmark.
inline SolutionConcept make_uniform_best_response_concept() {
  return {"uniform-best-response",
          [](const Game& g, const Profile& p) {
            return detail::support_inside(p, detail::uniform_best_response_sets(g))
                       ? Membership::yes
                       : Membership::no;
          },
          [](const Game& g) {
            ActionSets sets = detail::uniform_best_response_sets(g);
            auto out = detail::pure_combinations(g, sets);
            out.push_back(detail::uniform_over(g, sets));
            return out;
          }};
}

/// Randomize only over actions that can reach the player's highest payoff.
/// Violates consistency.
inline SolutionConcept make_maxmax_concept() {
  return {"maxmax",
          [](const Game& g, const Profile& p) {
            return detail::support_inside(p, detail::maxmax_sets(g)) ? Membership::yes
                                                                     : Membership::no;
          },
          [](const Game& g) {
            ActionSets sets = detail::maxmax_sets(g);
            auto out = detail::pure_combinations(g, sets);
            out.push_back(detail::uniform_over(g, sets));
            return out;
          }};
}

/// Maximize the sum of all players' payoffs. Violates rationality.
inline SolutionConcept make_welfare_max_concept() {
  auto best_sum = [](const Game& g) {
    Rational best;
    bool init = false;
    for (std::size_t f = 0; f < g.profile_count(); ++f) {
      Rational s(0);
      for (std::size_t i = 0; i < g.players(); ++i) s += g.payoff(f, i);
      if (!init || s > best) {
        best = s;
        init = true;
      }
    }
    return best;
  };
  return {"welfare-max",
          [best_sum](const Game& g, const Profile& p) {
            std::vector<Rational> e = expected_payoff(g, p);
            Rational s(0);
            for (const auto& v : e) s += v;
            return s == best_sum(g) ? Membership::yes : Membership::no;
          },
          [best_sum](const Game& g) {
            Rational target = best_sum(g);
            std::vector<Profile> out;
            std::vector<std::size_t> idx(g.players(), 0);
            do {
              Rational s(0);
              for (std::size_t i = 0; i < g.players(); ++i)
                s += g.payoff(g.shape().flat(idx), i);
              if (s == target) out.push_back(Profile::pure(g, idx));
            } while (g.shape().next(idx));
            return out;
          }};
}

/// Profiles whose pushforward along the maximal clone collapse is a pure
/// Nash equilibrium. Not total; emptiness is decidable.
inline SolutionConcept make_pure_blowdown_concept() {
  auto collapse_and_test = [](const Game& g, const Profile& p) {
    BlowUpMap map = canonical_clone_collapse(g);
    Game base = blow_down(g, map);
    Profile pushed = pushforward(map, p);
    for (std::size_t i = 0; i < base.players(); ++i)
      if (pushed.support(i).size() != 1) return false;
    return regret(base, pushed).is_nash();
  };
  return {"pure-blowdown",
          [collapse_and_test](const Game& g, const Profile& p) {
            return collapse_and_test(g, p) ? Membership::yes : Membership::no;
          },
          [](const Game& g) {
            BlowUpMap map = canonical_clone_collapse(g);
            Game base = blow_down(g, map);
            std::vector<Profile> out;
            for (const auto& q : detail::pure_nash_profiles(base))
              out.push_back(preimage_profile(map, q, point_split(map)));
            return out;
          },
          [](const Game& g) {
            BlowUpMap map = canonical_clone_collapse(g);
            Game base = blow_down(g, map);
            return detail::pure_nash_profiles(base).empty() ? Membership::yes : Membership::no;
          }};
}

/// Profiles supported on iteratively undominated actions. Violates
/// consistency.
inline SolutionConcept make_rationalizable_concept() {
  return {"rationalizable",
          [](const Game& g, const Profile& p) {
            return detail::support_inside(p, rationalizable_actions(g)) ? Membership::yes
                                                                        : Membership::no;
          },
          [](const Game& g) {
            ActionSets sets = rationalizable_actions(g);
            auto out = detail::pure_combinations(g, sets);
            out.push_back(detail::uniform_over(g, sets));
            return out;
          }};
}

/// Profiles avoiding weakly dominated actions.
inline SolutionConcept make_admissible_concept() {
  return {"admissible",
          [](const Game& g, const Profile& p) {
            return detail::support_inside(p, detail::admissible_sets(g)) ? Membership::yes
                                                                         : Membership::no;
          },
          [](const Game& g) {
            ActionSets sets = detail::admissible_sets(g);
            auto out = detail::pure_combinations(g, sets);
            out.push_back(detail::uniform_over(g, sets));
            return out;
          }};
}

/// Two-player trembling-hand perfection through the admissibility
/// equivalence; undecidable for other player counts.
inline SolutionConcept make_trembling_hand_2p_concept() {
  return {"trembling-hand-2p",
          [](const Game& g, const Profile& p) {
            if (g.players() != 2) return Membership::undecidable;
            if (!regret(g, p).is_nash()) return Membership::no;
            return detail::support_inside(p, detail::admissible_sets(g)) ? Membership::yes
                                                                         : Membership::no;
          },
          [](const Game& g) {
            std::vector<Profile> out;
            if (g.players() != 2) return out;
            ActionSets adm = detail::admissible_sets(g);
            for (auto& p : solve_nash_2p(g).profiles())
              if (detail::support_inside(p, adm)) out.push_back(std::move(p));
            return out;
          }};
}

/// Equilibria whose in-support actions strictly beat out-of-support ones.
/// Violates consequentialism.
inline SolutionConcept make_quasi_strict_concept() {
  return {"quasi-strict",
          [](const Game& g, const Profile& p) {
            return is_quasi_strict(g, p) ? Membership::yes : Membership::no;
          },
          [](const Game& g) {
            std::vector<Profile> out;
            std::vector<Profile> candidates;
            if (g.players() == 2)
              candidates = solve_nash_2p(g).profiles();
            else
              candidates = detail::nash_witnesses(g);
            for (auto& p : candidates)
              if (is_quasi_strict(g, p)) out.push_back(std::move(p));
            return out;
          }};
}

inline std::vector<SolutionConcept> builtin_concepts() {
  return {make_nash_concept(),
          make_nash_eps_concept(Rational(1, 20)),
          make_uniform_best_response_concept(),
          make_maxmax_concept(),
          make_welfare_max_concept(),
          make_pure_blowdown_concept(),
          make_rationalizable_concept(),
          make_admissible_concept(),
          make_trembling_hand_2p_concept(),
          make_quasi_strict_concept()};
}

/// Looks a concept up by name; "nash-eps(Q)" accepts any rational Q.
inline SolutionConcept find_concept(const std::string& name) {
  if (name.rfind("nash-eps(", 0) == 0 && name.back() == ')')
    return make_nash_eps_concept(parse_rational(name.substr(9, name.size() - 10)));
  for (auto& c : builtin_concepts())
    if (c.name == name) return c;
  throw std::invalid_argument("unknown solution concept '" + name + "'");
}

}  // namespace nfg
