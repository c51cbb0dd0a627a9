#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfg/algebra.hpp"
#include "nfg/concepts.hpp"
#include "nfg/decompose.hpp"
#include "nfg/equilibrium.hpp"
#include "nfg/morphism.hpp"

namespace nfg {

enum class VerdictStatus { pass, fail, inconclusive };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    default: return "inconclusive";
  }
}

/// A replayable counterexample: the concrete membership implication that
/// failed, with everything needed to evaluate it again.
struct AxiomWitness {
  std::string step;  // which implication broke
  std::vector<Game> games;
  std::vector<Rational> weights;
  std::optional<BlowUpMap> map;
  std::optional<FiberSplit> split;
  std::optional<GamePermutation> permutation;
  std::optional<Profile> profile;
  std::optional<Action> action;
  std::size_t player = 0;
  std::string detail;
};

struct AxiomVerdict {
  std::string axiom;
  Rational delta = Rational(0);
  VerdictStatus status = VerdictStatus::pass;
  std::optional<AxiomWitness> witness;
};

namespace detail {

/// Deterministic local probe profiles within l1 distance < delta of p:
/// single-player mass shifts of delta/4, delta/2 and 3*delta/4.
inline std::vector<Profile> probe_around(const Game& g, const Profile& p, const Rational& delta) {
  std::vector<Profile> probes;
  std::vector<Rational> steps = {delta / 4, delta / 2, 3 * delta / 4};
  for (std::size_t i = 0; i < g.players(); ++i) {
    for (const auto& from : g.actions(i)) {
      Rational available = p.prob(i, from);
      if (available == 0) continue;
      for (const auto& to : g.actions(i)) {
        if (from == to) continue;
        for (const auto& t : steps) {
          Rational amount = t / 2;  // an l1 shift of t moves t/2 of mass
          if (amount > available) continue;
          std::vector<Profile::Strategy> s;
          for (std::size_t j = 0; j < g.players(); ++j) s.push_back(p.strategy(j));
          s[i][from] -= amount;
          s[i][to] += amount;
          probes.push_back(Profile(std::move(s)));
        }
      }
    }
  }
  return probes;
}

inline void dedupe(std::vector<Profile>& ps) {
  std::vector<Profile> out;
  for (auto& p : ps) {
    bool seen = false;
    for (const auto& q : out)
      if (p == q) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(p));
  }
  ps = std::move(out);
}

/// Verified member witnesses of f on g: generated ones plus valid extras.
inline std::vector<Profile> member_witnesses(const SolutionConcept& f, const Game& g,
                                             const std::vector<Profile>& extras) {
  std::vector<Profile> out;
  for (auto& p : f.witnesses(g)) {
    if (f.contains(g, p) != Membership::yes)
      throw std::logic_error("concept '" + f.name + "' generated a non-member witness");
    out.push_back(std::move(p));
  }
  for (const auto& p : extras) {
    bool applies = true;
    try {
      p.require_valid_for(g);
    } catch (const std::invalid_argument&) {
      applies = false;
    }
    if (applies && f.contains(g, p) == Membership::yes) out.push_back(p);
  }
  dedupe(out);
  return out;
}

/// Is some member of f(g) within l1 distance < delta of p? Searches the
/// candidate list and a deterministic probe grid; inconclusive when nothing
/// is found, since the search is not exhaustive.
inline bool member_within(const SolutionConcept& f, const Game& g, const Profile& p,
                          const Rational& delta, const std::vector<Profile>& candidates) {
  if (f.contains(g, p) == Membership::yes) return true;
  for (const auto& q : candidates)
    if (profile_distance(p, q) < delta && f.contains(g, q) == Membership::yes) return true;
  for (const auto& q : probe_around(g, p, delta))
    if (f.contains(g, q) == Membership::yes) return true;
  return false;
}

}  // namespace detail

/// Every returned profile must put positive probability on a player's
/// dominant action.
inline AxiomVerdict check_rationality(const SolutionConcept& f, const Game& g,
                                      const std::vector<Profile>& extras = {}) {
  AxiomVerdict verdict{"rationality"};
  std::vector<std::pair<std::size_t, Action>> dominants;
  for (std::size_t i = 0; i < g.players(); ++i)
    if (auto d = dominant_action(g, i)) dominants.push_back({i, *d});
  if (dominants.empty()) return verdict;  // vacuous pass
  for (const auto& p : detail::member_witnesses(f, g, extras)) {
    for (const auto& [i, d] : dominants) {
      if (p.prob(i, d) == 0) {
        verdict.status = VerdictStatus::fail;
        AxiomWitness w;
        w.step = "dominant-zero-probability";
        w.games = {g};
        w.profile = p;
        w.action = d;
        w.player = i;
        w.detail = "returned profile puts probability 0 on the dominant action '" + d.name() +
                   "' of player " + std::to_string(i + 1);
        verdict.witness = std::move(w);
        return verdict;
      }
    }
  }
  return verdict;
}

/// Returned strategies must stay within the half-ball around the simplex of
/// actions that are not delta-dominated.
inline AxiomVerdict check_delta_rationality(const SolutionConcept& f, const Game& g,
                                            const Rational& delta,
                                            const std::vector<Profile>& extras = {}) {
  if (delta <= 0) throw std::invalid_argument("check_delta_rationality: delta must be positive");
  AxiomVerdict verdict{"delta-rationality", delta};
  ActionSets undominated(g.players());
  for (std::size_t i = 0; i < g.players(); ++i)
    for (const auto& a : g.actions(i)) {
      bool dominated = false;
      for (const auto& b : g.actions(i))
        if (dominates(g, i, b, a, delta)) {
          dominated = true;
          break;
        }
      if (!dominated) undominated[i].push_back(a);
    }
  for (const auto& p : detail::member_witnesses(f, g, extras)) {
    for (std::size_t i = 0; i < g.players(); ++i) {
      Rational outside(0);
      for (const auto& [a, prob] : p.strategy(i))
        if (!std::binary_search(undominated[i].begin(), undominated[i].end(), a)) outside += prob;
      // l1 distance to the undominated simplex is twice the outside mass
      if (2 * outside >= Rational(1, 2)) {
        verdict.status = VerdictStatus::fail;
        AxiomWitness w;
        w.step = "mass-on-dominated";
        w.games = {g};
        w.profile = p;
        w.player = i;
        w.detail = "player " + std::to_string(i + 1) + " places mass " + format_rational(outside) +
                   " on delta-dominated actions";
        verdict.witness = std::move(w);
        return verdict;
      }
    }
  }
  return verdict;
}

/// Profiles returned in every listed game must be returned in (delta = 0),
/// or within delta of (delta > 0), their convex combination.
inline AxiomVerdict check_consistency(const SolutionConcept& f, const std::vector<Game>& games,
                                      const std::vector<Rational>& weights, const Rational& delta,
                                      const std::vector<Profile>& extras = {}) {
  AxiomVerdict verdict{delta == 0 ? "consistency" : "delta-consistency", delta};
  Game combined = convex_combine(games, weights);
  std::vector<Profile> common;
  for (const auto& g : games)
    for (auto& p : detail::member_witnesses(f, g, extras)) common.push_back(std::move(p));
  detail::dedupe(common);
  std::vector<Profile> combo_members;
  bool undecided = false;
  if (delta > 0) combo_members = detail::member_witnesses(f, combined, extras);
  for (const auto& p : common) {
    bool in_all = true;
    for (const auto& g : games) {
      Membership m = f.contains(g, p);
      if (m == Membership::undecidable) undecided = true;
      if (m != Membership::yes) {
        in_all = false;
        break;
      }
    }
    if (!in_all) continue;
    if (delta == 0) {
      Membership m = f.contains(combined, p);
      if (m == Membership::undecidable) {
        undecided = true;
        continue;
      }
      if (m == Membership::no) {
        verdict.status = VerdictStatus::fail;
        AxiomWitness w;
        w.step = "combination-not-member";
        w.games = games;
        w.weights = weights;
        w.profile = p;
        w.detail = "profile returned in every component game but not in the combination";
        verdict.witness = std::move(w);
        return verdict;
      }
    } else {
      if (!detail::member_within(f, combined, p, delta, combo_members))
        undecided = true;  // the delta search is not exhaustive
    }
  }
  if (undecided && verdict.status == VerdictStatus::pass)
    verdict.status = VerdictStatus::inconclusive;
  return verdict;
}

/// Blow-up coherence: preimages of returned base profiles are returned
/// upstairs, pushforwards of returned upstairs profiles are returned in the
/// base, and mass may be redistributed within fibers freely.
inline AxiomVerdict check_consequentialism(const SolutionConcept& f, const Game& base,
                                           const BlowUpMap& map,
                                           const std::vector<FiberSplit>& splits,
                                           const Rational& delta,
                                           const std::vector<Profile>& extras = {}) {
  AxiomVerdict verdict{delta == 0 ? "consequentialism" : "delta-consequentialism", delta};
  Game up = blow_up(base, map);
  std::vector<FiberSplit> use_splits = splits;
  if (use_splits.empty()) use_splits = {uniform_split(map), point_split(map)};

  std::vector<Profile> base_members = detail::member_witnesses(f, base, extras);
  std::vector<Profile> up_members = detail::member_witnesses(f, up, extras);
  bool undecided = false;

  auto fail = [&](const char* step, Profile p, const std::string& what,
                  std::optional<FiberSplit> split = std::nullopt) {
    verdict.status = VerdictStatus::fail;
    AxiomWitness w;
    w.step = step;
    w.games = {base, up};
    w.map = map;
    w.split = std::move(split);
    w.profile = std::move(p);
    w.detail = what;
    verdict.witness = std::move(w);
  };

  // preimages of base members must be members upstairs
  for (const auto& pb : base_members) {
    for (const auto& split : use_splits) {
      Profile q = preimage_profile(map, pb, split);
      if (delta == 0) {
        Membership m = f.contains(up, q);
        if (m == Membership::undecidable) {
          undecided = true;
          continue;
        }
        if (m == Membership::no) {
          fail("preimage-not-member", q,
               "a preimage of a returned base profile is not returned in the blow-up", split);
          return verdict;
        }
      } else {
        if (!detail::member_within(f, up, q, delta, up_members)) undecided = true;
      }
    }
  }

  // pushforwards of upstairs members must be members in the base
  for (const auto& pu : up_members) {
    Profile pushed = pushforward(map, pu);
    if (delta == 0) {
      Membership m = f.contains(base, pushed);
      if (m == Membership::undecidable) {
        undecided = true;
      } else if (m == Membership::no) {
        fail("pushforward-not-member", pu,
             "the pushforward of a returned blow-up profile is not returned in the base game");
        return verdict;
      }
    } else {
      // distance from pu to the preimage set of a base member equals the
      // distance of its pushforward to that member
      bool found = f.contains(base, pushed) == Membership::yes;
      for (const auto& qb : base_members) {
        if (found) break;
        if (profile_distance(pushed, qb) < delta && f.contains(base, qb) == Membership::yes)
          found = true;
      }
      if (!found) {
        for (const auto& qb : detail::probe_around(base, pushed, delta))
          if (f.contains(base, qb) == Membership::yes) {
            found = true;
            break;
          }
      }
      if (!found) undecided = true;
    }
    // fiber redistribution: any re-split of the pushforward must be a member
    // (exact even in the relaxed axiom)
    for (const auto& split : use_splits) {
      Profile resplit = preimage_profile(map, pushed, split);
      Membership m = f.contains(up, resplit);
      if (m == Membership::undecidable) {
        undecided = true;
        continue;
      }
      if (m == Membership::no) {
        fail("resplit-not-member", pu,
             "redistributing a returned blow-up profile within its fibers leaves the returned set",
             split);
        return verdict;
      }
    }
  }
  if (undecided && verdict.status == VerdictStatus::pass)
    verdict.status = VerdictStatus::inconclusive;
  return verdict;
}

/// Relabelling actions must relabel the returned profiles accordingly.
inline AxiomVerdict check_equivariance(const SolutionConcept& f, const Game& g,
                                       const GamePermutation& pi,
                                       const std::vector<Profile>& extras = {}) {
  AxiomVerdict verdict{"equivariance"};
  Game permuted = apply_permutation(g, pi);
  bool undecided = false;
  for (const auto& p : detail::member_witnesses(f, g, extras)) {
    Profile moved = apply_permutation(p, pi);
    Membership m = f.contains(permuted, moved);
    if (m == Membership::undecidable) undecided = true;
    if (m == Membership::no) {
      verdict.status = VerdictStatus::fail;
      AxiomWitness w;
      w.step = "transport-not-member";
      w.games = {g, permuted};
      w.permutation = pi;
      w.profile = p;
      w.detail = "relabelled profile is not returned in the relabelled game";
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  GamePermutation inv = pi.inverse();
  for (const auto& q : detail::member_witnesses(f, permuted, extras)) {
    Profile moved = apply_permutation(q, inv);
    Membership m = f.contains(g, moved);
    if (m == Membership::undecidable) undecided = true;
    if (m == Membership::no) {
      verdict.status = VerdictStatus::fail;
      AxiomWitness w;
      w.step = "transport-not-member";
      w.games = {permuted, g};
      w.permutation = inv;
      w.profile = q;
      w.detail = "relabelled profile is not returned in the original game";
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  if (undecided) verdict.status = VerdictStatus::inconclusive;
  return verdict;
}

/// Fails when the concept provably returns the empty set on the game.
inline AxiomVerdict check_totality(const SolutionConcept& f, const Game& g) {
  AxiomVerdict verdict{"totality"};
  Membership m = f.emptiness(g);
  if (m == Membership::yes) {
    verdict.status = VerdictStatus::fail;
    AxiomWitness w;
    w.step = "empty-set";
    w.games = {g};
    w.detail = "the concept returns no profile for this game (witness set empty)";
    verdict.witness = std::move(w);
  } else if (m == Membership::undecidable) {
    verdict.status = f.witnesses(g).empty() ? VerdictStatus::inconclusive : VerdictStatus::pass;
  }
  return verdict;
}

/// Re-evaluates the failed implication recorded in a witness; true iff the
/// violation reproduces.
inline bool replay_witness(const SolutionConcept& f, const AxiomWitness& w) {
  if (w.step == "dominant-zero-probability")
    return w.profile && w.action &&
           f.contains(w.games.at(0), *w.profile) == Membership::yes &&
           w.profile->prob(w.player, *w.action) == 0 &&
           dominant_action(w.games.at(0), w.player) == *w.action;
  if (w.step == "mass-on-dominated") {
    if (!w.profile) return false;
    return f.contains(w.games.at(0), *w.profile) == Membership::yes;
  }
  if (w.step == "combination-not-member") {
    if (!w.profile) return false;
    for (const auto& g : w.games)
      if (f.contains(g, *w.profile) != Membership::yes) return false;
    Game combined = convex_combine(w.games, w.weights);
    return f.contains(combined, *w.profile) == Membership::no;
  }
  if (w.step == "preimage-not-member") {
    // games = {base, up}; profile is the offending preimage
    return w.profile && f.contains(w.games.at(1), *w.profile) == Membership::no &&
           f.contains(w.games.at(0), pushforward(*w.map, *w.profile)) == Membership::yes;
  }
  if (w.step == "pushforward-not-member") {
    return w.profile && f.contains(w.games.at(1), *w.profile) == Membership::yes &&
           f.contains(w.games.at(0), pushforward(*w.map, *w.profile)) == Membership::no;
  }
  if (w.step == "resplit-not-member") {
    if (!w.profile || !w.map || !w.split) return false;
    Profile resplit = preimage_profile(*w.map, pushforward(*w.map, *w.profile), *w.split);
    return f.contains(w.games.at(1), *w.profile) == Membership::yes &&
           f.contains(w.games.at(1), resplit) == Membership::no;
  }
  if (w.step == "transport-not-member") {
    return w.profile && w.permutation &&
           f.contains(w.games.at(0), *w.profile) == Membership::yes &&
           f.contains(w.games.at(1), apply_permutation(*w.profile, *w.permutation)) ==
               Membership::no;
  }
  if (w.step == "empty-set") return f.emptiness(w.games.at(0)) == Membership::yes;
  return false;
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

/// One corpus-defined check: which axiom, on which games, with which wiring,
/// and the verdicts expected per concept.
struct AxiomInstance {
  std::string name;
  std::string axiom;  // rationality | delta-rationality | consistency |
                      // consequentialism | equivariance | totality
  std::vector<Game> games;
  std::vector<Rational> weights;
  std::optional<BlowUpMap> map;
  std::vector<FiberSplit> splits;
  std::optional<GamePermutation> permutation;
  std::vector<Profile> designated_witnesses;
  std::map<std::string, VerdictStatus> expected;  // per concept name
};

struct SuiteLine {
  std::string instance;
  std::string axiom;
  std::string concept_name;
  Rational delta;
  VerdictStatus status = VerdictStatus::pass;
  std::optional<VerdictStatus> expected;
  bool matched = true;
  std::optional<AxiomWitness> witness;
};

struct SuiteReport {
  std::vector<SuiteLine> lines;
  bool all_matched = true;
};

inline AxiomVerdict run_axiom_instance(const SolutionConcept& f, const AxiomInstance& inst,
                                       const Rational& delta) {
  if (inst.axiom == "rationality") {
    if (delta > 0) return check_delta_rationality(f, inst.games.at(0), delta,
                                                  inst.designated_witnesses);
    return check_rationality(f, inst.games.at(0), inst.designated_witnesses);
  }
  if (inst.axiom == "consistency")
    return check_consistency(f, inst.games, inst.weights, delta, inst.designated_witnesses);
  if (inst.axiom == "consequentialism")
    return check_consequentialism(f, inst.games.at(0), inst.map.value(), inst.splits, delta,
                                  inst.designated_witnesses);
  if (inst.axiom == "equivariance")
    return check_equivariance(f, inst.games.at(0), inst.permutation.value(),
                              inst.designated_witnesses);
  if (inst.axiom == "totality") return check_totality(f, inst.games.at(0));
  throw std::invalid_argument("unknown axiom '" + inst.axiom + "' in instance '" + inst.name +
                              "'");
}

/// Runs every instance that carries an expectation for the concept (or all
/// instances when none do), in corpus order.
inline SuiteReport run_axiom_suite(const SolutionConcept& f,
                                   const std::vector<AxiomInstance>& instances,
                                   const Rational& delta) {
  SuiteReport report;
  for (const auto& inst : instances) {
    auto it = inst.expected.find(f.name);
    AxiomVerdict v = run_axiom_instance(f, inst, delta);
    SuiteLine line;
    line.instance = inst.name;
    line.axiom = v.axiom;
    line.concept_name = f.name;
    line.delta = delta;
    line.status = v.status;
    line.witness = v.witness;
    if (it != inst.expected.end()) {
      line.expected = it->second;
      line.matched = (v.status == it->second);
      if (!line.matched) report.all_matched = false;
    }
    report.lines.push_back(std::move(line));
  }
  return report;
}

}  // namespace nfg
