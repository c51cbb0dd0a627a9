#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nfg/rational.hpp"

namespace nfg {

/// An action identifier from the global identifier space. Opaque token with a
/// total (lexicographic) order; distinct players may use the same identifier.
class Action {
 public:
  Action() = default;
  explicit Action(std::string name) : name_(std::move(name)) {}
  const std::string& name() const { return name_; }
  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action& a, const Action& b) { return a.name_ <=> b.name_; }

 private:
  std::string name_;
};

using ActionSet = std::vector<Action>;           // sorted, distinct
using ActionSets = std::vector<ActionSet>;       // one per player
using ActionProfile = std::vector<Action>;       // one action per player

namespace detail {

inline void check_action_sets(const ActionSets& sets) {
  if (sets.empty()) throw std::invalid_argument("game: at least one player required");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty())
      throw std::invalid_argument("game: empty action set for player " + std::to_string(i + 1));
    for (std::size_t k = 0; k + 1 < sets[i].size(); ++k) {
      if (!(sets[i][k] < sets[i][k + 1]))
        throw std::invalid_argument("game: action set of player " + std::to_string(i + 1) +
                                    " not sorted/distinct at '" + sets[i][k + 1].name() + "'");
    }
  }
}

/// Mixed-radix indexing over action profiles; player 1 varies slowest.
struct Shape {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> strides;
  std::size_t total = 0;

  Shape() = default;
  explicit Shape(const ActionSets& sets) {
    dims.reserve(sets.size());
    for (const auto& s : sets) dims.push_back(s.size());
    strides.assign(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
    total = dims.empty() ? 0 : strides[0] * dims[0];
  }

  std::size_t flat(const std::vector<std::size_t>& idx) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) f += idx[i] * strides[i];
    return f;
  }

  std::vector<std::size_t> unflat(std::size_t f) const {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      idx[i] = f / strides[i];
      f %= strides[i];
    }
    return idx;
  }

  bool next(std::vector<std::size_t>& idx) const {
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++idx[i] < dims[i]) return true;
      idx[i] = 0;
    }
    return false;
  }
};

inline std::size_t index_in(const ActionSet& set, const Action& a, std::size_t player) {
  auto it = std::lower_bound(set.begin(), set.end(), a);
  if (it == set.end() || *it != a)
    throw std::invalid_argument("unknown action '" + a.name() + "' for player " +
                                std::to_string(player + 1));
  return static_cast<std::size_t>(it - set.begin());
}

}  // namespace detail

/// A finite n-player normal-form game with exact rational payoffs. Immutable
/// after construction; action sets are kept in canonical sorted order so that
/// equality is structural.
class Game {
 public:
  /// `payoffs` is profile-major, player-minor: entry for profile index a and
  /// player i sits at flat(a)*n + i. Action sets must be sorted and distinct.
  Game(ActionSets action_sets, std::vector<Rational> payoffs)
      : action_sets_(std::move(action_sets)), shape_(), payoffs_(std::move(payoffs)) {
    detail::check_action_sets(action_sets_);
    shape_ = detail::Shape(action_sets_);
    if (payoffs_.size() != shape_.total * players())
      throw std::invalid_argument("game: payoff vector has " + std::to_string(payoffs_.size()) +
                                  " entries, expected " +
                                  std::to_string(shape_.total * players()));
  }

  /// Builds a game by evaluating `fn` at every profile (given as per-player
  /// indices into the sorted action sets); `fn` returns one payoff per player.
  static Game build(ActionSets sets,
                    const std::function<std::vector<Rational>(const std::vector<std::size_t>&)>& fn) {
    detail::check_action_sets(sets);
    detail::Shape shape(sets);
    std::size_t n = sets.size();
    std::vector<Rational> payoffs(shape.total * n);
    std::vector<std::size_t> idx(n, 0);
    do {
      std::vector<Rational> v = fn(idx);
      if (v.size() != n) throw std::invalid_argument("game: payoff vector arity mismatch");
      std::size_t base = shape.flat(idx) * n;
      for (std::size_t i = 0; i < n; ++i) payoffs[base + i] = std::move(v[i]);
    } while (shape.next(idx));
    return Game(std::move(sets), std::move(payoffs));
  }

  std::size_t players() const { return action_sets_.size(); }
  const ActionSets& action_sets() const { return action_sets_; }
  const ActionSet& actions(std::size_t player) const { return action_sets_.at(player); }
  std::size_t action_count(std::size_t player) const { return action_sets_.at(player).size(); }
  std::size_t profile_count() const { return shape_.total; }
  const detail::Shape& shape() const { return shape_; }

  std::size_t action_index(std::size_t player, const Action& a) const {
    return detail::index_in(action_sets_.at(player), a, player);
  }
  bool has_action(std::size_t player, const Action& a) const {
    const auto& s = action_sets_.at(player);
    return std::binary_search(s.begin(), s.end(), a);
  }

  const Rational& payoff(std::size_t flat_profile, std::size_t player) const {
    return payoffs_[flat_profile * players() + player];
  }
  const Rational& payoff(const std::vector<std::size_t>& idx, std::size_t player) const {
    return payoff(shape_.flat(idx), player);
  }
  const Rational& payoff(const ActionProfile& profile, std::size_t player) const {
    return payoff(profile_flat(profile), player);
  }

  std::size_t profile_flat(const ActionProfile& profile) const {
    if (profile.size() != players())
      throw std::invalid_argument("profile arity does not match player count");
    std::vector<std::size_t> idx(players());
    for (std::size_t i = 0; i < players(); ++i) idx[i] = action_index(i, profile[i]);
    return shape_.flat(idx);
  }

  /// Payoff vector for all players at one profile.
  std::vector<Rational> payoff_vector(std::size_t flat_profile) const {
    std::vector<Rational> v(players());
    for (std::size_t i = 0; i < players(); ++i) v[i] = payoff(flat_profile, i);
    return v;
  }

  const std::vector<Rational>& raw_payoffs() const { return payoffs_; }

  friend bool operator==(const Game& a, const Game& b) {
    return a.action_sets_ == b.action_sets_ && a.payoffs_ == b.payoffs_;
  }

 private:
  ActionSets action_sets_;
  detail::Shape shape_;
  std::vector<Rational> payoffs_;  // profile-major, player-minor
};

/// One mixed strategy per player: probabilities are exact, non-negative and
/// sum to 1. Zero entries are dropped, so the stored keys are the support.
class Profile {
 public:
  using Strategy = std::map<Action, Rational>;

  explicit Profile(std::vector<Strategy> strategies) : strategies_(std::move(strategies)) {
    for (std::size_t i = 0; i < strategies_.size(); ++i) {
      Rational sum = 0;
      for (auto it = strategies_[i].begin(); it != strategies_[i].end();) {
        if (it->second < 0)
          throw std::invalid_argument("profile: negative probability for player " +
                                      std::to_string(i + 1) + " on '" + it->first.name() + "'");
        sum += it->second;
        if (it->second == 0)
          it = strategies_[i].erase(it);
        else
          ++it;
      }
      if (sum != 1)
        throw std::invalid_argument("profile: probabilities of player " + std::to_string(i + 1) +
                                    " sum to " + format_rational(sum) + ", expected 1");
    }
  }

  std::size_t players() const { return strategies_.size(); }

  Rational prob(std::size_t player, const Action& a) const {
    const auto& s = strategies_.at(player);
    auto it = s.find(a);
    return it == s.end() ? Rational(0) : it->second;
  }

  const Strategy& strategy(std::size_t player) const { return strategies_.at(player); }

  ActionSet support(std::size_t player) const {
    ActionSet out;
    for (const auto& [a, p] : strategies_.at(player)) out.push_back(a);
    return out;
  }

  /// Throws unless every support is contained in the game's action sets.
  void require_valid_for(const Game& g) const {
    if (players() != g.players())
      throw std::invalid_argument("profile: player count mismatch");
    for (std::size_t i = 0; i < players(); ++i)
      for (const auto& [a, p] : strategies_[i])
        if (!g.has_action(i, a))
          throw std::invalid_argument("profile: action '" + a.name() +
                                      "' not available to player " + std::to_string(i + 1));
  }

  static Profile uniform(const Game& g) {
    std::vector<Strategy> s(g.players());
    for (std::size_t i = 0; i < g.players(); ++i) {
      Rational p(Integer(1), Integer(g.action_count(i)));
      for (const auto& a : g.actions(i)) s[i][a] = p;
    }
    return Profile(std::move(s));
  }

  static Profile pure(const Game& g, const std::vector<std::size_t>& idx) {
    std::vector<Strategy> s(g.players());
    for (std::size_t i = 0; i < g.players(); ++i) s[i][g.actions(i).at(idx.at(i))] = 1;
    return Profile(std::move(s));
  }

  static Profile pure(const Game& g, const ActionProfile& actions) {
    std::vector<Strategy> s(g.players());
    for (std::size_t i = 0; i < g.players(); ++i) {
      if (!g.has_action(i, actions.at(i)))
        throw std::invalid_argument("pure profile: unknown action '" + actions[i].name() + "'");
      s[i][actions[i]] = 1;
    }
    return Profile(std::move(s));
  }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::vector<Strategy> strategies_;
};

/// A scalar tensor over the profiles of some action sets; optionally tagged
/// with the player whose payoff it holds.
struct PayoffTensor {
  ActionSets action_sets;
  std::vector<Rational> values;  // flat, same indexing as Game
  std::optional<std::size_t> player;

  PayoffTensor(ActionSets sets, std::vector<Rational> vals,
               std::optional<std::size_t> player_tag = std::nullopt)
      : action_sets(std::move(sets)), values(std::move(vals)), player(player_tag) {
    detail::check_action_sets(action_sets);
    shape_ = detail::Shape(action_sets);
    if (values.size() != shape_.total)
      throw std::invalid_argument("tensor: value count mismatch");
  }

  static PayoffTensor of_player(const Game& g, std::size_t player) {
    std::vector<Rational> vals(g.profile_count());
    for (std::size_t f = 0; f < g.profile_count(); ++f) vals[f] = g.payoff(f, player);
    return PayoffTensor(g.action_sets(), std::move(vals), player);
  }

  const detail::Shape& shape() const { return shape_; }
  const Rational& at(std::size_t flat) const { return values[flat]; }
  const Rational& at(const std::vector<std::size_t>& idx) const { return values[shape_.flat(idx)]; }

  friend bool operator==(const PayoffTensor& a, const PayoffTensor& b) {
    return a.action_sets == b.action_sets && a.values == b.values;
  }

 private:
  detail::Shape shape_;
};

/// Deterministic source of unused action identifiers, seeded by the labels
/// already present in a game.
class FreshNames {
 public:
  explicit FreshNames(const Game& g) {
    for (const auto& set : g.action_sets())
      for (const auto& a : set) used_.insert(a.name());
  }

  void reserve(const Action& a) { used_.insert(a.name()); }

  /// First unused of "stem", "stem2", "stem3", ...
  Action fresh(const std::string& stem) {
    std::string candidate = stem;
    for (unsigned long k = 2; used_.count(candidate); ++k)
      candidate = stem + std::to_string(k);
    used_.insert(candidate);
    return Action(candidate);
  }

 private:
  std::set<std::string> used_;
};

inline ActionSet sorted_actions(std::vector<Action> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Convenience: action sets labelled "1".."m" for every player. Labels are
/// zero-padded so that lexicographic and numeric order agree.
inline ActionSets numbered_action_sets(std::size_t players, std::size_t m) {
  std::size_t width = std::to_string(m).size();
  ActionSet one;
  for (std::size_t k = 1; k <= m; ++k) {
    std::string label = std::to_string(k);
    one.push_back(Action(std::string(width - label.size(), '0') + label));
  }
  return ActionSets(players, one);
}

}  // namespace nfg
