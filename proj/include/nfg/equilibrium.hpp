#pragma once

#include <optional>
#include <vector>

#include "nfg/algebra.hpp"
#include "nfg/game.hpp"
#include "nfg/linalg.hpp"
#include "nfg/morphism.hpp"

namespace nfg {

/// Expected payoff vector of a profile, exact multilinear expectation.
inline std::vector<Rational> expected_payoff(const Game& g, const Profile& p) {
  p.require_valid_for(g);
  std::size_t n = g.players();
  // support product, per player: (action index, probability)
  std::vector<std::vector<std::pair<std::size_t, Rational>>> sup(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [a, prob] : p.strategy(i)) sup[i].push_back({g.action_index(i, a), prob});
  std::vector<Rational> acc(n, Rational(0));
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> idx(n);
  bool done = false;
  while (!done) {
    Rational w(1);
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = sup[i][cursor[i]].first;
      w *= sup[i][cursor[i]].second;
    }
    std::size_t f = g.shape().flat(idx) * n;
    for (std::size_t i = 0; i < n; ++i) acc[i] += w * g.raw_payoffs()[f + i];
    done = true;
    for (std::size_t i = n; i-- > 0;) {
      if (++cursor[i] < sup[i].size()) {
        done = false;
        break;
      }
      cursor[i] = 0;
    }
  }
  return acc;
}

/// Expected payoff for `player` when deviating to pure action index `dev`
/// while everyone else follows p.
inline Rational deviation_payoff(const Game& g, const Profile& p, std::size_t player,
                                 std::size_t dev) {
  std::size_t n = g.players();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> sup(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == player)
      sup[i].push_back({dev, Rational(1)});
    else
      for (const auto& [a, prob] : p.strategy(i)) sup[i].push_back({g.action_index(i, a), prob});
  }
  Rational acc(0);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> idx(n);
  bool done = false;
  while (!done) {
    Rational w(1);
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = sup[i][cursor[i]].first;
      w *= sup[i][cursor[i]].second;
    }
    acc += w * g.payoff(g.shape().flat(idx), player);
    done = true;
    for (std::size_t i = n; i-- > 0;) {
      if (++cursor[i] < sup[i].size()) {
        done = false;
        break;
      }
      cursor[i] = 0;
    }
  }
  return acc;
}

/// Per-player best-response values and regrets against a profile. Pure
/// deviations suffice by multilinearity.
struct RegretReport {
  std::vector<Rational> realized;
  std::vector<Rational> best_response;
  std::vector<Rational> regret;

  bool is_nash() const {
    for (const auto& r : regret)
      if (r != 0) return false;
    return true;
  }
  bool is_eps_nash(const Rational& eps) const {
    for (const auto& r : regret)
      if (r > eps) return false;
    return true;
  }
  Rational max_regret() const {
    Rational m = 0;
    for (const auto& r : regret)
      if (r > m) m = r;
    return m;
  }
};

inline RegretReport regret(const Game& g, const Profile& p) {
  p.require_valid_for(g);
  RegretReport rep;
  rep.realized = expected_payoff(g, p);
  std::size_t n = g.players();
  rep.best_response.resize(n);
  rep.regret.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational best = deviation_payoff(g, p, i, 0);
    for (std::size_t a = 1; a < g.action_count(i); ++a) {
      Rational v = deviation_payoff(g, p, i, a);
      if (v > best) best = v;
    }
    rep.best_response[i] = best;
    rep.regret[i] = best - rep.realized[i];
  }
  return rep;
}

inline bool is_nash(const Game& g, const Profile& p) { return regret(g, p).is_nash(); }

/// delta = 0: strict pointwise dominance of a over b. delta > 0: pointwise
/// gap of at least delta.
inline bool dominates(const Game& g, std::size_t player, const Action& a, const Action& b,
                      const Rational& delta = Rational(0)) {
  if (delta < 0) throw std::invalid_argument("dominates: delta must be >= 0");
  std::size_t ia = g.action_index(player, a);
  std::size_t ib = g.action_index(player, b);
  if (ia == ib) return false;
  std::size_t n = g.players();
  std::vector<std::size_t> idx(n, 0);
  do {
    if (idx[player] != ia) continue;
    std::vector<std::size_t> other(idx);
    other[player] = ib;
    const Rational& va = g.payoff(g.shape().flat(idx), player);
    const Rational& vb = g.payoff(g.shape().flat(other), player);
    if (delta == 0) {
      if (!(va > vb)) return false;
    } else {
      if (!(va >= vb + delta)) return false;
    }
  } while (g.shape().next(idx));
  return true;
}

/// The unique action dominating every other action of the player, if any.
inline std::optional<Action> dominant_action(const Game& g, std::size_t player) {
  for (const auto& a : g.actions(player)) {
    bool dominant = true;
    for (const auto& b : g.actions(player)) {
      if (a == b) continue;
      if (!dominates(g, player, a, b)) {
        dominant = false;
        break;
      }
    }
    if (dominant) return a;
  }
  return std::nullopt;
}

struct EliminationStep {
  std::size_t player;
  Action removed;
  Action dominator;  // first dominating surviving action in canonical order
};

struct RationalizableResult {
  ActionSets surviving;
  std::vector<EliminationStep> trace;
};

/// Iterated elimination of actions strictly dominated by another pure action
/// within the surviving restriction. The fixed point is order independent;
/// elimination scans players and actions canonically, one player per step.
/// Each trace entry records a dominator that itself survives the step, which
/// always exists since strict dominance is a strict partial order.
inline RationalizableResult rationalizable_actions_trace(const Game& g) {
  RationalizableResult res;
  res.surviving = g.action_sets();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.players(); ++i) {
      if (res.surviving[i].size() <= 1) continue;
      Game current = restrict(g, res.surviving);
      ActionSet keep;
      std::vector<Action> dropped;
      for (const auto& b : res.surviving[i]) {
        bool dominated = false;
        for (const auto& a : res.surviving[i]) {
          if (a != b && dominates(current, i, a, b)) {
            dominated = true;
            break;
          }
        }
        (dominated ? dropped : keep).push_back(b);
      }
      if (dropped.empty()) continue;
      for (const auto& b : dropped) {
        std::optional<Action> dominator;
        for (const auto& a : keep) {
          if (dominates(current, i, a, b)) {
            dominator = a;
            break;
          }
        }
        if (!dominator)
          throw std::logic_error("rationalizable_actions: no surviving dominator");
        res.trace.push_back({i, b, *dominator});
      }
      res.surviving[i] = keep;
      changed = true;
    }
  }
  return res;
}

inline ActionSets rationalizable_actions(const Game& g) {
  return rationalizable_actions_trace(g).surviving;
}

/// Nash plus: every in-support action strictly outperforms every
/// out-of-support action.
inline bool is_quasi_strict(const Game& g, const Profile& p) {
  RegretReport rep = regret(g, p);
  if (!rep.is_nash()) return false;
  for (std::size_t i = 0; i < g.players(); ++i) {
    ActionSet sup = p.support(i);
    for (const auto& b : g.actions(i)) {
      if (std::binary_search(sup.begin(), sup.end(), b)) continue;
      // in-support actions all realize the equilibrium value
      if (!(rep.realized[i] > deviation_payoff(g, p, i, g.action_index(i, b)))) return false;
    }
  }
  return true;
}

/// Quasi-strict after collapsing all clone classes (the canonical maximal
/// blow-down).
inline bool is_essentially_quasi_strict(const Game& g, const Profile& p) {
  BlowUpMap collapse = canonical_clone_collapse(g);
  Game base = blow_down(g, collapse);
  return is_quasi_strict(base, pushforward(collapse, p));
}

enum class ComponentKind { point, continuum };

/// One connected piece of the equilibrium set for a fixed support pair.
struct EquilibriumComponent {
  ActionSet support_row;
  ActionSet support_col;
  ComponentKind kind = ComponentKind::point;
  Profile profile;  // the unique point, or a representative inside a continuum
};

enum class Uniqueness { unique, multiple, degenerate_continuum };

struct OracleResult {
  std::vector<EquilibriumComponent> components;
  Uniqueness verdict = Uniqueness::unique;

  std::vector<Profile> profiles() const {
    std::vector<Profile> out;
    for (const auto& c : components) out.push_back(c.profile);
    return out;
  }
};

namespace detail {

enum class SideKind { empty, point, continuum };

struct SideResult {
  SideKind kind = SideKind::empty;
  RatVector x;  // point or interior representative over the support
};

/// Feasible strategies of `opponent` with support exactly `opp_support` that
/// make `player` indifferent over `own_support` and weakly prefer it to every
/// other own action.
inline SideResult solve_side(const Game& g, std::size_t player, std::size_t opponent,
                             const std::vector<std::size_t>& own_support,
                             const std::vector<std::size_t>& opp_support) {
  std::size_t vars = opp_support.size();
  auto payoff = [&](std::size_t own, std::size_t opp) -> const Rational& {
    std::vector<std::size_t> idx(2);
    idx[player] = own;
    idx[opponent] = opp;
    return g.payoff(g.shape().flat(idx), player);
  };

  Polytope poly;
  // sum to one
  poly.eq_a.push_back(RatVector(vars, Rational(1)));
  poly.eq_b.push_back(Rational(1));
  // indifference across the own support
  for (std::size_t k = 0; k + 1 < own_support.size(); ++k) {
    RatVector row(vars);
    for (std::size_t c = 0; c < vars; ++c)
      row[c] = payoff(own_support[k], opp_support[c]) - payoff(own_support[k + 1], opp_support[c]);
    poly.eq_a.push_back(std::move(row));
    poly.eq_b.push_back(Rational(0));
  }
  // non-negativity
  for (std::size_t c = 0; c < vars; ++c) {
    RatVector row(vars, Rational(0));
    row[c] = 1;
    poly.ineq_a.push_back(std::move(row));
    poly.ineq_b.push_back(Rational(0));
  }
  // no profitable own deviation outside the support
  std::vector<bool> in_support(g.action_count(player), false);
  for (std::size_t a : own_support) in_support[a] = true;
  for (std::size_t a = 0; a < g.action_count(player); ++a) {
    if (in_support[a]) continue;
    RatVector row(vars);
    for (std::size_t c = 0; c < vars; ++c)
      row[c] = payoff(own_support[0], opp_support[c]) - payoff(a, opp_support[c]);
    poly.ineq_a.push_back(std::move(row));
    poly.ineq_b.push_back(Rational(0));
  }

  auto strictly_positive = [&](const RatVector& x) {
    for (const auto& v : x)
      if (v <= 0) return false;
    return true;
  };

  // Fast path: the equality system pins the point.
  LinearSolution eq = solve_linear(poly.eq_a, poly.eq_b);
  if (!eq.consistent) return {};
  if (eq.nullspace.empty()) {
    if (satisfies(poly, eq.particular) && strictly_positive(eq.particular))
      return {SideKind::point, eq.particular};
    return {};
  }

  std::vector<RatVector> vertices = enumerate_vertices(poly);
  if (vertices.empty()) return {};
  if (vertices.size() == 1) {
    if (strictly_positive(vertices[0])) return {SideKind::point, vertices[0]};
    return {};
  }
  // Barycenter of the vertices lies in the relative interior: it satisfies a
  // strict constraint iff some feasible point does.
  RatVector bary(vars, Rational(0));
  for (const auto& v : vertices)
    for (std::size_t c = 0; c < vars; ++c) bary[c] += v[c];
  Rational denom(Integer(vertices.size()));
  for (auto& v : bary) v /= denom;
  if (!strictly_positive(bary)) return {};
  return {SideKind::continuum, bary};
}

inline void enumerate_supports(std::size_t m, std::vector<std::vector<std::size_t>>& out) {
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < m; ++a)
      if (mask & (std::size_t{1} << a)) s.push_back(a);
    out.push_back(std::move(s));
  }
}

}  // namespace detail

/// Exact support-enumeration oracle for two-player games. Every support pair
/// is classified as empty, a single equilibrium point, or a positive
/// dimensional component; every reported profile is re-verified to have zero
/// regret.
inline OracleResult solve_nash_2p(const Game& g) {
  if (g.players() != 2)
    throw std::invalid_argument("solve_nash_2p: requires exactly two players");
  std::vector<std::vector<std::size_t>> rows, cols;
  detail::enumerate_supports(g.action_count(0), rows);
  detail::enumerate_supports(g.action_count(1), cols);

  OracleResult result;
  std::size_t points = 0;
  bool continua = false;
  for (const auto& s1 : rows) {
    for (const auto& s2 : cols) {
      // Player 1's indifference over s1 constrains player 2's strategy and
      // vice versa; the two sides are independent.
      detail::SideResult col_side = detail::solve_side(g, 0, 1, s1, s2);
      if (col_side.kind == detail::SideKind::empty) continue;
      detail::SideResult row_side = detail::solve_side(g, 1, 0, s2, s1);
      if (row_side.kind == detail::SideKind::empty) continue;

      std::vector<Profile::Strategy> strat(2);
      for (std::size_t k = 0; k < s1.size(); ++k)
        strat[0][g.actions(0)[s1[k]]] = row_side.x[k];
      for (std::size_t k = 0; k < s2.size(); ++k)
        strat[1][g.actions(1)[s2[k]]] = col_side.x[k];
      Profile p(std::move(strat));
      if (!regret(g, p).is_nash())
        throw std::logic_error("solve_nash_2p: candidate failed exact verification");

      EquilibriumComponent comp{{}, {}, ComponentKind::point, p};
      for (std::size_t a : s1) comp.support_row.push_back(g.actions(0)[a]);
      for (std::size_t a : s2) comp.support_col.push_back(g.actions(1)[a]);
      if (col_side.kind == detail::SideKind::continuum ||
          row_side.kind == detail::SideKind::continuum) {
        comp.kind = ComponentKind::continuum;
        continua = true;
      } else {
        ++points;
      }
      result.components.push_back(std::move(comp));
    }
  }
  if (result.components.empty())
    throw std::logic_error("solve_nash_2p: no equilibrium found (violates existence)");
  if (continua)
    result.verdict = Uniqueness::degenerate_continuum;
  else
    result.verdict = points == 1 ? Uniqueness::unique : Uniqueness::multiple;
  return result;
}

/// All profiles on the uniform rational grid (denominator = resolution) whose
/// regret is at most eps. Exhaustive over the grid; exact arithmetic.
inline std::vector<Profile> grid_falsify(const Game& g, std::size_t resolution,
                                         const Rational& eps) {
  if (resolution == 0) throw std::invalid_argument("grid_falsify: resolution must be positive");
  std::size_t n = g.players();

  // per player: all strategies with probabilities k/resolution
  std::vector<std::vector<std::vector<Rational>>> grids(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = g.action_count(i);
    std::vector<Rational> cur(m, Rational(0));
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
      if (pos + 1 == m) {
        cur[pos] = Rational(Integer(left), Integer(resolution));
        grids[i].push_back(cur);
        return;
      }
      for (std::size_t k = 0; k <= left; ++k) {
        cur[pos] = Rational(Integer(k), Integer(resolution));
        rec(pos + 1, left - k);
      }
    };
    rec(0, resolution);
  }

  // Deviation payoff tables: for each player, the pure-action values against
  // every combination of the others' grid strategies.
  std::vector<std::vector<std::size_t>> other_dims(n);
  std::vector<std::vector<std::vector<Rational>>> table(n);  // [i][flat(others)][action]
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t combos = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) {
        other_dims[i].push_back(grids[j].size());
        combos *= grids[j].size();
      }
    table[i].assign(combos, {});
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> cursor(other_dims[i].size(), 0);
    bool done = other_dims[i].empty();
    std::size_t flat = 0;
    auto fill = [&](const std::vector<std::size_t>& others) {
      std::vector<const std::vector<Rational>*> strat;
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != i) strat.push_back(&grids[j][others[k++]]);
      std::vector<Rational> vals(g.action_count(i), Rational(0));
      std::vector<std::size_t> idx(n, 0);
      do {
        Rational w(1);
        bool zero = false;
        for (std::size_t j = 0, k = 0; j < n; ++j) {
          if (j == i) continue;
          const Rational& pj = (*strat[k++])[idx[j]];
          if (pj == 0) {
            zero = true;
            break;
          }
          w *= pj;
        }
        if (!zero) vals[idx[i]] += w * g.payoff(g.shape().flat(idx), i);
      } while (g.shape().next(idx));
      table[i][flat] = std::move(vals);
    };
    if (done) {
      fill({});
    } else {
      while (true) {
        fill(cursor);
        ++flat;
        bool carry = true;
        for (std::size_t k = cursor.size(); k-- > 0;) {
          if (++cursor[k] < other_dims[i][k]) {
            carry = false;
            break;
          }
          cursor[k] = 0;
        }
        if (carry) break;
      }
    }
  }

  auto other_flat = [&](std::size_t i, const std::vector<std::size_t>& choice) {
    std::size_t f = 0;
    for (std::size_t j = 0, k = 0; j < n; ++j) {
      if (j == i) continue;
      f = f * other_dims[i][k] + choice[j];
      ++k;
    }
    return f;
  };

  std::vector<Profile> hits;
  std::vector<std::size_t> choice(n, 0);
  bool done = false;
  while (!done) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const auto& vals = table[i][other_flat(i, choice)];
      const auto& pi = grids[i][choice[i]];
      Rational realized(0), best = vals[0];
      for (std::size_t a = 0; a < vals.size(); ++a) {
        if (pi[a] != 0) realized += pi[a] * vals[a];
        if (vals[a] > best) best = vals[a];
      }
      if (best - realized > eps) ok = false;
    }
    if (ok) {
      std::vector<Profile::Strategy> s(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < g.action_count(i); ++a)
          if (grids[i][choice[i]][a] != 0) s[i][g.actions(i)[a]] = grids[i][choice[i]][a];
      hits.push_back(Profile(std::move(s)));
    }
    done = true;
    for (std::size_t i = n; i-- > 0;) {
      if (++choice[i] < grids[i].size()) {
        done = false;
        break;
      }
      choice[i] = 0;
    }
  }
  return hits;
}

}  // namespace nfg
