#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nfg/axioms.hpp"
#include "nfg/game.hpp"

namespace nfg {

using Json = nlohmann::ordered_json;

/// A parse or schema error, carrying the JSON path of the offending element.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct GameDoc {
  std::string name;
  std::string source;
  std::vector<std::string> tags;
  Game game;
};

namespace detail {

/// Payoff entries must be integers or "num/den" strings; floats are rejected
/// so no inexact value can enter the pipeline.
inline Rational json_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long long>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  if (j.is_number_float())
    throw FormatError(path + ": floating-point payoffs are not accepted; use \"num/den\"");
  throw FormatError(path + ": expected an integer or a \"num/den\" string");
}

inline Json rational_json(const Rational& r) {
  return Json(format_rational(r));
}

inline void collect_payoffs(const Json& node, const std::vector<std::size_t>& dims,
                            std::size_t depth, std::vector<std::size_t>& at, std::size_t players,
                            std::vector<Rational>& flat, const Shape& shape,
                            const std::string& path) {
  if (!node.is_array())
    throw FormatError(path + ": expected an array");
  if (depth == dims.size()) {
    if (node.size() != players)
      throw FormatError(path + ": expected " + std::to_string(players) +
                        " payoffs for this profile, found " + std::to_string(node.size()));
    std::size_t base = shape.flat(at) * players;
    for (std::size_t i = 0; i < players; ++i)
      flat[base + i] = json_rational(node[i], path + "[" + std::to_string(i) + "]");
    return;
  }
  if (node.size() != dims[depth])
    throw FormatError(path + ": expected " + std::to_string(dims[depth]) +
                      " entries for player " + std::to_string(depth + 1) + "'s actions, found " +
                      std::to_string(node.size()));
  for (std::size_t k = 0; k < node.size(); ++k) {
    at[depth] = k;
    collect_payoffs(node[k], dims, depth + 1, at, players, flat, shape,
                    path + "[" + std::to_string(k) + "]");
  }
}

}  // namespace detail

/// Parses the textual game document. Action lists may appear in any order;
/// the game is canonicalized to sorted action sets.
inline GameDoc parse_game(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid document: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("top level: expected an object");
  GameDoc out{doc.value("name", ""), doc.value("source", ""), {}, Game({{Action("x")}}, {Rational(0)})};
  if (doc.contains("tags")) {
    if (!doc["tags"].is_array()) throw FormatError("tags: expected an array of strings");
    for (const auto& t : doc["tags"]) out.tags.push_back(t.get<std::string>());
  }
  if (!doc.contains("players") || !doc["players"].is_number_integer())
    throw FormatError("players: expected an integer");
  std::size_t players = doc["players"].get<std::size_t>();
  if (!doc.contains("actions") || !doc["actions"].is_array() || doc["actions"].size() != players)
    throw FormatError("actions: expected one label list per player");

  ActionSets given(players);
  for (std::size_t i = 0; i < players; ++i) {
    const Json& list = doc["actions"][i];
    if (!list.is_array() || list.empty())
      throw FormatError("actions[" + std::to_string(i) + "]: expected a nonempty array");
    for (const auto& label : list) {
      if (!label.is_string())
        throw FormatError("actions[" + std::to_string(i) + "]: labels must be strings");
      given[i].push_back(Action(label.get<std::string>()));
    }
    ActionSet dedup = sorted_actions(given[i]);
    if (dedup.size() != given[i].size())
      throw FormatError("actions[" + std::to_string(i) + "]: duplicate action label for player " +
                        std::to_string(i + 1));
  }

  std::vector<std::size_t> dims;
  for (const auto& s : given) dims.push_back(s.size());
  if (!doc.contains("payoffs")) throw FormatError("payoffs: missing");

  // read the tensor in the given order, then permute into canonical order
  ActionSets sorted(players);
  for (std::size_t i = 0; i < players; ++i) sorted[i] = sorted_actions(given[i]);
  detail::Shape given_shape;
  given_shape.dims = dims;
  given_shape.strides.assign(players, 1);
  for (std::size_t i = players; i-- > 1;)
    given_shape.strides[i - 1] = given_shape.strides[i] * dims[i];
  given_shape.total = given_shape.strides[0] * dims[0];
  std::vector<Rational> in_given(given_shape.total * players, Rational(0));
  std::vector<std::size_t> at(players, 0);
  detail::collect_payoffs(doc["payoffs"], dims, 0, at, players, in_given, given_shape, "payoffs");

  // permutation from given order to sorted order
  std::vector<std::vector<std::size_t>> to_sorted(players);
  for (std::size_t i = 0; i < players; ++i)
    for (const auto& a : given[i])
      to_sorted[i].push_back(
          static_cast<std::size_t>(std::lower_bound(sorted[i].begin(), sorted[i].end(), a) -
                                   sorted[i].begin()));
  detail::Shape sorted_shape(sorted);
  std::vector<Rational> flat(sorted_shape.total * players);
  std::vector<std::size_t> idx(players, 0);
  do {
    std::vector<std::size_t> tgt(players);
    for (std::size_t i = 0; i < players; ++i) tgt[i] = to_sorted[i][idx[i]];
    std::size_t from = given_shape.flat(idx) * players;
    std::size_t to = sorted_shape.flat(tgt) * players;
    for (std::size_t i = 0; i < players; ++i) flat[to + i] = in_given[from + i];
  } while (given_shape.next(idx));

  out.game = Game(std::move(sorted), std::move(flat));
  return out;
}

/// Canonical serialization: sorted action labels, payoffs as lowest-terms
/// rational strings, two-space indentation. parse . serialize is the
/// identity on canonical documents.
inline std::string serialize_game(const GameDoc& doc) {
  Json j;
  if (!doc.name.empty()) j["name"] = doc.name;
  if (!doc.source.empty()) j["source"] = doc.source;
  if (!doc.tags.empty()) j["tags"] = doc.tags;
  j["players"] = doc.game.players();
  Json actions = Json::array();
  for (const auto& set : doc.game.action_sets()) {
    Json list = Json::array();
    for (const auto& a : set) list.push_back(a.name());
    actions.push_back(std::move(list));
  }
  j["actions"] = std::move(actions);

  std::function<Json(std::size_t, std::vector<std::size_t>&)> emit =
      [&](std::size_t depth, std::vector<std::size_t>& at) -> Json {
    Json arr = Json::array();
    if (depth == doc.game.players()) {
      for (std::size_t i = 0; i < doc.game.players(); ++i)
        arr.push_back(detail::rational_json(doc.game.payoff(at, i)));
      return arr;
    }
    for (std::size_t k = 0; k < doc.game.action_count(depth); ++k) {
      at[depth] = k;
      arr.push_back(emit(depth + 1, at));
    }
    return arr;
  };
  std::vector<std::size_t> at(doc.game.players(), 0);
  j["payoffs"] = emit(0, at);
  return j.dump(2) + "\n";
}

inline std::string serialize_game(const Game& g) { return serialize_game(GameDoc{"", "", {}, g}); }

// ---------------------------------------------------------------------------
// Profiles and witnesses
// ---------------------------------------------------------------------------

inline Json profile_json(const Profile& p) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < p.players(); ++i) {
    Json strat = Json::object();
    for (const auto& [a, prob] : p.strategy(i)) strat[a.name()] = format_rational(prob);
    arr.push_back(std::move(strat));
  }
  return Json{{"strategies", arr}};
}

inline Profile parse_profile(const Json& j, const std::string& path = "profile") {
  if (!j.is_object() || !j.contains("strategies") || !j["strategies"].is_array())
    throw FormatError(path + ": expected {\"strategies\": [...]} ");
  std::vector<Profile::Strategy> s;
  std::size_t i = 0;
  for (const auto& strat : j["strategies"]) {
    if (!strat.is_object()) throw FormatError(path + ": strategy must be an object");
    Profile::Strategy one;
    for (auto it = strat.begin(); it != strat.end(); ++it)
      one[Action(it.key())] =
          detail::json_rational(it.value(), path + ".strategies[" + std::to_string(i) + "]");
    s.push_back(std::move(one));
    ++i;
  }
  try {
    return Profile(std::move(s));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline Json blowup_map_json(const BlowUpMap& map) {
  Json arr = Json::array();
  for (const auto& m : map.maps) {
    Json one = Json::object();
    for (const auto& [from, to] : m) one[from.name()] = to.name();
    arr.push_back(std::move(one));
  }
  return arr;
}

inline BlowUpMap parse_blowup_map(const Json& j, const std::string& path = "map") {
  if (!j.is_array()) throw FormatError(path + ": expected one object per player");
  BlowUpMap map;
  for (const auto& m : j) {
    if (!m.is_object()) throw FormatError(path + ": expected objects of blown->base labels");
    std::map<Action, Action> one;
    for (auto it = m.begin(); it != m.end(); ++it)
      one[Action(it.key())] = Action(it.value().get<std::string>());
    map.maps.push_back(std::move(one));
  }
  return map;
}

inline Json permutation_json(const GamePermutation& pi) {
  Json arr = Json::array();
  for (const auto& m : pi.maps) {
    Json one = Json::object();
    for (const auto& [from, to] : m) one[from.name()] = to.name();
    arr.push_back(std::move(one));
  }
  return arr;
}

inline GamePermutation parse_permutation(const Json& j, const std::string& path = "permutation") {
  if (!j.is_array()) throw FormatError(path + ": expected one object per player");
  GamePermutation pi;
  for (const auto& m : j) {
    std::map<Action, Action> one;
    for (auto it = m.begin(); it != m.end(); ++it)
      one[Action(it.key())] = Action(it.value().get<std::string>());
    pi.maps.push_back(std::move(one));
  }
  return pi;
}

inline Json split_json(const FiberSplit& split) {
  Json arr = Json::array();
  for (const auto& player_rows : split) {
    Json rows = Json::object();
    for (const auto& [base, row] : player_rows) {
      Json r = Json::object();
      for (const auto& [up, w] : row) r[up.name()] = format_rational(w);
      rows[base.name()] = std::move(r);
    }
    arr.push_back(std::move(rows));
  }
  return arr;
}

inline FiberSplit parse_split(const Json& j, const std::string& path = "split") {
  if (!j.is_array()) throw FormatError(path + ": expected one object per player");
  FiberSplit split;
  std::size_t i = 0;
  for (const auto& rows : j) {
    std::map<Action, std::map<Action, Rational>> player_rows;
    for (auto it = rows.begin(); it != rows.end(); ++it) {
      std::map<Action, Rational> row;
      for (auto rt = it.value().begin(); rt != it.value().end(); ++rt)
        row[Action(rt.key())] = detail::json_rational(
            rt.value(), path + "[" + std::to_string(i) + "]." + it.key());
      player_rows[Action(it.key())] = std::move(row);
    }
    split.push_back(std::move(player_rows));
    ++i;
  }
  return split;
}

/// Serialized fail witness, replayable through cmd_check --replay.
inline Json witness_json(const std::string& concept_name, const AxiomWitness& w) {
  Json j;
  j["concept"] = concept_name;
  j["step"] = w.step;
  Json games = Json::array();
  for (const auto& g : w.games) games.push_back(Json::parse(serialize_game(g)));
  j["games"] = std::move(games);
  if (!w.weights.empty()) {
    Json ws = Json::array();
    for (const auto& r : w.weights) ws.push_back(format_rational(r));
    j["weights"] = std::move(ws);
  }
  if (w.map) j["map"] = blowup_map_json(*w.map);
  if (w.split) j["split"] = split_json(*w.split);
  if (w.permutation) j["permutation"] = permutation_json(*w.permutation);
  if (w.profile) j["profile"] = profile_json(*w.profile);
  if (w.action) j["action"] = w.action->name();
  j["player"] = w.player;
  j["detail"] = w.detail;
  return j;
}

inline std::pair<std::string, AxiomWitness> parse_witness(const Json& j) {
  AxiomWitness w;
  std::string concept_name = j.at("concept").get<std::string>();
  w.step = j.at("step").get<std::string>();
  for (const auto& g : j.at("games")) w.games.push_back(parse_game(g.dump()).game);
  if (j.contains("weights"))
    for (const auto& r : j["weights"]) w.weights.push_back(detail::json_rational(r, "weights"));
  if (j.contains("map")) w.map = parse_blowup_map(j["map"]);
  if (j.contains("split")) w.split = parse_split(j["split"]);
  if (j.contains("permutation")) w.permutation = parse_permutation(j["permutation"]);
  if (j.contains("profile")) w.profile = parse_profile(j["profile"]);
  if (j.contains("action")) w.action = Action(j["action"].get<std::string>());
  w.player = j.value("player", std::size_t{0});
  w.detail = j.value("detail", "");
  return {concept_name, std::move(w)};
}

}  // namespace nfg
