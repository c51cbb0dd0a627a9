#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "nfg/axioms.hpp"
#include "nfg/format.hpp"

namespace nfg {

struct CorpusEntry {
  AxiomInstance instance;
  std::vector<std::string> tags;
  std::string file;
};

struct Corpus {
  std::map<std::string, GameDoc> games;  // by file stem
  std::vector<CorpusEntry> entries;      // in filename order
  std::filesystem::path root;

  const GameDoc& game(const std::string& name) const {
    auto it = games.find(name);
    if (it == games.end())
      throw FormatError("corpus: unknown game '" + name + "'");
    return it->second;
  }
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

inline VerdictStatus parse_status(const std::string& s, const std::string& where) {
  if (s == "pass") return VerdictStatus::pass;
  if (s == "fail") return VerdictStatus::fail;
  if (s == "inconclusive") return VerdictStatus::inconclusive;
  throw FormatError(where + ": unknown verdict '" + s + "'");
}

}  // namespace detail

inline CorpusEntry parse_corpus_entry(const std::string& text, const Corpus& corpus,
                                      const std::string& where) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(where + ": invalid document: " + e.what());
  }
  CorpusEntry entry;
  entry.file = where;
  entry.instance.name = doc.at("name").get<std::string>();
  entry.instance.axiom = doc.at("axiom").get<std::string>();
  if (!doc.contains("games") || !doc["games"].is_array() || doc["games"].empty())
    throw FormatError(where + ": games: expected a nonempty array of game names");
  for (const auto& g : doc["games"])
    entry.instance.games.push_back(corpus.game(g.get<std::string>()).game);
  if (doc.contains("weights"))
    for (const auto& w : doc["weights"])
      entry.instance.weights.push_back(detail::json_rational(w, where + ": weights"));
  if (doc.contains("map")) entry.instance.map = parse_blowup_map(doc["map"], where + ": map");
  if (doc.contains("splits"))
    for (const auto& s : doc["splits"]) entry.instance.splits.push_back(parse_split(s));
  if (doc.contains("permutation"))
    entry.instance.permutation = parse_permutation(doc["permutation"]);
  if (doc.contains("witnesses"))
    for (const auto& w : doc["witnesses"])
      entry.instance.designated_witnesses.push_back(parse_profile(w, where + ": witnesses"));
  if (doc.contains("expected"))
    for (auto it = doc["expected"].begin(); it != doc["expected"].end(); ++it)
      entry.instance.expected[it.key()] =
          detail::parse_status(it.value().get<std::string>(), where + ": expected");
  if (doc.contains("tags"))
    for (const auto& t : doc["tags"]) entry.tags.push_back(t.get<std::string>());
  return entry;
}

/// Loads games/*.json and entries/*.json from a corpus directory, in sorted
/// filename order. Malformed files are reported with their path.
inline Corpus load_corpus(const std::filesystem::path& root) {
  Corpus corpus;
  corpus.root = root;
  std::filesystem::path games_dir = root / "games";
  std::filesystem::path entries_dir = root / "entries";
  if (!std::filesystem::is_directory(games_dir))
    throw FormatError("corpus: missing directory '" + games_dir.string() + "'");

  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(games_dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      corpus.games.emplace(path.stem().string(), parse_game(detail::read_file(path)));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }

  if (std::filesystem::is_directory(entries_dir)) {
    files.clear();
    for (const auto& e : std::filesystem::directory_iterator(entries_dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files)
      corpus.entries.push_back(
          parse_corpus_entry(detail::read_file(path), corpus, path.string()));
  }
  return corpus;
}

inline std::vector<AxiomInstance> corpus_instances(const Corpus& corpus,
                                                   const std::string& tag = "") {
  std::vector<AxiomInstance> out;
  for (const auto& e : corpus.entries) {
    if (!tag.empty() &&
        std::find(e.tags.begin(), e.tags.end(), tag) == e.tags.end())
      continue;
    out.push_back(e.instance);
  }
  return out;
}

}  // namespace nfg
