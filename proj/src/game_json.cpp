#include "imitation/game_json.hpp"

#include <utility>
#include <vector>

namespace imitation {
namespace {

Rational parse_cell(const Json& cell, std::size_t row, std::size_t col) {
  if (!cell.is_string()) {
    throw GameError("payoff entry must be a string", row, col);
  }
  try {
    return Rational::parse(cell.get<std::string>());
  } catch (const RationalFormatError& e) {
    throw GameError(e.what(), row, col);
  }
}

GameMeta parse_meta(const Json& meta) {
  if (!meta.is_object()) throw GameError("\"meta\" must be an object");
  GameMeta out;
  if (auto it = meta.find("generator"); it != meta.end()) {
    if (!it->is_string()) throw GameError("meta.generator must be a string");
    out.generator = it->get<std::string>();
  }
  if (auto it = meta.find("params"); it != meta.end()) {
    if (!it->is_object()) throw GameError("meta.params must be an object");
    for (const auto& [key, value] : it->items()) {
      out.params[key] = value.is_string() ? value.get<std::string>()
                                          : value.dump();
    }
  }
  if (auto it = meta.find("grid"); it != meta.end()) {
    if (!it->is_array()) throw GameError("meta.grid must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      if (!v.is_string()) throw GameError("meta.grid entries must be strings");
      try {
        out.grid.push_back(Rational::parse(v.get<std::string>()));
      } catch (const RationalFormatError& e) {
        throw GameError(std::string("meta.grid: ") + e.what(), i);
      }
    }
  }
  return out;
}

}  // namespace

SymmetricGame parse_game(std::string_view document) {
  Json parsed;
  try {
    parsed = Json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw GameError(std::string("malformed JSON: ") + e.what());
  }
  return parse_game(parsed);
}

SymmetricGame parse_game(const Json& doc) {
  if (!doc.is_object()) throw GameError("game document must be an object");
  const auto actions_it = doc.find("actions");
  const auto payoffs_it = doc.find("payoffs");
  if (actions_it == doc.end() || !actions_it->is_array()) {
    throw GameError("\"actions\" must be an array of strings");
  }
  if (payoffs_it == doc.end() || !payoffs_it->is_array()) {
    throw GameError("\"payoffs\" must be an array of arrays");
  }

  std::vector<std::string> actions;
  for (std::size_t i = 0; i < actions_it->size(); ++i) {
    const auto& a = (*actions_it)[i];
    if (!a.is_string()) throw GameError("action label must be a string", i);
    actions.push_back(a.get<std::string>());
  }

  const std::size_t n = actions.size();
  const auto& rows = *payoffs_it;
  if (rows.size() != n) {
    throw GameError("non-square payoff matrix: " + std::to_string(rows.size()) +
                    " rows for " + std::to_string(n) + " actions");
  }
  PayoffMatrix payoff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) throw GameError("payoff row must be an array", i);
    if (row.size() != n) {
      throw GameError("non-square payoff matrix: row has " +
                          std::to_string(row.size()) + " entries, expected " +
                          std::to_string(n),
                      i);
    }
    for (std::size_t j = 0; j < n; ++j) payoff(i, j) = parse_cell(row[j], i, j);
  }

  std::optional<GameMeta> meta;
  if (auto it = doc.find("meta"); it != doc.end()) meta = parse_meta(*it);
  return SymmetricGame(std::move(actions), std::move(payoff), std::move(meta));
}

Json rational_json(const Rational& r) { return r.str(); }

Json matrix_json(const PayoffMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (const auto& v : m.row(i)) row.push_back(v.str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json game_to_json(const SymmetricGame& game) {
  Json doc;
  doc["actions"] = game.actions();
  doc["payoffs"] = matrix_json(game.payoff_matrix());
  if (const auto& meta = game.meta()) {
    Json m;
    m["generator"] = meta->generator;
    Json params = Json::object();
    for (const auto& [k, v] : meta->params) params[k] = v;
    m["params"] = std::move(params);
    Json grid = Json::array();
    for (const auto& g : meta->grid) grid.push_back(g.str());
    m["grid"] = std::move(grid);
    doc["meta"] = std::move(m);
  }
  return doc;
}

std::string serialize_game(const SymmetricGame& game) {
  return game_to_json(game).dump();
}

}  // namespace imitation
