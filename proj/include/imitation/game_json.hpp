#pragma once

// JSON game documents:
//   {"actions": ["R", "P", "S"],
//    "payoffs": [["0", "-1", "1"], ...],          row player's payoff
//    "meta": {"generator": "...", "params": {...}, "grid": ["0", "5/2"]}}
// Every number is a string holding an integer or "p/q" with q > 0.

#include <string>
#include <string_view>

#include <json.hpp>

#include "imitation/game.hpp"

namespace imitation {

using Json = nlohmann::ordered_json;

/// Throws GameError (with row/column where applicable) on any schema
/// violation, including JSON syntax errors.
SymmetricGame parse_game(std::string_view document);
SymmetricGame parse_game(const Json& document);
// Text overloads; without them a std::string would also convert to Json.
inline SymmetricGame parse_game(const std::string& document) {
  return parse_game(std::string_view(document));
}
inline SymmetricGame parse_game(const char* document) {
  return parse_game(std::string_view(document));
}

Json game_to_json(const SymmetricGame& game);
std::string serialize_game(const SymmetricGame& game);

Json rational_json(const Rational& r);
Json matrix_json(const PayoffMatrix& m);

}  // namespace imitation
