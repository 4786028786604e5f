#pragma once

// Small builders for hand-written fixtures.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "imitation/game.hpp"

namespace fixtures {

using imitation::PayoffMatrix;
using imitation::Rational;

inline PayoffMatrix matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  PayoffMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (std::int64_t v : row) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

inline imitation::SymmetricGame game(
    std::vector<std::string> actions,
    std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  return imitation::SymmetricGame(std::move(actions), matrix(rows));
}

inline imitation::RelativePayoffGame relative(
    std::vector<std::string> actions,
    std::initializer_list<std::initializer_list<std::int64_t>> delta) {
  return imitation::RelativePayoffGame::from_delta(std::move(actions), matrix(delta));
}

inline imitation::SymmetricGame rps() {
  return game({"R", "P", "S"}, {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
}
inline imitation::SymmetricGame chicken() {
  return game({"swerve", "straight"}, {{3, 1}, {4, 0}});
}
// Coordination with an outside option; its relative payoff matrix is
// [[0,-3,0],[3,0,0],[0,0,0]].
inline imitation::SymmetricGame gopotential() {
  return game({"A", "B", "C"}, {{4, -1, 0}, {2, 3, 0}, {0, 0, 0}});
}
// Read directly as a relative payoff matrix.
inline imitation::RelativePayoffGame ngrps_gop() {
  return relative({"a", "b", "c"}, {{0, 0, -1}, {0, 0, 1}, {1, -1, 0}});
}

}  // namespace fixtures
