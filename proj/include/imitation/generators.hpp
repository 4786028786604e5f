#pragma once

// Parameterised constructors for the standard example families: the fixed
// matrices (rock-paper-scissors, 2x2 classics, the two 3x3 counterexamples)
// and discretised continuous families on exact rational grids.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imitation/game.hpp"

namespace imitation {

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownPresetError : public GeneratorError {
 public:
  using GeneratorError::GeneratorError;
};

/// `points` evenly spaced values from low to high, endpoints included.
struct GridSpec {
  Rational low;
  Rational high;
  std::size_t points = 1;

  /// "low,high,points", e.g. "0,100,41" or "1,2,5".
  static GridSpec parse(std::string_view text);
  /// Throws GeneratorError unless low <= high, points >= 1, and low == high
  /// whenever points == 1.
  std::vector<Rational> values() const;
  std::string str() const;
};

/// c_0 + c_1 x + c_2 x^2 + ...; written "c0,c1,c2".
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial parse(std::string_view text);

  Rational operator()(const Rational& x) const;
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  std::size_t degree() const;
  std::string str() const;

 private:
  std::vector<Rational> coefficients_;
};

using Params = std::map<std::string, std::string>;

struct PresetInfo {
  std::string name;
  std::string description;
  Params defaults;
  /// Continuous families need a grid; fixed matrices do not take one.
  std::optional<GridSpec> default_grid;
  bool aggregative = false;
};

const std::vector<PresetInfo>& presets();
const PresetInfo& preset_info(std::string_view name);

struct Generated {
  SymmetricGame game;
  /// Present for families with the aggregator a(x, y) = x + y.
  std::optional<AggregativeGame> aggregative;
};

/// Builds a preset. Missing params fall back to defaults, unknown params
/// are rejected, and a missing grid uses the preset's default grid. Throws
/// UnknownPresetError or GeneratorError (parameter out of domain).
Generated generate(std::string_view preset, const Params& params = {},
                   const std::optional<GridSpec>& grid = std::nullopt);

/// Integer payoffs uniform in [-value_range, value_range], deterministic in
/// (seed, actions, value_range). Actions are labelled a0, a1, ...
SymmetricGame random_game(std::uint64_t seed, std::size_t actions,
                          std::int64_t value_range);

}  // namespace imitation
