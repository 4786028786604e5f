#pragma once

// Finite symmetric two-player games, their relative payoff transform and the
// aggregative representation used by the single-crossing classifiers.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "imitation/rational.hpp"

namespace imitation {

using ActionIndex = std::size_t;

/// Invalid game data. `row`/`column` locate the offending matrix cell when
/// there is one.
class GameError : public std::invalid_argument {
 public:
  explicit GameError(const std::string& what,
                     std::optional<std::size_t> row = std::nullopt,
                     std::optional<std::size_t> column = std::nullopt);

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

/// Raised when two independent routes to the same mathematical fact disagree.
/// Always a bug in this library, never a property of the input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Dense n x n matrix, row major.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T{})
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t row, std::size_t col) {
    return data_[row * n_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col];
  }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * n_, n_};
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using PayoffMatrix = SquareMatrix<Rational>;

/// Where a game came from. Generators fill it; hand-written files may omit it.
struct GameMeta {
  std::string generator;
  std::map<std::string, std::string> params;
  std::vector<Rational> grid;

  friend bool operator==(const GameMeta&, const GameMeta&) = default;
};

/// (X, pi): entry (i, j) is the payoff to the player choosing action i
/// against action j. Immutable once constructed.
class SymmetricGame {
 public:
  /// Throws GameError on empty action set, duplicate or empty labels, or a
  /// matrix whose size does not match the action count.
  SymmetricGame(std::vector<std::string> actions, PayoffMatrix payoff,
                std::optional<GameMeta> meta = std::nullopt);

  std::size_t size() const { return actions_.size(); }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::string& label(ActionIndex i) const { return actions_.at(i); }
  std::optional<ActionIndex> index_of(std::string_view label) const;
  /// index_of that throws GameError for unknown labels.
  ActionIndex require_index(std::string_view label) const;

  const Rational& payoff(ActionIndex row, ActionIndex col) const {
    return payoff_(row, col);
  }
  const PayoffMatrix& payoff_matrix() const { return payoff_; }
  const std::optional<GameMeta>& meta() const { return meta_; }

  friend bool operator==(const SymmetricGame&,
                         const SymmetricGame&) = default;

 private:
  std::vector<std::string> actions_;
  PayoffMatrix payoff_;
  std::optional<GameMeta> meta_;
};

/// (X, Delta) with Delta(x, y) = pi(x, y) - pi(y, x). Carries the
/// beaten-digraph: an edge y -> x whenever Delta(x, y) > 0, i.e. the
/// maximizer playing x against an imitator on y gains and is copied.
class RelativePayoffGame {
 public:
  /// Throws GameError if `delta` is not antisymmetric with zero diagonal.
  static RelativePayoffGame from_delta(std::vector<std::string> actions,
                                       PayoffMatrix delta);

  std::size_t size() const { return actions_.size(); }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::string& label(ActionIndex i) const { return actions_.at(i); }
  std::optional<ActionIndex> index_of(std::string_view label) const;

  const Rational& delta(ActionIndex x, ActionIndex y) const {
    return delta_(x, y);
  }
  const PayoffMatrix& delta_matrix() const { return delta_; }

  /// The game this was derived from, if any.
  const std::shared_ptr<const SymmetricGame>& base() const { return base_; }

  /// Maximizer actions x with Delta(x, y) > 0, ascending.
  std::span<const ActionIndex> beating(ActionIndex y) const {
    return beaten_by_[y];
  }
  bool is_sink(ActionIndex y) const { return beaten_by_[y].empty(); }

  /// max over x, y of Delta(x, y); never negative because of the diagonal.
  const Rational& delta_hat() const { return delta_hat_; }

 private:
  friend RelativePayoffGame relative_payoff_game(const SymmetricGame& game);
  RelativePayoffGame(std::vector<std::string> actions, PayoffMatrix delta,
                     std::shared_ptr<const SymmetricGame> base);

  std::vector<std::string> actions_;
  PayoffMatrix delta_;
  std::shared_ptr<const SymmetricGame> base_;
  std::vector<std::vector<ActionIndex>> beaten_by_;
  Rational delta_hat_;
};

RelativePayoffGame relative_payoff_game(const SymmetricGame& game);

/// Checks Delta(x, y) == -Delta(y, x) and a zero diagonal. Returns the first
/// violating (row, col) or nullopt.
std::optional<std::pair<ActionIndex, ActionIndex>> antisymmetry_violation(
    const PayoffMatrix& m);

/// A game whose payoff factors through a symmetric, strictly monotone
/// aggregator: pi(x, y) = Pi(x, a(x, y)). Actions are ordered by `values`.
class AggregativeGame {
 public:
  using Aggregator = std::function<Rational(const Rational&, const Rational&)>;
  /// Pi(x, z); nullopt where the closed form is undefined (e.g. z = 0 with
  /// x > 0 in a contest).
  using ExtendedPayoff =
      std::function<std::optional<Rational>(const Rational&, const Rational&)>;

  /// Evaluates `aggregator` on every action pair and `payoff` on every
  /// (action, aggregate) pair. Throws GameError if values are not strictly
  /// ascending or the aggregator is not symmetric and strictly monotone.
  AggregativeGame(std::vector<std::string> actions,
                  std::vector<Rational> values, const Aggregator& aggregator,
                  const ExtendedPayoff& payoff);

  std::size_t size() const { return actions_.size(); }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<Rational>& values() const { return values_; }
  /// Sorted distinct aggregate values Z.
  const std::vector<Rational>& aggregates() const { return aggregates_; }
  std::size_t aggregate_count() const { return aggregates_.size(); }
  /// Index into aggregates() of a(x, y).
  std::size_t aggregate_index(ActionIndex x, ActionIndex y) const {
    return agg_index_(x, y);
  }
  const std::optional<Rational>& extended(ActionIndex x,
                                          std::size_t z) const {
    return extended_[x * aggregates_.size() + z];
  }
  /// Pi(x, a(x, y)); throws GameError when that cell is undefined.
  const Rational& payoff(ActionIndex x, ActionIndex y) const;
  bool table_complete() const;

 private:
  std::vector<std::string> actions_;
  std::vector<Rational> values_;
  std::vector<Rational> aggregates_;
  SquareMatrix<std::size_t> agg_index_;
  std::vector<std::optional<Rational>> extended_;
};

}  // namespace imitation
