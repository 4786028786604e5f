#include "imitation/game.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace imitation {
namespace {

std::string locate(const std::string& what, std::optional<std::size_t> row,
                   std::optional<std::size_t> column) {
  std::string out = what;
  if (row) out += " (row " + std::to_string(*row);
  if (row && column) out += ", column " + std::to_string(*column);
  if (row) out += ")";
  return out;
}

void validate_labels(const std::vector<std::string>& actions) {
  if (actions.empty()) throw GameError("game needs at least one action");
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].empty()) throw GameError("empty action label", i);
    if (!seen.insert(actions[i]).second) {
      throw GameError("duplicate action label \"" + actions[i] + "\"", i);
    }
  }
}

std::optional<ActionIndex> find_label(const std::vector<std::string>& actions,
                                      std::string_view label) {
  auto it = std::find(actions.begin(), actions.end(), label);
  if (it == actions.end()) return std::nullopt;
  return static_cast<ActionIndex>(it - actions.begin());
}

}  // namespace

GameError::GameError(const std::string& what, std::optional<std::size_t> row,
                     std::optional<std::size_t> column)
    : std::invalid_argument(locate(what, row, column)),
      row_(row),
      column_(column) {}

SymmetricGame::SymmetricGame(std::vector<std::string> actions,
                             PayoffMatrix payoff,
                             std::optional<GameMeta> meta)
    : actions_(std::move(actions)),
      payoff_(std::move(payoff)),
      meta_(std::move(meta)) {
  validate_labels(actions_);
  if (payoff_.size() != actions_.size()) {
    throw GameError("payoff matrix is " + std::to_string(payoff_.size()) +
                    "x" + std::to_string(payoff_.size()) + " but there are " +
                    std::to_string(actions_.size()) + " actions");
  }
}

std::optional<ActionIndex> SymmetricGame::index_of(
    std::string_view label) const {
  return find_label(actions_, label);
}

ActionIndex SymmetricGame::require_index(std::string_view label) const {
  if (auto i = index_of(label)) return *i;
  throw GameError("unknown action \"" + std::string(label) + "\"");
}

std::optional<std::pair<ActionIndex, ActionIndex>> antisymmetry_violation(
    const PayoffMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m(i, i).is_zero()) return std::pair{i, i};
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m(i, j) != -m(j, i)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

RelativePayoffGame::RelativePayoffGame(
    std::vector<std::string> actions, PayoffMatrix delta,
    std::shared_ptr<const SymmetricGame> base)
    : actions_(std::move(actions)),
      delta_(std::move(delta)),
      base_(std::move(base)),
      beaten_by_(actions_.size()) {
  const std::size_t n = actions_.size();
  for (ActionIndex y = 0; y < n; ++y) {
    for (ActionIndex x = 0; x < n; ++x) {
      if (delta_(x, y).is_positive()) beaten_by_[y].push_back(x);
      if (delta_hat_ < delta_(x, y)) delta_hat_ = delta_(x, y);
    }
  }
}

RelativePayoffGame RelativePayoffGame::from_delta(
    std::vector<std::string> actions, PayoffMatrix delta) {
  validate_labels(actions);
  if (delta.size() != actions.size()) {
    throw GameError("relative payoff matrix size does not match actions");
  }
  if (auto bad = antisymmetry_violation(delta)) {
    throw GameError("matrix is not antisymmetric", bad->first, bad->second);
  }
  return RelativePayoffGame(std::move(actions), std::move(delta), nullptr);
}

std::optional<ActionIndex> RelativePayoffGame::index_of(
    std::string_view label) const {
  return find_label(actions_, label);
}

RelativePayoffGame relative_payoff_game(const SymmetricGame& game) {
  const std::size_t n = game.size();
  PayoffMatrix delta(n);
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      delta(x, y) = game.payoff(x, y) - game.payoff(y, x);
    }
  }
  return RelativePayoffGame(game.actions(), std::move(delta),
                            std::make_shared<const SymmetricGame>(game));
}

AggregativeGame::AggregativeGame(std::vector<std::string> actions,
                                 std::vector<Rational> values,
                                 const Aggregator& aggregator,
                                 const ExtendedPayoff& payoff)
    : actions_(std::move(actions)), values_(std::move(values)) {
  validate_labels(actions_);
  const std::size_t n = actions_.size();
  if (values_.size() != n) {
    throw GameError("aggregative game: one value per action required");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(values_[i - 1] < values_[i])) {
      throw GameError("aggregative game: action values must be ascending", i);
    }
  }

  SquareMatrix<Rational> raw(n);
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      raw(x, y) = aggregator(values_[x], values_[y]);
    }
  }
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      if (raw(x, y) != raw(y, x)) {
        throw GameError("aggregator is not symmetric", x, y);
      }
      // On a product of chains, strict monotonicity reduces to the two
      // immediate successors of each cell.
      if (x + 1 < n && !(raw(x, y) < raw(x + 1, y))) {
        throw GameError("aggregator is not strictly increasing", x, y);
      }
      if (y + 1 < n && !(raw(x, y) < raw(x, y + 1))) {
        throw GameError("aggregator is not strictly increasing", x, y);
      }
    }
  }

  std::set<Rational> distinct;
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) distinct.insert(raw(x, y));
  }
  aggregates_.assign(distinct.begin(), distinct.end());
  agg_index_ = SquareMatrix<std::size_t>(n);
  for (ActionIndex x = 0; x < n; ++x) {
    for (ActionIndex y = 0; y < n; ++y) {
      auto it = std::lower_bound(aggregates_.begin(), aggregates_.end(),
                                 raw(x, y));
      agg_index_(x, y) = static_cast<std::size_t>(it - aggregates_.begin());
    }
  }

  extended_.resize(n * aggregates_.size());
  for (ActionIndex x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < aggregates_.size(); ++z) {
      extended_[x * aggregates_.size() + z] = payoff(values_[x], aggregates_[z]);
    }
  }
}

const Rational& AggregativeGame::payoff(ActionIndex x, ActionIndex y) const {
  const auto& cell = extended(x, aggregate_index(x, y));
  if (!cell) {
    throw GameError("extended payoff undefined at a reachable profile", x, y);
  }
  return *cell;
}

bool AggregativeGame::table_complete() const {
  return std::all_of(extended_.begin(), extended_.end(),
                     [](const auto& c) { return c.has_value(); });
}

}  // namespace imitation
