#pragma once

// Sufficient-condition classifiers. Each check either produces a
// certificate, re-verified against its defining condition before it is
// returned, or a concrete counterexample tuple.
//
//   separable          Delta(x,y) = f(x) - f(y)          => essentially unbeatable
//   differences        increasing / decreasing / valuation (same as separable)
//   quasiconcave       every column of Delta single-peaked  => no money pump
//   improvement        no strict improvement cycle (gen. ordinal potential)
//                                                           => no money pump
//   aggregative        single-crossing of Pi(x, z) in (x, z), quasiconcavity /
//                      strict quasiconvexity in x, aggregative fESS

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "imitation/game.hpp"

namespace imitation {

// ---------------------------------------------------------------------------
// Additive separability

struct SeparabilityCertificate {
  /// f(x) = Delta(x, reference_action).
  std::vector<Rational> f;
  ActionIndex reference_action = 0;
};

/// Delta(far, near) != Delta(far, mid) + Delta(mid, near).
struct SeparabilityViolation {
  ActionIndex far = 0;
  ActionIndex mid = 0;
  ActionIndex near = 0;
  Rational direct;
  Rational via_mid;
};

using SeparabilityResult =
    std::variant<SeparabilityCertificate, SeparabilityViolation>;

SeparabilityResult check_separable(const RelativePayoffGame& rel);

bool verify_separable(const RelativePayoffGame& rel,
                      const SeparabilityCertificate& cert);

/// First triple breaking Delta(x'', x) = Delta(x'', x') + Delta(x', x).
std::optional<SeparabilityViolation> one_large_step_violation(
    const RelativePayoffGame& rel);

// ---------------------------------------------------------------------------
// Increasing / decreasing differences under the index order

/// x_hi > x_lo and y_hi > y_lo in index order.
struct Quadruple {
  ActionIndex x_hi = 0;
  ActionIndex x_lo = 0;
  ActionIndex y_hi = 0;
  ActionIndex y_lo = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

struct DifferencesReport {
  bool increasing = true;
  bool decreasing = true;
  std::optional<Quadruple> increasing_violation;
  std::optional<Quadruple> decreasing_violation;

  bool valuation() const { return increasing && decreasing; }
};

/// Throws InternalError if increasing and decreasing differences disagree,
/// which cannot happen for an antisymmetric Delta.
DifferencesReport check_differences(const RelativePayoffGame& rel);

// ---------------------------------------------------------------------------
// Quasiconcavity (single-peaked columns)

struct QuasiconcavityReport {
  bool holds = false;
  /// The order (as action indices, smallest first) that makes every column
  /// single-peaked; empty when none was found.
  std::vector<ActionIndex> order_used;
  /// A column that is not single-peaked under the first order tried.
  std::optional<ActionIndex> violating_column;
};

/// True iff every column of Delta is single-peaked under `order`. On failure
/// stores the first offending column.
bool single_peaked_under(const RelativePayoffGame& rel,
                         const std::vector<ActionIndex>& order,
                         std::optional<ActionIndex>* violating_column = nullptr);

inline constexpr std::size_t kMaxOrderSearchActions = 10;

/// Tests the index order (or `order` when given). With `search_orders`,
/// tries every permutation up to reversal; requires
/// size() <= kMaxOrderSearchActions (std::invalid_argument otherwise).
QuasiconcavityReport check_quasiconcave(
    const RelativePayoffGame& rel, bool search_orders,
    const std::optional<std::vector<ActionIndex>>& order = std::nullopt);

// ---------------------------------------------------------------------------
// Strict improvement paths and generalized ordinal potentials on (X, Delta)

/// (player-1 action, player-2 action).
using Profile = std::pair<ActionIndex, ActionIndex>;

struct PotentialFunction {
  /// level(x, y) strictly increases along every strict improvement.
  SquareMatrix<std::int64_t> level;
};

/// Closed sequential path; front() == back().
struct ImprovementCycle {
  std::vector<Profile> profiles;
};

using PotentialCertificate = std::variant<PotentialFunction, ImprovementCycle>;

/// Builds the sequential strict-improvement digraph on X x X. Acyclic: the
/// longest-path level of each profile is returned as a generalized ordinal
/// potential. Cyclic: the shortest cycle through the first cyclic profile,
/// profiles ordered by (player-2 action, player-1 action).
/// Cost: n^2 nodes and O(n^3) edges.
PotentialCertificate improvement_analysis(const RelativePayoffGame& rel);

/// Delta(x,y) > Delta(x',y) implies P(x,y) > P(x',y) and P(y,x) > P(y,x').
template <typename T>
bool verify_generalized_ordinal_potential(const RelativePayoffGame& rel,
                                          const SquareMatrix<T>& potential) {
  const std::size_t n = rel.size();
  for (ActionIndex y = 0; y < n; ++y) {
    for (ActionIndex x = 0; x < n; ++x) {
      for (ActionIndex xp = 0; xp < n; ++xp) {
        if (!(rel.delta(xp, y) < rel.delta(x, y))) continue;
        if (!(potential(xp, y) < potential(x, y))) return false;
        if (!(potential(y, xp) < potential(y, x))) return false;
      }
    }
  }
  return true;
}

/// Each step changes exactly one player's action and strictly raises that
/// player's relative payoff; the path is closed and non-trivial.
bool is_strict_improvement_cycle(const RelativePayoffGame& rel,
                                 const std::vector<Profile>& profiles);

// ---------------------------------------------------------------------------
// Aggregative games

/// Offending actions (ascending order positions) and aggregate indices.
struct AggregativeWitness {
  std::vector<ActionIndex> actions;
  std::vector<std::size_t> aggregates;
};

struct AggregativeFlag {
  bool holds = true;
  std::optional<AggregativeWitness> counterexample;
};

struct AggregativeReport {
  AggregativeFlag quasisubmodular;
  AggregativeFlag quasisupermodular;
  AggregativeFlag submodular;
  AggregativeFlag supermodular;
  AggregativeFlag quasiconcave_in_x;
  AggregativeFlag strictly_quasiconvex_in_x;
  std::vector<ActionIndex> fess;
  bool fess_exists = false;
  /// Every aggregative fESS is min X or max X.
  AggregativeFlag corner_fess_only;
};

/// Throws GameError if Pi(x, a(x, y)) != pi(x, y) anywhere, and
/// InternalError if submodular does not imply quasisubmodular (or the
/// super- analogue), or if a complete strictly quasiconvex quasisupermodular
/// table has an interior fESS.
AggregativeReport check_aggregative(const AggregativeGame& agg,
                                    const SymmetricGame& game);

}  // namespace imitation
